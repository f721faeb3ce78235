#include "polykin/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "polykin/random.hpp"
#include "polykin/transport.hpp"

namespace polykin::config {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

/// Small reader that remembers where it is in the document so every error
/// can name the field.
class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    std::string path(const std::string& key) const { return join(path_, key); }

    Block child(const std::string& key) const
    {
        if (!has(key)) throw ConfigError(path(key), "missing required block");
        return Block(j_.at(key), path(key));
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) const
    {
        if (!has(key)) {
            if (fallback) return *fallback;
            throw ConfigError(path(key), "missing required number");
        }
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(path(key), "expected a number, got " + v.dump());
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path(key), "must be finite");
        return d;
    }

    std::uint64_t integer(const std::string& key, std::uint64_t fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 1.8e19) return static_cast<std::uint64_t>(d);
        }
        throw ConfigError(path(key), "expected a non-negative integer, got " + v.dump());
    }

    std::string string(const std::string& key, const std::string& fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(path(key), "expected a string, got " + v.dump());
        return v.get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(path(key), "expected true/false, got " + v.dump());
        return v.get<bool>();
    }

    Vec3 vec3(const std::string& key, Vec3 fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_array() || v.size() != 3) throw ConfigError(path(key), "expected an array of 3 numbers");
        Vec3 out;
        double* dst[3] = {&out.x, &out.y, &out.z};
        for (std::size_t i = 0; i < 3; ++i) {
            if (!v[i].is_number()) throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a number");
            *dst[i] = v[i].get<double>();
        }
        return out;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void only(std::initializer_list<const char*> allowed) const
    {
        for (const auto& [k, _] : j_.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ConfigError(path(k), "unknown field");
        }
    }

    const json& raw() const { return j_; }

private:
    const json& j_;
    std::string path_;
};

void require(bool ok, const std::string& field, const std::string& message)
{
    if (!ok) throw ConfigError(field, message);
}

void positive(const Block& b, const std::string& key, double v)
{
    require(v > 0.0, b.path(key), "must be positive");
}

}  // namespace

KernelParams RunConfig::kernel_params() const
{
    AngularModel ang = AngularModel::constant();
    if (kernel.angular == "power") {
        const double g = kernel.angular_exponent;
        ang = AngularModel::custom([g](double x) { return std::pow(x, g); }, 1.0,
                                   "power(" + std::to_string(g) + ")");
    }
    return KernelParams(alpha, kernel.zeta, kernel.K, kernel.eta, kernel.eta_f, kernel.omega, ang);
}

RunConfig parse_run_config(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    const Block root(doc, "");
    root.only({"units", "species", "kernel", "initial", "solver", "output"});
    RunConfig cfg;

    cfg.units_name = root.string("units", "nondimensional");
    if (cfg.units_name == "si") cfg.units = Units::si();
    else if (cfg.units_name == "nondimensional") cfg.units = Units::nondimensional();
    else throw ConfigError("units", "expected \"si\" or \"nondimensional\", got \"" + cfg.units_name + "\"");

    {
        const Block sp = root.child("species");
        sp.only({"m", "alpha", "c_v_hat"});
        cfg.m = sp.number("m", 1.0);
        positive(sp, "m", cfg.m);
        require(!(sp.has("alpha") && sp.has("c_v_hat")), sp.path("alpha"), "give either alpha or c_v_hat, not both");
        if (sp.has("c_v_hat")) {
            const double cv = sp.number("c_v_hat");
            require(cv > 1.5, sp.path("c_v_hat"), "must exceed 3/2");
            cfg.alpha = transport::alpha_from_cv(cv).alpha;
        } else {
            cfg.alpha = sp.number("alpha", 0.0);
            require(cfg.alpha > -1.0, sp.path("alpha"), "must exceed -1");
        }
    }

    if (root.has("kernel")) {
        const Block k = root.child("kernel");
        k.only({"zeta", "K", "eta", "eta_f", "omega", "angular", "angular_exponent"});
        auto& kc = cfg.kernel;
        kc.zeta = k.number("zeta", kc.zeta);
        require(kc.zeta > 0.0 && kc.zeta <= 2.0, k.path("zeta"), "must lie in (0, 2]");
        kc.K = k.number("K", kc.K);
        require(kc.K >= 0.0, k.path("K"), "must be non-negative");
        kc.eta = k.number("eta", kc.eta);
        require(kc.eta >= 0.0, k.path("eta"), "must be non-negative");
        kc.eta_f = k.number("eta_f", kc.eta_f);
        require(kc.eta_f >= 0.0, k.path("eta_f"), "must be non-negative");
        kc.omega = k.number("omega", kc.omega);
        require(kc.omega >= 0.0 && kc.omega <= 1.0, k.path("omega"), "must lie in [0, 1]");
        kc.angular = k.string("angular", kc.angular);
        require(kc.angular == "constant" || kc.angular == "power", k.path("angular"),
                "expected \"constant\" or \"power\"");
        kc.angular_exponent = k.number("angular_exponent", kc.angular_exponent);
        require(kc.angular_exponent >= 0.0, k.path("angular_exponent"), "must be non-negative");
    }

    {
        const Block ic = root.child("initial");
        ic.only({"type", "N", "n", "seed", "U", "T", "T_int", "T_trans"});
        auto& init = cfg.initial;
        init.N = ic.integer("N", init.N);
        require(init.N >= 2, ic.path("N"), "need at least 2 particles");
        init.n = ic.number("n", init.n);
        positive(ic, "n", init.n);
        init.seed = ic.integer("seed", init.seed);
        if (!ic.has("type")) throw ConfigError(ic.path("type"), "missing initial-condition type");
        const std::string type = ic.string("type", "");
        auto temp = [&](const std::string& key, double fallback) {
            const double t = ic.number(key, fallback);
            positive(ic, key, t);
            return t;
        };
        auto forbid = [&](std::initializer_list<const char*> keys) {
            for (const char* key : keys)
                require(!ic.has(key), ic.path(key), "not a parameter of initial type \"" + type + "\"");
        };
        if (type == "maxwellian") {
            forbid({"T_int", "T_trans"});
            require(!ic.has("T") || ic.raw().at("T").is_number(), ic.path("T"), "expected a number");
            init.variant = MaxwellianIC{ic.vec3("U", {}), temp("T", 1.0)};
        } else if (type == "bimodal") {
            forbid({"T_trans"});
            require(!ic.has("T") || ic.raw().at("T").is_number(), ic.path("T"), "expected a number");
            BimodalIC b;
            b.U = ic.vec3("U", b.U);
            b.T = temp("T", b.T);
            b.T_int = temp("T_int", b.T_int);
            init.variant = b;
        } else if (type == "anisotropic-gaussian") {
            forbid({"U", "T_trans"});
            AnisotropicIC a;
            a.T = ic.vec3("T", a.T);
            require(a.T.x > 0.0 && a.T.y > 0.0 && a.T.z > 0.0, ic.path("T"), "all components must be positive");
            a.T_int = temp("T_int", a.T_int);
            init.variant = a;
        } else if (type == "two-temperature") {
            forbid({"U", "T"});
            TwoTemperatureIC t;
            t.T_trans = temp("T_trans", t.T_trans);
            t.T_int = temp("T_int", t.T_int);
            init.variant = t;
        } else {
            throw ConfigError(ic.path("type"), "expected maxwellian | bimodal | anisotropic-gaussian | two-temperature, got \"" +
                                                   type + "\"");
        }
    }

    if (root.has("solver")) {
        const Block s = root.child("solver");
        s.only({"dt", "t_end", "seed", "record_every", "moment_orders", "majorant_safety", "collisions_per_step",
                "threads", "track_entropy"});
        auto& sc = cfg.solver;
        sc.dt = s.number("dt", sc.dt);
        require(sc.dt >= 0.0, s.path("dt"), "must be non-negative (0 selects automatically)");
        sc.t_end = s.number("t_end", sc.t_end);
        positive(s, "t_end", sc.t_end);
        sc.seed = s.integer("seed", sc.seed);
        sc.record_every = s.integer("record_every", sc.record_every);
        require(sc.record_every >= 1, s.path("record_every"), "must be at least 1");
        sc.moment_orders = s.numbers("moment_orders", sc.moment_orders);
        for (std::size_t i = 0; i < sc.moment_orders.size(); ++i)
            require(sc.moment_orders[i] >= 0.0, s.path("moment_orders") + "[" + std::to_string(i) + "]",
                    "must be non-negative");
        sc.majorant_safety = s.number("majorant_safety", sc.majorant_safety);
        require(sc.majorant_safety >= 1.0, s.path("majorant_safety"), "must be at least 1");
        sc.collisions_per_step = s.number("collisions_per_step", sc.collisions_per_step);
        positive(s, "collisions_per_step", sc.collisions_per_step);
        const auto threads = s.integer("threads", sc.threads);
        require(threads >= 1 && threads <= 1024, s.path("threads"), "must lie in [1, 1024]");
        sc.threads = static_cast<unsigned>(threads);
        sc.track_entropy = s.boolean("track_entropy", sc.track_entropy);
    }

    if (root.has("output")) {
        const Block o = root.child("output");
        o.only({"directory", "csv", "summary"});
        cfg.output.directory = o.string("directory", cfg.output.directory.string());
        cfg.output.csv = o.string("csv", cfg.output.csv);
        cfg.output.summary = o.string("summary", cfg.output.summary);
        require(!cfg.output.csv.empty(), o.path("csv"), "must not be empty");
        require(!cfg.output.summary.empty(), o.path("summary"), "must not be empty");
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

namespace {

Particle draw(Rng& rng, const Vec3& mean, const Vec3& T, double T_int, double alpha, double m, double kB)
{
    Particle p;
    p.v = {mean.x + std::sqrt(kB * T.x / m) * rng.normal(), mean.y + std::sqrt(kB * T.y / m) * rng.normal(),
           mean.z + std::sqrt(kB * T.z / m) * rng.normal()};
    p.I = kB * T_int * rng.gamma(alpha + 1.0);
    return p;
}

}  // namespace

Ensemble make_bimodal(const Species& sp, const BimodalIC& ic, std::size_t N, double n, std::uint64_t seed,
                      const Units& units)
{
    Rng rng(seed);
    std::vector<Particle> ps;
    ps.reserve(N);
    const Vec3 T{ic.T, ic.T, ic.T};
    for (std::size_t i = 0; i < N; ++i)
        ps.push_back(draw(rng, i % 2 == 0 ? ic.U : -1.0 * ic.U, T, ic.T_int, sp.alpha(), sp.m(), units.kB));
    return Ensemble(sp, std::move(ps), n, units);
}

Ensemble build_ensemble(const RunConfig& cfg)
{
    const Species sp(cfg.m, cfg.alpha);
    const auto& init = cfg.initial;
    const double kB = cfg.units.kB;
    if (const auto* mx = std::get_if<MaxwellianIC>(&init.variant))
        return sample_maxwellian({init.n * cfg.m, mx->U, mx->T}, sp, init.N, init.seed, cfg.units);
    if (const auto* b = std::get_if<BimodalIC>(&init.variant))
        return make_bimodal(sp, *b, init.N, init.n, init.seed, cfg.units);

    Rng rng(init.seed);
    std::vector<Particle> ps;
    ps.reserve(init.N);
    Vec3 T;
    double T_int = 0.0;
    if (const auto* a = std::get_if<AnisotropicIC>(&init.variant)) {
        T = a->T;
        T_int = a->T_int;
    } else {
        const auto& t = std::get<TwoTemperatureIC>(init.variant);
        T = {t.T_trans, t.T_trans, t.T_trans};
        T_int = t.T_int;
    }
    for (std::size_t i = 0; i < init.N; ++i) ps.push_back(draw(rng, {}, T, T_int, cfg.alpha, cfg.m, kB));
    return Ensemble(sp, std::move(ps), init.n, cfg.units);
}

}  // namespace polykin::config
