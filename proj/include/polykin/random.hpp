#pragma once

#include <cstdint>
#include <random>

#include "polykin/vec3.hpp"

namespace polykin {

/// Random source used throughout the library.
///
/// All variates are generated by our own transforms on top of a 64-bit
/// Mersenne twister, so a fixed seed reproduces bit-identical streams on
/// every standard library implementation (the std:: distributions do not
/// give that guarantee).
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1).
    double uniform_open();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    double normal();
    /// Gamma(shape, 1); exact for every shape > 0 (Marsaglia-Tsang with the
    /// U^{1/a} boost for shape < 1).
    double gamma(double shape);
    double beta(double a, double b);
    Vec3 unit_vector();
    /// Uniform on the hemisphere {s : s . axis >= 0}; axis must be unit.
    Vec3 hemisphere(const Vec3& axis);

    /// Independent generator for a sub-task; deterministic in (seed, stream).
    Rng split(std::uint64_t stream) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t stream_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace polykin
