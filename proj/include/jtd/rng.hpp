#pragma once

#include <cstdint>
#include <random>

namespace jtd {

/// Seedable, splittable random source.
///
/// The bit generator is std::mt19937_64, whose output sequence is fixed by the C++ standard.
/// Stream k of seed s is seeded with two SplitMix64 outputs derived from (s, k), so chunked
/// simulations are reproducible independently of the thread count. Variates are produced by
/// explicit transforms (53-bit uniforms, inversion for exponentials, Marsaglia polar for
/// normals) rather than the implementation-defined std distributions, so golden values hold
/// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on (0, 1).
    double uniform();
    double exponential(double rate);
    double normal();

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace jtd
