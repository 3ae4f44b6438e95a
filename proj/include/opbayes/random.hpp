// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace opbayes {

/// Anything producing uniforms on the open interval (0, 1). Samplers are
/// generic over the stream so tests can substitute counting or scripted
/// streams.
template <class S>
concept UniformStream = requires(S s) {
    { s.u01() } -> std::convertible_to<double>;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random stream over mt19937_64. All library samplers consume
/// uniforms through u01() only, so a fixed seed fixes every downstream draw.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Derive an independent stream for a numbered block of work; the mapping
    /// (master, index) -> stream is fixed, which makes partitioned simulation
    /// independent of worker count.
    static Rng derive(std::uint64_t master_seed, std::uint64_t stream_index) {
        return Rng(detail::splitmix64(master_seed ^ detail::splitmix64(stream_index + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1); never returns 0 or 1, so logs of
    /// either u or 1-u are always finite.
    double u01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Standard normal via Box-Muller; consumes exactly two uniforms.
template <UniformStream S>
inline double standard_normal(S& stream) {
    const double u1 = stream.u01();
    const double u2 = stream.u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Gamma(shape, scale) draw by Marsaglia-Tsang squeeze, boosted for shape < 1.
template <UniformStream S>
inline double sample_gamma(double shape, double scale, S& stream) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::domain_error("sample_gamma: require shape > 0 and scale > 0");
    if (shape < 1.0) {
        const double u = stream.u01();
        return sample_gamma(shape + 1.0, scale, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = standard_normal(stream);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.u01();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

}  // namespace opbayes
