#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace beaconseg {

//! Philox4x32-10 counter-based generator (Salmon et al., Random123).
//!
//! The output is a pure function of (key, counter), so independent streams
//! are obtained by fixing the seed as key and selecting a stream id in the
//! upper counter words. Satisfies UniformRandomBitGenerator with 64-bit
//! results; every 128-bit block yields two outputs.
class Philox {
public:
    using result_type = std::uint64_t;

    explicit Philox(std::uint64_t seed = 0, std::uint64_t stream = 0)
        : m_Key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          m_Counter{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
          m_Seed{seed}, m_Stream{stream} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (m_Index == 0) {
            m_Block = generate(m_Counter, m_Key);
            increment();
        }
        result_type value = (static_cast<result_type>(m_Block[2 * m_Index + 1]) << 32) | m_Block[2 * m_Index];
        m_Index ^= 1;
        return value;
    }

    //! A generator for stream `stream` under the same seed.
    Philox split(std::uint64_t stream) const { return Philox{m_Seed, stream}; }

    std::uint64_t seed() const { return m_Seed; }
    std::uint64_t stream() const { return m_Stream; }

    bool operator==(const Philox&) const = default;

private:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key) {
        constexpr std::uint64_t M0 = 0xD2511F53;
        constexpr std::uint64_t M1 = 0xCD9E8D57;
        constexpr std::uint32_t W0 = 0x9E3779B9;
        constexpr std::uint32_t W1 = 0xBB67AE85;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = M0 * counter[0];
            std::uint64_t p1 = M1 * counter[2];
            counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0], static_cast<std::uint32_t>(p1),
                       static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += W0;
            key[1] += W1;
        }
        return counter;
    }

    void increment() {
        if (++m_Counter[0] == 0) {
            ++m_Counter[1];
        }
    }

    Key m_Key;
    Block m_Counter;
    std::uint64_t m_Seed;
    std::uint64_t m_Stream;
    Block m_Block{};
    unsigned m_Index = 0;
};

// Distribution helpers. These are written out rather than taken from
// <random> so that streams are identical across standard libraries.

//! Uniform on [0, 1) with 53 random bits.
inline double uniform01(Philox& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

//! Uniform on (0, 1]; safe to take the log of.
inline double uniform_open0(Philox& rng) {
    return 1.0 - uniform01(rng);
}

inline double uniform(Philox& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double exponential(Philox& rng, double rate) {
    return -std::log(uniform_open0(rng)) / rate;
}

//! Geometric with success probability q on {1, 2, ...}: P(n) = (1-q)^(n-1) q.
inline std::uint64_t geometric1(Philox& rng, double q) {
    if (q >= 1.0) {
        return 1;
    }
    double u = uniform_open0(rng);
    double draw = std::floor(std::log(u) / std::log1p(-q));
    return 1 + static_cast<std::uint64_t>(draw);
}

inline double standard_normal(Philox& rng) {
    double u1 = uniform_open0(rng);
    double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

//! von Mises draw in (-pi, pi] around mean direction 0.
//!
//! Best and Fisher (1979) rejection sampler; wrapped normal above kappa=1e5
//! where the rejection constants lose precision.
double von_mises_centered(Philox& rng, double kappa);

//! von Mises draw in [0, 2pi) with mean direction `mu`.
double von_mises(Philox& rng, double mu, double kappa);

} // namespace beaconseg
