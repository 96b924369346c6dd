#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bubblescope {

// Seeded generator with a fixed uniform->double mapping and a hand-rolled
// Box-Muller transform. std::mt19937_64 output is pinned by the standard and
// the transforms below involve no library distributions, so identical seeds
// give identical streams on every platform (std::normal_distribution does not
// guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform on [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; consumes exactly two raw draws.
    double normal() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace bubblescope
