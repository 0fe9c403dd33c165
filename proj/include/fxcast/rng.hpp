#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace fxcast {

// FNV-1a 64-bit, used both for cache keys and per-module seed splitting.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// Derives a module-local seed from the run seed so every seeded module
// gets an independent stream.
inline std::uint64_t split_seed(std::uint64_t run_seed, std::string_view module_name) {
    return run_seed ^ fnv1a64(module_name);
}

// Thin wrapper around mt19937_64 with distributions implemented from raw
// 64-bit draws, so identical seeds give identical doubles everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return (gen_() >> 11) * (1.0 / 9007199254740992.0); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fxcast
