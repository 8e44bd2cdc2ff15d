#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace windml {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen because streams derived from
// (master_seed, index) are documented and platform-independent, which the
// ensemble determinism contract requires; std::mt19937_64 distributions are
// not portable across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Stream for sub-unit `index` of a computation seeded by `master`.
    // mix(master ^ golden_gamma*(index+1)) decorrelates nearby indices.
    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(mix(master ^ (0x9E3779B97F4A7C15ull * (index + 1))));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        return mix_steps(z);
    }

    // Unbiased integer in [0, n) by rejection sampling.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("next_below: n must be > 0");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; one value per call, cached pair.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Sample of k distinct indices from [0, n), ascending output not
    // guaranteed; partial Fisher-Yates.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::vector<int> out(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
            out[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(i)];
        }
        return out;
    }

private:
    static std::uint64_t mix_steps(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t z) { return mix_steps(z + 0x9E3779B97F4A7C15ull); }

    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace windml
