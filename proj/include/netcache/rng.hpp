#ifndef NETCACHE_RNG_HPP
#define NETCACHE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace netcache {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Decorrelated stream seed from a base seed plus stream tags. Used so that
// every cache / consumer group / generator gets its own reproducible stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(base ^ 0x6a09e667f3bcc909ULL) + splitmix64(a) * 3 + b);
}

// Uniform in [0, 1). Hand-rolled so results do not depend on the standard
// library's distribution implementation.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1], safe as a log() argument.
inline double uniform_open01(Rng& rng) {
    return 1.0 - uniform01(rng);
}

inline double exponential(Rng& rng, double rate) {
    return -std::log(uniform_open01(rng)) / rate;
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    // Rejection-free modulo is fine here: n is tiny compared to 2^64.
    return rng() % n;
}

// Inverse-CDF sampler over a discrete distribution with 1-based outcomes.
class DiscreteSampler {
public:
    explicit DiscreteSampler(std::span<const double> probs) {
        cdf_.reserve(probs.size());
        double acc = 0.0;
        for (double p : probs) {
            acc += p;
            cdf_.push_back(acc);
        }
        if (!cdf_.empty()) cdf_.back() = 1.0;
    }

    std::uint32_t sample(Rng& rng) const {
        const double u = uniform01(rng);
        std::size_t lo = 0, hi = cdf_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] > u) hi = mid; else lo = mid + 1;
        }
        return static_cast<std::uint32_t>(lo + 1);
    }

private:
    std::vector<double> cdf_;
};

} // namespace netcache

#endif
