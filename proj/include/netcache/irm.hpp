#ifndef NETCACHE_IRM_HPP
#define NETCACHE_IRM_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace netcache {

// Content popularity distribution, sorted non-increasing and summing to one.
// Content ids are 1-based throughout.
class Popularity {
public:
    explicit Popularity(std::vector<double> probs);

    // q_i = i^-alpha / sum_j j^-alpha
    static Popularity zipf(double alpha, std::uint32_t n);

    double prob(std::uint32_t id) const { return probs_[id - 1]; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(probs_.size()); }
    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

enum class IrmPolicy : std::uint8_t { Lru, Sel };

// Steady-state probability of an ordered cache state under LRU
// (move-to-front product form).
double pi_lru(const Popularity& q, std::span<const std::uint32_t> sigma);

// Probability that a selection cache freezes in the given ordered state:
// the chain of conditional first-occupancy probabilities, excluding the
// already-selected content and renormalizing at each step.
double pi_sel(const Popularity& q, std::span<const std::uint32_t> sigma);

// Exact hit ratio by enumerating every ordered c-tuple of distinct contents.
// Refuses catalogs beyond n = 10 where enumeration blows up.
double hit_ratio_closed_form(const Popularity& q, std::uint32_t c, IrmPolicy policy);

// Independent brute-force oracle: builds the exact LRU move-to-front Markov
// chain over ordered cache states and solves for its stationary distribution
// by power iteration (residual < 1e-10). Guarded to n <= 7, c <= 3.
std::map<std::vector<std::uint32_t>, double> lru_stationary_oracle(const Popularity& q,
                                                                   std::uint32_t c);

// Monte-Carlo hit ratio under IRM. For the selection policy the ratio is
// measured over frozen intervals only, so it estimates the frozen-state
// stationary hit ratio rather than amortizing selection misses.
double simulate_irm_hit_ratio(const Popularity& q, std::uint32_t c, IrmPolicy policy,
                              std::uint64_t requests, std::uint64_t seed);

} // namespace netcache

#endif
