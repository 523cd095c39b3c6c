#include "netcache/irm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "netcache/replacement.hpp"
#include "netcache/rng.hpp"
#include "netcache/selection.hpp"

namespace netcache {

Popularity::Popularity(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("Popularity: empty distribution");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (probs_[i] < 0.0) throw std::invalid_argument("Popularity: negative probability");
        if (i > 0 && probs_[i] > probs_[i - 1] + 1e-15) {
            throw std::invalid_argument("Popularity: probabilities must be non-increasing");
        }
        sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("Popularity: probabilities must sum to 1");
    }
}

Popularity Popularity::zipf(double alpha, std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("Popularity::zipf: n must be >= 1");
    std::vector<double> q(n);
    double norm = 0.0;
    for (std::uint32_t i = 1; i <= n; ++i) norm += std::pow(static_cast<double>(i), -alpha);
    for (std::uint32_t i = 1; i <= n; ++i) {
        q[i - 1] = std::pow(static_cast<double>(i), -alpha) / norm;
    }
    return Popularity(std::move(q));
}

namespace {

void validate_state(const Popularity& q, std::span<const std::uint32_t> sigma) {
    if (sigma.size() > q.size()) throw std::invalid_argument("cache state larger than catalog");
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (sigma[i] < 1 || sigma[i] > q.size()) {
            throw std::invalid_argument("cache state references unknown content");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (sigma[j] == sigma[i]) {
                throw std::invalid_argument("cache state entries must be distinct");
            }
        }
    }
}

} // namespace

double pi_lru(const Popularity& q, std::span<const std::uint32_t> sigma) {
    validate_state(q, sigma);
    double prob = 1.0;
    double prefix = 0.0;
    for (std::uint32_t id : sigma) {
        prob *= q.prob(id) / (1.0 - prefix);
        prefix += q.prob(id);
    }
    return prob;
}

double pi_sel(const Popularity& q, std::span<const std::uint32_t> sigma) {
    validate_state(q, sigma);
    // P(first distinct is sigma_1) = q_{sigma_1}; afterwards the remaining
    // contents compete with their popularities renormalized to one.
    double prob = 1.0;
    double remaining_mass = 1.0;
    for (std::uint32_t id : sigma) {
        const double p_next = q.prob(id) / remaining_mass;
        prob *= p_next;
        remaining_mass -= q.prob(id);
    }
    return prob;
}

namespace {

// Visits every ordered c-tuple of distinct contents from 1..n.
template <typename Fn>
void enumerate_states(std::uint32_t n, std::uint32_t c, std::vector<std::uint32_t>& sigma,
                      std::uint32_t used_mask, Fn&& fn) {
    if (sigma.size() == c) {
        fn(sigma);
        return;
    }
    for (std::uint32_t id = 1; id <= n; ++id) {
        const std::uint32_t bit = 1u << (id - 1);
        if (used_mask & bit) continue;
        sigma.push_back(id);
        enumerate_states(n, c, sigma, used_mask | bit, fn);
        sigma.pop_back();
    }
}

} // namespace

double hit_ratio_closed_form(const Popularity& q, std::uint32_t c, IrmPolicy policy) {
    if (c > q.size()) throw std::invalid_argument("hit_ratio_closed_form: c > n");
    if (q.size() > 10) {
        throw std::domain_error("hit_ratio_closed_form: enumeration limited to n <= 10");
    }
    if (c == 0) return 0.0;
    double hit = 0.0;
    std::vector<std::uint32_t> sigma;
    enumerate_states(q.size(), c, sigma, 0, [&](const std::vector<std::uint32_t>& state) {
        const double pi = policy == IrmPolicy::Lru ? pi_lru(q, state) : pi_sel(q, state);
        double resident_mass = 0.0;
        for (std::uint32_t id : state) resident_mass += q.prob(id);
        hit += pi * resident_mass;
    });
    return hit;
}

std::map<std::vector<std::uint32_t>, double> lru_stationary_oracle(const Popularity& q,
                                                                   std::uint32_t c) {
    if (q.size() > 7 || c > 3) {
        throw std::domain_error("lru_stationary_oracle: guarded to n <= 7, c <= 3");
    }
    if (c == 0 || c > q.size()) {
        throw std::invalid_argument("lru_stationary_oracle: need 1 <= c <= n");
    }

    std::vector<std::vector<std::uint32_t>> states;
    std::vector<std::uint32_t> sigma;
    enumerate_states(q.size(), c, sigma, 0,
                     [&](const std::vector<std::uint32_t>& s) { states.push_back(s); });
    std::map<std::vector<std::uint32_t>, std::size_t> state_index;
    for (std::size_t i = 0; i < states.size(); ++i) state_index[states[i]] = i;

    // next[s][j]: state after a request for content j+1 (move to front,
    // evict the last slot if j was absent).
    std::vector<std::vector<std::size_t>> next(states.size(),
                                               std::vector<std::size_t>(q.size()));
    for (std::size_t s = 0; s < states.size(); ++s) {
        for (std::uint32_t id = 1; id <= q.size(); ++id) {
            std::vector<std::uint32_t> to;
            to.reserve(c);
            to.push_back(id);
            for (std::uint32_t resident : states[s]) {
                if (resident != id && to.size() < c) to.push_back(resident);
            }
            next[s][id - 1] = state_index.at(to);
        }
    }

    std::vector<double> pi(states.size(), 1.0 / static_cast<double>(states.size()));
    std::vector<double> fresh(states.size());
    constexpr int kMaxIterations = 1000000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        std::fill(fresh.begin(), fresh.end(), 0.0);
        for (std::size_t s = 0; s < states.size(); ++s) {
            for (std::uint32_t id = 1; id <= q.size(); ++id) {
                fresh[next[s][id - 1]] += pi[s] * q.prob(id);
            }
        }
        double residual = 0.0;
        for (std::size_t s = 0; s < states.size(); ++s) {
            residual = std::max(residual, std::abs(fresh[s] - pi[s]));
        }
        pi.swap(fresh);
        if (residual < 1e-10) {
            std::map<std::vector<std::uint32_t>, double> result;
            for (std::size_t s = 0; s < states.size(); ++s) result[states[s]] = pi[s];
            return result;
        }
    }
    throw std::runtime_error("lru_stationary_oracle: power iteration did not converge");
}

double simulate_irm_hit_ratio(const Popularity& q, std::uint32_t c, IrmPolicy policy,
                              std::uint64_t requests, std::uint64_t seed) {
    if (c == 0 || requests == 0) return 0.0;
    if (c > q.size()) throw std::invalid_argument("simulate_irm_hit_ratio: c > n");

    Rng rng(derive_seed(seed, 0x171717));
    const DiscreteSampler sampler(q.probs());

    if (policy == IrmPolicy::Lru) {
        ReplacementCache cache(ReplacementPolicy::Lru, c);
        std::uint64_t hits = 0;
        for (std::uint64_t r = 0; r < requests; ++r) {
            const PacketId p{sampler.sample(rng), 1};
            if (cache.lookup(p)) {
                ++hits;
            } else {
                cache.insert(p);
            }
        }
        return static_cast<double>(hits) / static_cast<double>(requests);
    }

    // Selection policy, driven by request count: one request per time unit.
    // Every frozen interval is one independent draw from the frozen-state
    // distribution, so the estimator error shrinks with the number of
    // cycles; keep the frozen period short to fit many cycles in.
    const double frozen_period = std::max(50.0, 4.0 * static_cast<double>(c));
    SelectionCache cache(c, frozen_period);
    std::uint64_t frozen_requests = 0, frozen_hits = 0;
    for (std::uint64_t r = 0; r < requests; ++r) {
        const double now = static_cast<double>(r);
        cache.on_timer(now);
        const PacketId p{sampler.sample(rng), 1};
        const bool frozen = cache.phase() == CachePhase::Frozen;
        const auto outcome = cache.on_request(p, now);
        if (frozen) {
            ++frozen_requests;
            if (outcome == SelectionCache::Outcome::Hit) ++frozen_hits;
        }
        if (outcome == SelectionCache::Outcome::MissAndFetch) {
            cache.on_data(p, now); // fetch completes immediately
        }
    }
    if (frozen_requests == 0) return 0.0;
    return static_cast<double>(frozen_hits) / static_cast<double>(frozen_requests);
}

} // namespace netcache
