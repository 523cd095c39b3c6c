#include "netcache/tandem.hpp"

#include <stdexcept>
#include <string>

#include "netcache/irm.hpp"
#include "netcache/replacement.hpp"
#include "netcache/rng.hpp"
#include "netcache/selection.hpp"

namespace netcache {

TandemResult tandem_run(TandemPolicy first, const TandemOptions& options) {
    const Popularity popularity = Popularity::zipf(options.alpha, options.contents);
    const DiscreteSampler sampler(popularity.probs());
    Rng rng(derive_seed(options.seed, 0xf117e5));

    std::optional<ReplacementCache> first_repl;
    std::optional<SelectionCache> first_sel;
    switch (first) {
        case TandemPolicy::Lru:
            first_repl.emplace(ReplacementPolicy::Lru, options.capacity);
            break;
        case TandemPolicy::Fifo:
            first_repl.emplace(ReplacementPolicy::Fifo, options.capacity);
            break;
        case TandemPolicy::Rnd:
            first_repl.emplace(ReplacementPolicy::Random, options.capacity,
                               derive_seed(options.seed, 1));
            break;
        case TandemPolicy::Sel:
            first_sel.emplace(options.capacity, SelectionCache::kNever);
            break;
    }
    ReplacementCache second_lru(ReplacementPolicy::Lru, options.capacity);
    ReplacementCache second_fifo(ReplacementPolicy::Fifo, options.capacity);
    ReplacementCache second_rnd(ReplacementPolicy::Random, options.capacity,
                                derive_seed(options.seed, 2));

    StackDistanceAnalyzer input_sd, miss_sd;
    std::vector<std::optional<std::uint64_t>> input_sds, miss_sds;

    TandemResult result;
    std::uint64_t first_hits = 0, hits_lru = 0, hits_fifo = 0, hits_rnd = 0;

    for (std::uint64_t r = 0; r < options.requests; ++r) {
        const PacketId p{sampler.sample(rng), 1};
        if (options.collect_sd) input_sds.push_back(input_sd.observe(p.content));

        bool forwarded;
        if (first_repl) {
            if (first_repl->lookup(p)) {
                ++first_hits;
                forwarded = false;
            } else {
                first_repl->insert(p);
                forwarded = true;
            }
        } else {
            const double now = static_cast<double>(r);
            const auto outcome = first_sel->on_request(p, now);
            if (outcome == SelectionCache::Outcome::Hit) {
                ++first_hits;
                forwarded = false;
            } else {
                // Both miss kinds travel upstream; a fetch fills on return.
                if (outcome == SelectionCache::Outcome::MissAndFetch) {
                    first_sel->on_data(p, now);
                }
                forwarded = true;
            }
        }
        if (!forwarded) continue;

        ++result.forwarded;
        if (options.collect_sd) miss_sds.push_back(miss_sd.observe(p.content));
        if (second_lru.lookup(p)) ++hits_lru; else second_lru.insert(p);
        if (second_fifo.lookup(p)) ++hits_fifo; else second_fifo.insert(p);
        if (second_rnd.lookup(p)) ++hits_rnd; else second_rnd.insert(p);
    }

    const auto ratio = [](std::uint64_t hits, std::uint64_t total) {
        return total > 0 ? static_cast<double>(hits) / static_cast<double>(total) : 0.0;
    };
    result.first_hit_ratio = ratio(first_hits, options.requests);
    result.second_hit_ratio_lru = ratio(hits_lru, result.forwarded);
    result.second_hit_ratio_fifo = ratio(hits_fifo, result.forwarded);
    result.second_hit_ratio_rnd = ratio(hits_rnd, result.forwarded);
    if (options.collect_sd) {
        result.input_sd = sd_stats_of(input_sds);
        result.miss_sd = sd_stats_of(miss_sds);
    }
    return result;
}

const char* to_string(TandemPolicy policy) {
    switch (policy) {
        case TandemPolicy::Lru: return "LRU";
        case TandemPolicy::Fifo: return "FIFO";
        case TandemPolicy::Rnd: return "RND";
        case TandemPolicy::Sel: return "SEL";
    }
    return "?";
}

TandemPolicy tandem_policy_from(const std::string& name) {
    if (name == "LRU") return TandemPolicy::Lru;
    if (name == "FIFO") return TandemPolicy::Fifo;
    if (name == "RND") return TandemPolicy::Rnd;
    if (name == "SEL") return TandemPolicy::Sel;
    throw std::invalid_argument("unknown tandem policy: " + name);
}

} // namespace netcache
