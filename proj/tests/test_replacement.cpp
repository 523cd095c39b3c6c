#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "netcache/metrics.hpp"
#include "netcache/replacement.hpp"
#include "netcache/rng.hpp"

using namespace netcache;

namespace {
PacketId pkt(std::uint32_t content) { return PacketId{content, 1}; }
} // namespace

TEST_CASE("LRU refreshes recency on hit") {
    ReplacementCache cache(ReplacementPolicy::Lru, 2);
    cache.insert(pkt(1));
    cache.insert(pkt(2));
    CHECK(cache.lookup(pkt(1)));
    const auto victim = cache.insert(pkt(3));
    REQUIRE(victim.has_value());
    CHECK(*victim == pkt(2));
    CHECK(cache.contains(pkt(1)));
}

TEST_CASE("FIFO ignores hit recency") {
    ReplacementCache cache(ReplacementPolicy::Fifo, 2);
    cache.insert(pkt(1));
    cache.insert(pkt(2));
    CHECK(cache.lookup(pkt(1)));
    const auto victim = cache.insert(pkt(3));
    REQUIRE(victim.has_value());
    CHECK(*victim == pkt(1));
}

TEST_CASE("FIFO evicts in insertion order") {
    ReplacementCache cache(ReplacementPolicy::Fifo, 3);
    cache.insert(pkt(1));
    cache.insert(pkt(2));
    cache.insert(pkt(3));
    const auto victim = cache.insert(pkt(4));
    REQUIRE(victim.has_value());
    CHECK(*victim == pkt(1));
}

TEST_CASE("single slot LRU evicts the resident") {
    ReplacementCache cache(ReplacementPolicy::Lru, 1);
    cache.insert(pkt(7));
    const auto victim = cache.insert(pkt(9));
    REQUIRE(victim.has_value());
    CHECK(*victim == pkt(7));
}

TEST_CASE("zero capacity always misses and never stores") {
    for (auto policy : {ReplacementPolicy::Lru, ReplacementPolicy::Fifo, ReplacementPolicy::Random}) {
        ReplacementCache cache(policy, 0);
        CHECK_FALSE(cache.lookup(pkt(1)));
        CHECK_FALSE(cache.insert(pkt(1)).has_value());
        CHECK_FALSE(cache.lookup(pkt(1)));
        CHECK(cache.size() == 0);
    }
}

TEST_CASE("inserting a resident packet is a contract violation") {
    ReplacementCache cache(ReplacementPolicy::Lru, 2);
    cache.insert(pkt(1));
    CHECK_THROWS_AS(cache.insert(pkt(1)), std::logic_error);
    ReplacementCache rnd(ReplacementPolicy::Random, 2, 42);
    rnd.insert(pkt(1));
    CHECK_THROWS_AS(rnd.insert(pkt(1)), std::logic_error);
}

TEST_CASE("random eviction picks victims uniformly") {
    std::map<std::uint32_t, int> victims;
    for (int trial = 0; trial < 10000; ++trial) {
        ReplacementCache cache(ReplacementPolicy::Random, 2, static_cast<std::uint64_t>(trial));
        cache.insert(pkt(1));
        cache.insert(pkt(2));
        const auto victim = cache.insert(pkt(3));
        REQUIRE(victim.has_value());
        ++victims[victim->content];
    }
    CHECK(victims[1] + victims[2] == 10000);
    CHECK(victims[1] / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
    CHECK(victims[2] / 10000.0 == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("random cache stays bounded and evicted packets really leave") {
    ReplacementCache cache(ReplacementPolicy::Random, 8, 77);
    std::set<std::uint32_t> resident;
    for (std::uint32_t c = 1; c <= 500; ++c) {
        REQUIRE_FALSE(cache.lookup(pkt(c)));
        const auto victim = cache.insert(pkt(c));
        resident.insert(c);
        if (victim) {
            CHECK(resident.erase(victim->content) == 1);
            CHECK_FALSE(cache.lookup(*victim));
            CHECK_FALSE(cache.contains(*victim));
        }
        CHECK(cache.size() <= 8);
    }
    CHECK(resident.size() == 8);
    for (std::uint32_t c : resident) CHECK(cache.contains(pkt(c)));
}

TEST_CASE("random cache is reproducible for a fixed seed") {
    for (int round = 0; round < 2; ++round) {
        static std::vector<std::uint32_t> first_run;
        ReplacementCache cache(ReplacementPolicy::Random, 4, 1234);
        Rng rng(99);
        std::vector<std::uint32_t> evictions;
        for (int i = 0; i < 2000; ++i) {
            const PacketId p = pkt(static_cast<std::uint32_t>(uniform_index(rng, 50)) + 1);
            if (!cache.lookup(p)) {
                if (auto victim = cache.insert(p)) evictions.push_back(victim->content);
            }
        }
        if (round == 0) first_run = evictions;
        else CHECK(first_run == evictions);
    }
}

TEST_CASE("FIFO residency does not depend on hits between insert and evict") {
    // Same inserts, different hit patterns: eviction order must match.
    std::vector<std::uint32_t> order_quiet, order_hit;
    for (int mode = 0; mode < 2; ++mode) {
        ReplacementCache cache(ReplacementPolicy::Fifo, 3);
        std::vector<std::uint32_t>& order = mode == 0 ? order_quiet : order_hit;
        for (std::uint32_t c = 1; c <= 10; ++c) {
            if (mode == 1) {
                cache.lookup(pkt(1));
                cache.lookup(pkt(c > 1 ? c - 1 : 1));
            }
            if (!cache.lookup(pkt(c))) {
                if (auto victim = cache.insert(pkt(c))) order.push_back(victim->content);
            }
        }
    }
    CHECK(order_quiet == order_hit);
}

TEST_CASE("LRU hits exactly when the stack distance is below capacity") {
    // Cross-check against the stack-distance analyzer on a random stream.
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Rng rng(seed);
        const std::uint32_t c = 8;
        ReplacementCache cache(ReplacementPolicy::Lru, c);
        StackDistanceAnalyzer analyzer;
        for (int i = 0; i < 20000; ++i) {
            const std::uint32_t content = static_cast<std::uint32_t>(uniform_index(rng, 40)) + 1;
            const auto sd = analyzer.observe(content);
            const bool hit = cache.lookup(pkt(content));
            if (!hit) cache.insert(pkt(content));
            const bool expected = sd.has_value() && *sd < c;
            CHECK(hit == expected);
        }
    }
}
