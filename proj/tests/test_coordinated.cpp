#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "netcache/coordinated.hpp"

using namespace netcache;
using Action = CoordinatedCache::RequestAction;

namespace {

PacketId pkt(std::uint32_t content) { return PacketId{content, 1}; }

RequestPacket req(std::uint32_t content, int nf) { return {pkt(content), nf, 0, 0.0}; }

CoordinatedCache::Config config(std::uint32_t capacity, std::uint32_t window = 1,
                                double frozen = 60.0, double timeout = 0.1) {
    CoordinatedCache::Config cfg;
    cfg.capacity = capacity;
    cfg.nomination_window = window;
    cfg.frozen_period = frozen;
    cfg.nomination_timeout = timeout;
    return cfg;
}

// Nominate-and-write one packet, as if this cache sat alone on the route.
void select_one(CoordinatedCache& cache, std::uint32_t content, double now) {
    const auto fwd = cache.on_request(req(content, kNotNominated), now);
    REQUIRE(fwd.action == Action::Forward);
    REQUIRE(fwd.nominated);
    REQUIRE(fwd.nf == 0);
    const auto data = cache.on_data({pkt(content), 0, 1}, now);
    REQUIRE(data.wrote);
    REQUIRE_FALSE(data.violation.has_value());
    REQUIRE_FALSE(cache.check_invariants().has_value());
}

// Full cycle, timer expiry, then three fresh writes and one re-selection:
// protected slots {1,2,3,6}, pointer at 4, eight slots total.
CoordinatedCache staged_cache() {
    CoordinatedCache cache(config(8));
    double now = 0.0;
    for (std::uint32_t c = 1; c <= 8; ++c) select_one(cache, c, now += 1.0);
    REQUIRE(cache.phase() == CachePhase::Frozen);
    cache.on_frozen_timer(now + 60.0);
    now += 61.0;
    for (std::uint32_t c = 101; c <= 103; ++c) select_one(cache, c, now += 1.0);
    // Stale packet in slot 6 gets a plain hit: re-selected.
    const auto hit = cache.on_request(req(6, kNotNominated), now += 1.0);
    REQUIRE(hit.action == Action::Serve);
    REQUIRE(hit.nf == kNotNominated);
    REQUIRE(cache.write_pointer() == 4);
    REQUIRE(cache.unprotected_count() == 4);
    REQUIRE(cache.slot_protected(6));
    return cache;
}

} // namespace

TEST_CASE("first nomination sets nf to zero and opens the window") {
    CoordinatedCache cache(config(4));
    const auto out = cache.on_request(req(9, kNotNominated), 0.0);
    CHECK(out.action == Action::Forward);
    CHECK(out.nominated);
    CHECK(out.nf == 0);
    CHECK(cache.outstanding_nominations() == 1);

    // Window threshold 1: no second concurrent nomination.
    const auto second = cache.on_request(req(10, kNotNominated), 0.1);
    CHECK(second.action == Action::Forward);
    CHECK_FALSE(second.nominated);
    CHECK(second.nf == kNotNominated);
}

TEST_CASE("nominated requests are hop-counted on forward") {
    CoordinatedCache cache(config(4));
    for (int nf : {0, 1, 5}) {
        const auto out = cache.on_request(req(20 + nf, nf), 0.0);
        CHECK(out.action == Action::Forward);
        CHECK_FALSE(out.nominated);
        CHECK(out.nf == nf + 1);
    }
}

TEST_CASE("data with positive nf is decremented and not written") {
    CoordinatedCache cache(config(4));
    const auto out = cache.on_data({pkt(1), 2, 1}, 0.0);
    CHECK(out.nf == 1);
    CHECK_FALSE(out.wrote);
    const auto pass = cache.on_data({pkt(1), kNotNominated, 1}, 0.0);
    CHECK(pass.nf == kNotNominated);
    CHECK_FALSE(pass.wrote);
}

TEST_CASE("selected data is written at the pointer and forwarded unnominated") {
    CoordinatedCache cache(config(3));
    CHECK(cache.write_pointer() == 1);
    select_one(cache, 1, 0.0);
    CHECK(cache.slot_protected(1));
    CHECK(cache.write_pointer() == 2);
    CHECK(cache.unprotected_count() == 2);
    CHECK(cache.remaining_selections() == 2);
    CHECK(cache.outstanding_nominations() == 0);
    CHECK(cache.resident(pkt(1)));
}

TEST_CASE("cache freezes when the remaining selections reach zero") {
    CoordinatedCache cache(config(2, 1, 60.0));
    select_one(cache, 1, 0.0);
    CHECK(cache.phase() == CachePhase::Selecting);
    select_one(cache, 2, 1.0);
    CHECK(cache.phase() == CachePhase::Frozen);
    CHECK(cache.write_pointer() == 3); // parked
    REQUIRE(cache.frozen_deadline().has_value());
    CHECK(*cache.frozen_deadline() == doctest::Approx(61.0));
}

TEST_CASE("frozen timer clears protection but keeps packets resident") {
    CoordinatedCache cache(config(2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    cache.on_frozen_timer(60.5);
    CHECK(cache.phase() == CachePhase::Selecting);
    CHECK(cache.unprotected_count() == 2);
    CHECK(cache.remaining_selections() == 2);
    CHECK(cache.write_pointer() == 1);
    CHECK(cache.resident(pkt(1)));
    CHECK(cache.resident(pkt(2)));
    CHECK_FALSE(cache.check_invariants().has_value());
}

TEST_CASE("stale frozen timer is ignored") {
    CoordinatedCache cache(config(1));
    select_one(cache, 1, 0.0);
    cache.on_frozen_timer(30.0); // too early
    CHECK(cache.phase() == CachePhase::Frozen);
    cache.on_frozen_timer(60.0);
    CHECK(cache.phase() == CachePhase::Selecting);
}

TEST_CASE("collision before the pointer raises US and defers the selection") {
    CoordinatedCache cache = staged_cache();
    const std::uint32_t us = cache.unprotected_count();
    const std::uint32_t rs = cache.remaining_selections();
    // Nominated request hits protected slot 2 (before pointer 4).
    const auto out = cache.on_request(req(102, 0), 100.0);
    CHECK(out.action == Action::Serve);
    CHECK(out.nf == 0); // request nf copied to the data packet
    CHECK(cache.unprotected_count() == us + 1);
    CHECK(cache.remaining_selections() == rs);
    CHECK_FALSE(cache.slot_protected(2));
    CHECK_FALSE(cache.check_invariants().has_value());
}

TEST_CASE("collision after the pointer raises both US and RS") {
    CoordinatedCache cache = staged_cache();
    const std::uint32_t us = cache.unprotected_count();
    const std::uint32_t rs = cache.remaining_selections();
    // Nominated request hits protected slot 6 (after pointer 4).
    const auto out = cache.on_request(req(6, 1), 100.0);
    CHECK(out.action == Action::Serve);
    CHECK(out.nf == 1);
    CHECK(cache.unprotected_count() == us + 1);
    CHECK(cache.remaining_selections() == rs + 1);
    CHECK_FALSE(cache.slot_protected(6));
    CHECK_FALSE(cache.check_invariants().has_value());
}

TEST_CASE("re-selection at the pointer moves it past the slot before the next write") {
    CoordinatedCache cache(config(2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    cache.on_frozen_timer(60.5);
    REQUIRE(cache.write_pointer() == 1);
    // Stale packet in slot 1 proves itself; pointer must skip the slot.
    const auto hit = cache.on_request(req(1, kNotNominated), 61.0);
    CHECK(hit.action == Action::Serve);
    CHECK(cache.slot_protected(1));
    CHECK(cache.write_pointer() == 2);
    CHECK(cache.remaining_selections() == 1);
    // The next write lands in slot 2.
    select_one(cache, 3, 62.0);
    REQUIRE(cache.slot_packet(2).has_value());
    CHECK(cache.slot_packet(2)->content == 3);
    CHECK(cache.phase() == CachePhase::Frozen);
}

TEST_CASE("nominated hit on an unprotected slot serves without re-protecting") {
    CoordinatedCache cache(config(2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    cache.on_frozen_timer(60.5);
    const auto out = cache.on_request(req(1, 0), 61.0);
    CHECK(out.action == Action::Serve);
    CHECK(out.nf == 0);
    CHECK_FALSE(cache.slot_protected(1));
    CHECK(cache.unprotected_count() == 2);
}

TEST_CASE("frozen-phase collision triggers a replacement selection") {
    CoordinatedCache cache(config(2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    REQUIRE(cache.phase() == CachePhase::Frozen);

    // Farther-cache collision while frozen: slot becomes replaceable.
    const auto coll = cache.on_request(req(1, 0), 1.0);
    CHECK(coll.action == Action::Serve);
    CHECK(cache.unprotected_count() == 1);

    // The cache keeps selecting until US reaches zero.
    const auto nom = cache.on_request(req(33, kNotNominated), 1.1);
    CHECK(nom.nominated);
    const auto data = cache.on_data({pkt(33), 0, 1}, 1.2);
    CHECK(data.wrote);
    REQUIRE(data.evicted.has_value());
    CHECK(data.evicted->content == 1);
    CHECK(cache.unprotected_count() == 0);
    CHECK(cache.phase() == CachePhase::Frozen);
    CHECK_FALSE(cache.check_invariants().has_value());
}

TEST_CASE("frozen cache without replaceable slots does not nominate") {
    CoordinatedCache cache(config(2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    const auto out = cache.on_request(req(50, kNotNominated), 1.0);
    CHECK(out.action == Action::Forward);
    CHECK_FALSE(out.nominated);
    CHECK(out.nf == kNotNominated);
}

TEST_CASE("re-selection is skipped when it would starve an in-flight write") {
    CoordinatedCache cache(config(2, 2));
    select_one(cache, 1, 0.0);
    select_one(cache, 2, 0.5);
    cache.on_frozen_timer(60.5);
    // One nomination in flight, two stale slots.
    const auto nom = cache.on_request(req(40, kNotNominated), 61.0);
    REQUIRE(nom.nominated);
    // First stale hit re-protects (RS 2 > NW 1)...
    cache.on_request(req(1, kNotNominated), 61.1);
    CHECK(cache.slot_protected(1));
    CHECK(cache.remaining_selections() == 1);
    // ...the second would leave the in-flight write without a target.
    const auto served = cache.on_request(req(2, kNotNominated), 61.2);
    CHECK(served.action == Action::Serve);
    CHECK_FALSE(cache.slot_protected(2));
    CHECK(cache.remaining_selections() == 1);
    // The write lands in the slot the gate preserved.
    const auto data = cache.on_data({pkt(40), 0, 1}, 61.3);
    CHECK(data.wrote);
    REQUIRE(data.evicted.has_value());
    CHECK(data.evicted->content == 2);
    CHECK(cache.phase() == CachePhase::Frozen);
    CHECK_FALSE(cache.check_invariants().has_value());
}

TEST_CASE("write into an occupied unprotected slot emits exactly one eviction") {
    CoordinatedCache cache(config(1));
    select_one(cache, 1, 0.0);
    cache.on_frozen_timer(60.0);
    const auto nom = cache.on_request(req(2, kNotNominated), 61.0);
    REQUIRE(nom.nominated);
    const auto data = cache.on_data({pkt(2), 0, 1}, 61.1);
    CHECK(data.wrote);
    REQUIRE(data.evicted.has_value());
    CHECK(data.evicted->content == 1);
}

TEST_CASE("selected data with every slot protected is a protocol violation") {
    CoordinatedCache cache(config(1));
    select_one(cache, 1, 0.0);
    const auto out = cache.on_data({pkt(9), 0, 1}, 1.0);
    CHECK(out.violation.has_value());
    CHECK_FALSE(out.wrote);
}

TEST_CASE("nomination timer halves the window when no data arrives") {
    CoordinatedCache cache(config(4, 4, 60.0, 0.5));
    cache.on_request(req(1, kNotNominated), 0.0);
    REQUIRE(cache.nomination_deadline().has_value());
    CHECK(*cache.nomination_deadline() == doctest::Approx(0.5));
    cache.on_nomination_timer(0.5);
    CHECK(cache.outstanding_nominations() == 0); // floor(1/2)
    CHECK_FALSE(cache.nomination_deadline().has_value());

    // Nomination unblocked again.
    const auto out = cache.on_request(req(2, kNotNominated), 0.6);
    CHECK(out.nominated);
}

TEST_CASE("a write restarts the nomination timer") {
    CoordinatedCache cache(config(4, 2, 60.0, 0.5));
    cache.on_request(req(1, kNotNominated), 0.0);
    cache.on_request(req(2, kNotNominated), 0.1);
    CHECK(cache.outstanding_nominations() == 2);
    CHECK(*cache.nomination_deadline() == doctest::Approx(0.5));
    cache.on_data({pkt(1), 0, 1}, 0.2);
    CHECK(cache.outstanding_nominations() == 1);
    CHECK(*cache.nomination_deadline() == doctest::Approx(0.7));
    // NW already 0 at timeout stays 0.
    cache.on_data({pkt(2), 0, 1}, 0.3);
    CHECK_FALSE(cache.nomination_deadline().has_value());
    cache.on_nomination_timer(1.0);
    CHECK(cache.outstanding_nominations() == 0);
}

TEST_CASE("the same packet is not nominated twice concurrently") {
    CoordinatedCache cache(config(4, 4));
    const auto first = cache.on_request(req(1, kNotNominated), 0.0);
    CHECK(first.nominated);
    const auto repeat = cache.on_request(req(1, kNotNominated), 0.1);
    CHECK_FALSE(repeat.nominated);
    CHECK(repeat.nf == kNotNominated);
    CHECK(cache.outstanding_nominations() == 1);
}

TEST_CASE("zero-capacity coordinated cache forwards everything unchanged") {
    CoordinatedCache cache(config(0));
    const auto out = cache.on_request(req(1, kNotNominated), 0.0);
    CHECK(out.action == Action::Forward);
    CHECK_FALSE(out.nominated);
    CHECK(out.nf == kNotNominated);
    const auto counted = cache.on_request(req(2, 3), 0.0);
    CHECK(counted.nf == 4);
}

TEST_CASE("a selecting pass completes after at most c writes") {
    // Guided drive with collisions sprinkled in: the pass must close with at
    // most capacity nominate-write completions.
    CoordinatedCache cache(config(4, 1));
    double now = 0.0;
    int writes = 0;
    std::uint32_t next_content = 1;
    while (cache.phase() == CachePhase::Selecting) {
        const auto nom = cache.on_request(req(next_content, kNotNominated), now += 0.01);
        if (nom.nominated) {
            const auto data = cache.on_data({pkt(next_content), 0, 1}, now += 0.01);
            REQUIRE(data.wrote);
            ++writes;
            // Collide on the packet just written (before the pointer).
            cache.on_request(req(next_content, 2), now += 0.01);
        }
        ++next_content;
        REQUIRE(writes <= 8);
    }
    CHECK(writes <= 4);
    CHECK_FALSE(cache.check_invariants().has_value());
}
