#ifndef NETCACHE_COORDINATED_HPP
#define NETCACHE_COORDINATED_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "netcache/packet.hpp"
#include "netcache/selection.hpp"

namespace netcache {

// Coordinated selection cache.
//
// Coordination happens entirely through the nomination field (nf) carried by
// requests and data packets: a cache that wants a packet nominates a passing
// request (nf -1 -> 0), downstream routers count hops by incrementing nf on
// forward, and on the reverse path each router decrements nf until the
// nominating cache receives the data with nf == 0 and writes it.
//
// Per-slot protection bits mark packets selected in the current cycle.
// A hit by a nominated request on a protected slot is a selection collision:
// a cache closer to the consumers owns the packet now, so the slot is
// unprotected and becomes replaceable. Writes go to the unprotected slot at
// the write pointer, which sweeps the slots once per selecting pass.
//
// Counter conventions:
//   unprotected  (US) == number of slots with the protection bit clear
//   remaining    (RS) == unprotected slots at or after the pointer; the cache
//                        freezes when it reaches zero
//   outstanding  (NW) == nominations whose data has not arrived yet, capped
//                        by min(RS, window threshold) while selecting
class CoordinatedCache {
public:
    struct Config {
        std::uint32_t capacity = 0;
        std::uint32_t nomination_window = 1; // max concurrent nominations
        double frozen_period = 60.0;
        double nomination_timeout = 0.1;     // idle period before NW halves
    };

    enum class RequestAction : std::uint8_t { Serve, Forward };

    struct RequestOutcome {
        RequestAction action;
        int nf;              // data nf when serving, request nf when forwarding
        bool nominated = false;
    };

    struct DataOutcome {
        int nf;
        bool wrote = false;
        std::optional<PacketId> evicted;
        std::optional<std::string> violation; // protocol invariant breach
    };

    static constexpr double kNever = std::numeric_limits<double>::infinity();

    explicit CoordinatedCache(const Config& config);

    RequestOutcome on_request(const RequestPacket& req, double now);
    DataOutcome on_data(const DataPacket& data, double now);
    void on_frozen_timer(double now);
    void on_nomination_timer(double now);

    std::optional<double> frozen_deadline() const;
    std::optional<double> nomination_deadline() const;

    CachePhase phase() const { return phase_; }
    std::uint32_t capacity() const { return config_.capacity; }
    std::uint32_t unprotected_count() const { return unprotected_; }
    std::uint32_t remaining_selections() const { return remaining_; }
    std::uint32_t outstanding_nominations() const { return outstanding_; }
    // 1-based; capacity()+1 means parked past the last slot.
    std::uint32_t write_pointer() const { return pointer_ + 1; }

    bool resident(PacketId p) const { return index_.count(p.key()) != 0; }
    bool slot_protected(std::uint32_t slot1) const { return slots_[slot1 - 1].pb; }
    std::optional<PacketId> slot_packet(std::uint32_t slot1) const {
        return slots_[slot1 - 1].packet;
    }

    // Full recount of every counter against the slot array; returns a
    // description of the first mismatch, if any.
    std::optional<std::string> check_invariants() const;

private:
    struct Slot {
        std::optional<PacketId> packet;
        bool pb = false;
    };

    void protect(std::uint32_t idx);
    void unprotect(std::uint32_t idx);
    void advance_pointer();
    void freeze(double now);
    std::optional<std::uint32_t> write_target() const;

    Config config_;
    std::vector<Slot> slots_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_; // packet key -> slot idx
    std::unordered_set<std::uint64_t> pending_;              // nominated, data in flight

    CachePhase phase_ = CachePhase::Selecting;
    std::uint32_t unprotected_ = 0;
    std::uint32_t remaining_ = 0;
    std::uint32_t outstanding_ = 0;
    std::uint32_t pointer_ = 0; // 0-based; == capacity means parked
    double frozen_until_ = kNever;
    double nomination_deadline_ = kNever;
};

} // namespace netcache

#endif
