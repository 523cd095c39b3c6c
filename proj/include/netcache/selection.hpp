#ifndef NETCACHE_SELECTION_HPP
#define NETCACHE_SELECTION_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "netcache/packet.hpp"

namespace netcache {

enum class CachePhase : std::uint8_t { Selecting, Frozen };

// Standalone selection-policy cache: while selecting, it reserves a slot for
// each of the first `capacity` distinct packets requested and fetches them;
// once the last reserved slot is filled the contents freeze for
// `frozen_period` seconds, after which a fresh selection cycle begins.
//
// A slot is reserved at request time (so one packet is never fetched twice)
// and becomes resident when the data packet arrives via on_data(). Reserved
// but unfilled slots still miss.
class SelectionCache {
public:
    enum class Outcome : std::uint8_t { Hit, MissAndFetch, MissForward };

    struct FillResult {
        bool stored = false;
        std::optional<PacketId> evicted;
    };

    static constexpr double kNever = std::numeric_limits<double>::infinity();

    SelectionCache(std::uint32_t capacity, double frozen_period = 60.0);

    Outcome on_request(PacketId p, double now);
    FillResult on_data(PacketId p, double now);
    void on_timer(double now); // ignored unless frozen and due

    CachePhase phase() const { return phase_; }
    double frozen_until() const { return frozen_until_; }
    double frozen_period() const { return frozen_period_; }
    std::size_t reserved() const { return slots_.size(); }
    std::size_t resident_count() const { return resident_; }
    bool resident(PacketId p) const;

    // Reservation order of the current cycle, for tests and introspection.
    std::vector<PacketId> contents() const { return order_; }

private:
    std::uint32_t capacity_;
    double frozen_period_;
    CachePhase phase_ = CachePhase::Selecting;
    double frozen_until_ = kNever;

    std::unordered_map<std::uint64_t, bool> slots_; // key -> resident flag
    std::vector<PacketId> order_;
    std::size_t resident_ = 0;
    std::uint32_t fills_ = 0;

    // Occupants of the previous cycle not yet overwritten; popping one per
    // new fill keeps eviction counts at "writes into occupied slots".
    std::vector<PacketId> stale_;
};

} // namespace netcache

#endif
