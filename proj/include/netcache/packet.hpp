#ifndef NETCACHE_PACKET_HPP
#define NETCACHE_PACKET_HPP

#include <compare>
#include <cstdint>
#include <functional>

namespace netcache {

// Content catalog indices are 1-based; 0 is reserved as "invalid".
using ContentId = std::uint32_t;

// Sentinel for the nomination field of requests and data packets.
inline constexpr int kNotNominated = -1;

// A cacheable data unit: packet `index` (1-based) of content `content`.
// Ordering is content-major, index-minor, which gives deterministic
// tie-breaking wherever packets get sorted.
struct PacketId {
    ContentId content = 0;
    std::uint32_t index = 1;

    auto operator<=>(const PacketId&) const = default;

    // Packed form used as a hash key and for compact trace output.
    std::uint64_t key() const {
        return (static_cast<std::uint64_t>(content) << 32) | index;
    }
};

struct RequestPacket {
    PacketId packet;
    int nf = kNotNominated;   // -1 = not nominated, >=0 = hops since nominator
    std::uint32_t origin = 0; // consumer group id
    double issue_time = 0.0;
};

struct DataPacket {
    PacketId packet;
    int nf = kNotNominated;
    std::uint32_t size_units = 1;
};

enum class CacheEventKind : std::uint8_t { Hit, Miss, Write, Eviction };

struct CacheEvent {
    CacheEventKind kind;
    PacketId packet;
    std::uint32_t cache = 0; // router id
    double time = 0.0;
};

} // namespace netcache

template <> struct std::hash<netcache::PacketId> {
    std::size_t operator()(const netcache::PacketId& p) const noexcept {
        // splitmix64 finalizer over the packed key
        std::uint64_t x = p.key() + 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

#endif
