#ifndef NETCACHE_REPLACEMENT_HPP
#define NETCACHE_REPLACEMENT_HPP

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "netcache/packet.hpp"
#include "netcache/rng.hpp"

namespace netcache {

enum class ReplacementPolicy : std::uint8_t { Lru, Fifo, Random };

// Classical replacement cache with a uniform lookup/insert interface.
//
// lookup() answers residency and, for LRU only, refreshes recency.
// insert() stores a non-resident packet and returns the victim when the
// cache was full. The caller is expected to insert only after a miss;
// inserting a resident packet is a simulator bug and throws.
class ReplacementCache {
public:
    ReplacementCache(ReplacementPolicy policy, std::uint32_t capacity, std::uint64_t seed = 0);

    bool lookup(PacketId p);
    std::optional<PacketId> insert(PacketId p);

    bool contains(PacketId p) const {
        return policy_ == ReplacementPolicy::Random ? pool_index_.count(p.key()) != 0
                                                    : index_.count(p.key()) != 0;
    }
    std::size_t size() const {
        return policy_ == ReplacementPolicy::Random ? pool_.size() : index_.size();
    }
    std::uint32_t capacity() const { return capacity_; }
    ReplacementPolicy policy() const { return policy_; }

private:
    ReplacementPolicy policy_;
    std::uint32_t capacity_;

    // LRU and FIFO keep packets on a list (front = most recent / newest);
    // Random keeps a flat vector with swap-removal.
    std::list<PacketId> order_;
    std::vector<PacketId> pool_;
    std::unordered_map<std::uint64_t, std::list<PacketId>::iterator> index_;
    std::unordered_map<std::uint64_t, std::size_t> pool_index_;
    Rng rng_;
};

const char* to_string(ReplacementPolicy policy);

} // namespace netcache

#endif
