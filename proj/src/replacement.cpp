#include "netcache/replacement.hpp"

#include <stdexcept>

namespace netcache {

ReplacementCache::ReplacementCache(ReplacementPolicy policy, std::uint32_t capacity,
                                   std::uint64_t seed)
    : policy_(policy), capacity_(capacity), rng_(seed) {
    if (policy_ == ReplacementPolicy::Random) pool_.reserve(capacity_);
}

bool ReplacementCache::lookup(PacketId p) {
    if (policy_ == ReplacementPolicy::Random) {
        return pool_index_.count(p.key()) != 0;
    }
    auto it = index_.find(p.key());
    if (it == index_.end()) return false;
    if (policy_ == ReplacementPolicy::Lru) {
        order_.splice(order_.begin(), order_, it->second);
    }
    // FIFO keeps insertion order regardless of hits.
    return true;
}

std::optional<PacketId> ReplacementCache::insert(PacketId p) {
    if (capacity_ == 0) return std::nullopt; // zero-capacity caches never store

    std::optional<PacketId> victim;
    if (policy_ == ReplacementPolicy::Random) {
        if (pool_index_.count(p.key()) != 0) {
            throw std::logic_error("ReplacementCache::insert: packet already resident");
        }
        if (pool_.size() == capacity_) {
            const std::size_t v = static_cast<std::size_t>(uniform_index(rng_, pool_.size()));
            victim = pool_[v];
            pool_index_.erase(victim->key());
            if (v + 1 != pool_.size()) {
                pool_[v] = pool_.back();
                pool_index_[pool_[v].key()] = v;
            }
            pool_.pop_back();
        }
        pool_index_[p.key()] = pool_.size();
        pool_.push_back(p);
        return victim;
    }

    if (index_.count(p.key()) != 0) {
        throw std::logic_error("ReplacementCache::insert: packet already resident");
    }
    if (index_.size() == capacity_) {
        victim = order_.back();
        index_.erase(order_.back().key());
        order_.pop_back();
    }
    order_.push_front(p);
    index_[p.key()] = order_.begin();
    return victim;
}

const char* to_string(ReplacementPolicy policy) {
    switch (policy) {
        case ReplacementPolicy::Lru: return "LRU";
        case ReplacementPolicy::Fifo: return "FIFO";
        case ReplacementPolicy::Random: return "RND";
    }
    return "?";
}

} // namespace netcache
