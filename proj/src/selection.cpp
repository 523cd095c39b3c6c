#include "netcache/selection.hpp"

namespace netcache {

SelectionCache::SelectionCache(std::uint32_t capacity, double frozen_period)
    : capacity_(capacity), frozen_period_(frozen_period) {
    slots_.reserve(capacity);
}

bool SelectionCache::resident(PacketId p) const {
    auto it = slots_.find(p.key());
    return it != slots_.end() && it->second;
}

SelectionCache::Outcome SelectionCache::on_request(PacketId p, double now) {
    (void)now;
    auto it = slots_.find(p.key());
    if (it != slots_.end()) {
        if (it->second) return Outcome::Hit;
        return Outcome::MissForward; // reserved, data still in flight
    }
    if (phase_ == CachePhase::Selecting && slots_.size() < capacity_) {
        slots_.emplace(p.key(), false);
        order_.push_back(p);
        return Outcome::MissAndFetch;
    }
    return Outcome::MissForward;
}

SelectionCache::FillResult SelectionCache::on_data(PacketId p, double now) {
    FillResult result;
    auto it = slots_.find(p.key());
    if (it == slots_.end() || it->second) return result; // not ours / already filled
    it->second = true;
    ++resident_;
    ++fills_;
    result.stored = true;
    if (!stale_.empty()) {
        result.evicted = stale_.back();
        stale_.pop_back();
    }
    if (phase_ == CachePhase::Selecting && fills_ == capacity_) {
        phase_ = CachePhase::Frozen;
        frozen_until_ = now + frozen_period_;
    }
    return result;
}

void SelectionCache::on_timer(double now) {
    if (phase_ != CachePhase::Frozen || now < frozen_until_) return;
    phase_ = CachePhase::Selecting;
    frozen_until_ = kNever;
    stale_.clear();
    for (const auto& p : order_) {
        if (slots_[p.key()]) stale_.push_back(p);
    }
    slots_.clear();
    order_.clear();
    resident_ = 0;
    fills_ = 0;
}

} // namespace netcache
