#include "netcache/coordinated.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace netcache {

CoordinatedCache::CoordinatedCache(const Config& config) : config_(config) {
    if (config_.nomination_window < 1) {
        throw std::invalid_argument("CoordinatedCache: nomination window must be >= 1");
    }
    // A window wider than the cache itself can never be used.
    config_.nomination_window = std::min(config_.nomination_window, std::max(config_.capacity, 1u));
    slots_.resize(config_.capacity);
    unprotected_ = config_.capacity;
    remaining_ = config_.capacity;
    pointer_ = 0;
}

void CoordinatedCache::protect(std::uint32_t idx) {
    slots_[idx].pb = true;
    --unprotected_;
    if (idx == pointer_) advance_pointer();
}

void CoordinatedCache::unprotect(std::uint32_t idx) {
    slots_[idx].pb = false;
    ++unprotected_;
}

void CoordinatedCache::advance_pointer() {
    while (pointer_ < config_.capacity && slots_[pointer_].pb) ++pointer_;
}

void CoordinatedCache::freeze(double now) {
    phase_ = CachePhase::Frozen;
    frozen_until_ = now + config_.frozen_period;
    advance_pointer(); // no unprotected slot remains at or after it; parks
}

std::optional<std::uint32_t> CoordinatedCache::write_target() const {
    if (phase_ == CachePhase::Selecting) {
        if (pointer_ < config_.capacity && !slots_[pointer_].pb) return pointer_;
        return std::nullopt;
    }
    // Frozen: the pointer is parked; collisions may have opened slots anywhere.
    for (std::uint32_t i = 0; i < config_.capacity; ++i) {
        if (!slots_[i].pb) return i;
    }
    return std::nullopt;
}

CoordinatedCache::RequestOutcome CoordinatedCache::on_request(const RequestPacket& req,
                                                              double now) {
    const auto it = index_.find(req.packet.key());
    if (it != index_.end()) {
        const std::uint32_t idx = it->second;
        Slot& slot = slots_[idx];
        if (slot.pb) {
            if (req.nf == kNotNominated) {
                return {RequestAction::Serve, kNotNominated, false};
            }
            // Collision: a closer cache nominated this packet and owns it now.
            unprotect(idx);
            if (idx > pointer_) ++remaining_;
            return {RequestAction::Serve, req.nf, false};
        }
        if (req.nf == kNotNominated) {
            // Re-selection of a stale or redundant packet that proved itself
            // with a hit. Skipped when protecting the slot would leave an
            // in-flight nomination without a write target.
            if (phase_ == CachePhase::Selecting) {
                if (idx >= pointer_) {
                    if (remaining_ > outstanding_) {
                        protect(idx);
                        --remaining_;
                        if (remaining_ == 0) freeze(now);
                    }
                } else {
                    protect(idx); // refill of this slot stays deferred to frozen phase
                }
            } else if (unprotected_ > outstanding_) {
                protect(idx);
            }
            return {RequestAction::Serve, kNotNominated, false};
        }
        // Nominated request hitting an unprotected slot: serve, but leave the
        // slot replaceable; the nominating cache downstream owns the packet.
        return {RequestAction::Serve, req.nf, false};
    }

    // Miss.
    if (req.nf >= 0) {
        return {RequestAction::Forward, req.nf + 1, false};
    }
    const std::uint32_t budget =
        phase_ == CachePhase::Selecting
            ? std::min(remaining_, config_.nomination_window)
            : std::min(unprotected_, config_.nomination_window);
    const bool may_select = config_.capacity > 0 && outstanding_ < budget &&
                            pending_.count(req.packet.key()) == 0;
    if (may_select) {
        ++outstanding_;
        pending_.insert(req.packet.key());
        if (nomination_deadline_ == kNever) {
            nomination_deadline_ = now + config_.nomination_timeout;
        }
        return {RequestAction::Forward, 0, true};
    }
    return {RequestAction::Forward, kNotNominated, false};
}

CoordinatedCache::DataOutcome CoordinatedCache::on_data(const DataPacket& data, double now) {
    if (data.nf == kNotNominated) return DataOutcome{kNotNominated, false, {}, {}};
    if (data.nf > 0) return DataOutcome{data.nf - 1, false, {}, {}};

    // nf == 0: this cache nominated the request; write the packet.
    DataOutcome out{kNotNominated, false, {}, {}};
    const auto target = write_target();
    if (!target) {
        out.violation = "selected data packet arrived with no unprotected slot";
        return out;
    }
    const std::uint32_t idx = *target;
    Slot& slot = slots_[idx];
    if (auto dup = index_.find(data.packet.key());
        dup != index_.end() && dup->second != idx) {
        out.violation = "selected data packet is already resident in another slot";
        return out;
    }
    if (slot.packet) {
        out.evicted = *slot.packet;
        index_.erase(slot.packet->key());
    }
    slot.packet = data.packet;
    index_[data.packet.key()] = idx;
    protect(idx);
    out.wrote = true;

    if (outstanding_ > 0) --outstanding_; // can be 0 only after a timeout halving
    pending_.erase(data.packet.key());
    if (remaining_ > 0) --remaining_;
    nomination_deadline_ = outstanding_ > 0 ? now + config_.nomination_timeout : kNever;

    if (phase_ == CachePhase::Selecting && remaining_ == 0) freeze(now);
    return out;
}

void CoordinatedCache::on_frozen_timer(double now) {
    if (phase_ != CachePhase::Frozen || now < frozen_until_) return;
    phase_ = CachePhase::Selecting;
    frozen_until_ = kNever;
    for (auto& slot : slots_) slot.pb = false; // everything is stale now
    unprotected_ = config_.capacity;
    remaining_ = config_.capacity;
    pointer_ = 0;
}

void CoordinatedCache::on_nomination_timer(double now) {
    if (nomination_deadline_ == kNever || now < nomination_deadline_) return;
    outstanding_ /= 2;
    nomination_deadline_ = outstanding_ > 0 ? now + config_.nomination_timeout : kNever;
}

std::optional<double> CoordinatedCache::frozen_deadline() const {
    if (frozen_until_ == kNever) return std::nullopt;
    return frozen_until_;
}

std::optional<double> CoordinatedCache::nomination_deadline() const {
    if (nomination_deadline_ == kNever) return std::nullopt;
    return nomination_deadline_;
}

std::optional<std::string> CoordinatedCache::check_invariants() const {
    std::uint32_t unprotected = 0, at_or_after = 0;
    for (std::uint32_t i = 0; i < config_.capacity; ++i) {
        if (slots_[i].pb && !slots_[i].packet) {
            return "protected slot " + std::to_string(i + 1) + " is empty";
        }
        if (!slots_[i].pb) {
            ++unprotected;
            if (i >= pointer_) ++at_or_after;
        }
    }
    std::ostringstream err;
    if (unprotected != unprotected_) {
        err << "unprotected count " << unprotected_ << " != recount " << unprotected;
    } else if (outstanding_ > config_.nomination_window) {
        err << "outstanding nominations " << outstanding_ << " exceed window "
            << config_.nomination_window;
    } else if (pointer_ < config_.capacity && slots_[pointer_].pb) {
        err << "write pointer rests on a protected slot";
    } else if (phase_ == CachePhase::Selecting && remaining_ != at_or_after) {
        err << "remaining selections " << remaining_ << " != unprotected at/after pointer "
            << at_or_after;
    } else if (phase_ == CachePhase::Selecting && outstanding_ > remaining_) {
        err << "outstanding nominations " << outstanding_ << " exceed remaining selections "
            << remaining_;
    } else if (phase_ == CachePhase::Frozen && pointer_ != config_.capacity) {
        err << "frozen cache with unparked pointer " << pointer_ + 1;
    } else if (phase_ == CachePhase::Frozen && remaining_ != 0) {
        err << "frozen cache with remaining selections " << remaining_;
    } else {
        return std::nullopt;
    }
    return err.str();
}

} // namespace netcache
