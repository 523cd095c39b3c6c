#include "netcache/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "netcache/replacement.hpp"
#include "netcache/rng.hpp"
#include "netcache/selection.hpp"
#include "netcache/traffic.hpp"

namespace netcache {

namespace {

enum class EventKind : std::uint8_t { Request, Data, Delivered, FrozenTimer, NomTimer };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Request;
    std::uint32_t route = 0;
    std::uint16_t hop = 0;
    PacketId packet;
    std::int32_t nf = kNotNominated;
    std::int64_t token = -1;
    std::uint32_t router = 0; // timers only
    double deadline = 0.0;    // timers only
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

bool is_material(EventKind kind) {
    return kind == EventKind::Request || kind == EventKind::Data ||
           kind == EventKind::Delivered;
}

struct RouterState {
    CacheKind kind = CacheKind::None;
    std::optional<ReplacementCache> repl;
    std::optional<SelectionCache> sel;
    std::optional<CoordinatedCache> coord;
    RunCounters::PerRouter stats;
    double scheduled_frozen = -1.0;
    double scheduled_nom = -1.0;
    std::uint64_t coord_events = 0;
};

struct NominationToken {
    std::uint32_t nominator = 0;
    std::uint32_t writes = 0;
};

class Engine {
public:
    Engine(const Scenario& scenario, std::uint64_t seed)
        : scenario_(scenario), seed_(seed) {}

    RunResult run();

private:
    void build();
    void process(const Event& ev);
    void on_request(const Event& ev);
    void on_data(const Event& ev);
    void serve(const Event& ev, int data_nf);
    void forward_data(const Event& ev, int nf);
    void sync_timers(std::uint32_t router_id);
    void push(Event ev);
    double link_delay(std::uint32_t a, std::uint32_t b) const;
    void tap(std::uint32_t router_id, bool forwarded, PacketId p);
    void coordinated_checkpoint(std::uint32_t router_id, bool force = false);
    [[noreturn]] void fail(const std::string& what, const Event& ev);

    const Scenario& scenario_;
    std::uint64_t seed_;

    std::vector<Route> routes_;
    std::vector<std::uint32_t> content_producer_; // 1-based content -> producer
    std::unordered_map<std::uint64_t, double> delays_;
    std::vector<RouterState> routers_;
    std::vector<WorkloadEvent> workload_;
    std::vector<NominationToken> tokens_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t material_ = 0;
    double nomination_timeout_ = 0.1;

    RunCounters counters_;
    std::vector<std::uint64_t> tap_stream_;
    std::uint64_t invariant_checks_ = 0;
    std::uint64_t events_processed_ = 0;

    std::array<Event, 64> recent_{};
    std::size_t recent_pos_ = 0;
};

double Engine::link_delay(std::uint32_t a, std::uint32_t b) const {
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
    return delays_.at(key);
}

void Engine::build() {
    const auto& topo = scenario_.topo;
    if (scenario_.caches.size() != topo.router_count) {
        throw std::invalid_argument("Scenario: need one cache spec per router");
    }
    if (scenario_.producer_alpha.size() != topo.producers.size()) {
        throw std::invalid_argument("Scenario: need one alpha per producer");
    }
    if (scenario_.duration <= 0) throw std::invalid_argument("Scenario: duration must be > 0");

    routes_ = shortest_path_routes(topo);
    double max_delay = 0.0;
    for (const auto& link : topo.links) {
        const std::uint64_t key =
            (static_cast<std::uint64_t>(std::min(link.a, link.b)) << 32) | std::max(link.a, link.b);
        delays_[key] = link.delay;
        max_delay = std::max(max_delay, link.delay);
    }
    std::size_t max_route_hops = 0;
    for (const auto& r : routes_) max_route_hops = std::max(max_route_hops, r.routers.size());
    nomination_timeout_ = scenario_.coord.nomination_timeout > 0
                              ? scenario_.coord.nomination_timeout
                              : 2.0 * static_cast<double>(max_route_hops + 1) * max_delay;

    content_producer_.assign(topo.total_contents() + 1, 0);
    for (const auto& p : topo.producers) {
        for (std::uint32_t c = p.first_content; c < p.first_content + p.content_count; ++c) {
            content_producer_[c] = p.id;
        }
    }

    routers_.resize(topo.router_count);
    for (std::uint32_t r = 0; r < topo.router_count; ++r) {
        RouterState& rs = routers_[r];
        const CacheSpec& spec = scenario_.caches[r];
        rs.kind = spec.kind;
        rs.stats.router = r;
        counters_.slots_total += spec.capacity;
        switch (spec.kind) {
            case CacheKind::None:
                break;
            case CacheKind::Lru:
                rs.repl.emplace(ReplacementPolicy::Lru, spec.capacity);
                break;
            case CacheKind::Fifo:
                rs.repl.emplace(ReplacementPolicy::Fifo, spec.capacity);
                break;
            case CacheKind::Rnd:
                rs.repl.emplace(ReplacementPolicy::Random, spec.capacity, derive_seed(seed_, 3, r));
                break;
            case CacheKind::Selection:
                rs.sel.emplace(spec.capacity, scenario_.coord.frozen_period);
                break;
            case CacheKind::Coordinated: {
                CoordinatedCache::Config cfg;
                cfg.capacity = spec.capacity;
                cfg.nomination_window = scenario_.coord.nomination_window;
                cfg.frozen_period = scenario_.coord.frozen_period;
                cfg.nomination_timeout = nomination_timeout_;
                rs.coord.emplace(cfg);
                break;
            }
        }
    }

    std::vector<Popularity> pops;
    std::vector<CatalogWorkload> catalogs;
    pops.reserve(topo.producers.size());
    for (std::size_t p = 0; p < topo.producers.size(); ++p) {
        pops.push_back(Popularity::zipf(scenario_.producer_alpha[p],
                                        topo.producers[p].content_count));
    }
    for (std::size_t p = 0; p < topo.producers.size(); ++p) {
        catalogs.push_back({&pops[p], topo.producers[p].first_content,
                            scenario_.group_content_rate /
                                static_cast<double>(topo.producers.size())});
    }
    const auto sizes = sample_catalog_sizes(topo.total_contents(), scenario_.mean_content_size,
                                            derive_seed(seed_, 2));
    workload_ = generate_workload(catalogs, static_cast<std::uint32_t>(topo.groups.size()),
                                  scenario_.duration, scenario_.cbr_rate, sizes,
                                  derive_seed(seed_, 1));
    next_seq_ = workload_.size();
}

void Engine::push(Event ev) {
    if (is_material(ev.kind)) ++material_;
    queue_.push(ev);
}

void Engine::tap(std::uint32_t router_id, bool forwarded, PacketId p) {
    const auto& cfg = scenario_.tap;
    if (cfg.kind == SdTapConfig::Kind::None || cfg.router != router_id) return;
    if ((cfg.kind == SdTapConfig::Kind::Forwarded) != forwarded) return;
    tap_stream_.push_back(cfg.content_level ? p.content : p.key());
}

void Engine::fail(const std::string& what, const Event& ev) {
    std::ostringstream out;
    out << "protocol invariant violated: " << what << " [router event t=" << ev.time
        << " kind=" << static_cast<int>(ev.kind) << " packet=" << ev.packet.content << "/"
        << ev.packet.index << " nf=" << ev.nf << "]\nrecent events:";
    for (std::size_t i = 0; i < recent_.size(); ++i) {
        const Event& r = recent_[(recent_pos_ + i) % recent_.size()];
        if (r.seq == 0 && r.time == 0.0 && i > 0) continue;
        out << "\n  t=" << r.time << " seq=" << r.seq << " kind=" << static_cast<int>(r.kind)
            << " route=" << r.route << " hop=" << r.hop << " packet=" << r.packet.content << "/"
            << r.packet.index << " nf=" << r.nf;
    }
    throw SimulationError(out.str());
}

void Engine::coordinated_checkpoint(std::uint32_t router_id, bool force) {
    RouterState& rs = routers_[router_id];
    if (!rs.coord) return;
    if (!force && ++rs.coord_events % scenario_.invariant_check_interval != 0) return;
    ++invariant_checks_;
    if (auto err = rs.coord->check_invariants()) {
        Event ev{};
        ev.router = router_id;
        fail("router " + std::to_string(router_id) + ": " + *err, ev);
    }
}

void Engine::sync_timers(std::uint32_t router_id) {
    RouterState& rs = routers_[router_id];
    auto schedule = [&](EventKind kind, double deadline, double& scheduled) {
        if (deadline == scheduled) return;
        scheduled = deadline;
        if (deadline < 0 || !std::isfinite(deadline)) return;
        Event ev;
        ev.time = deadline;
        ev.seq = next_seq_++;
        ev.kind = kind;
        ev.router = router_id;
        ev.deadline = deadline;
        push(ev);
    };
    if (rs.sel) {
        const double d =
            rs.sel->phase() == CachePhase::Frozen ? rs.sel->frozen_until() : -1.0;
        schedule(EventKind::FrozenTimer, d, rs.scheduled_frozen);
    }
    if (rs.coord) {
        const auto fd = rs.coord->frozen_deadline();
        schedule(EventKind::FrozenTimer, fd ? *fd : -1.0, rs.scheduled_frozen);
        const auto nd = rs.coord->nomination_deadline();
        schedule(EventKind::NomTimer, nd ? *nd : -1.0, rs.scheduled_nom);
    }
}

// Moves a data packet one step toward the consumer (or delivers it).
void Engine::forward_data(const Event& ev, int nf) {
    Event data;
    data.seq = next_seq_++;
    data.kind = ev.hop == 0 ? EventKind::Delivered : EventKind::Data;
    data.route = ev.route;
    data.packet = ev.packet;
    data.nf = nf;
    data.token = ev.token;
    const auto& route = routes_[ev.route];
    if (ev.hop == 0) {
        data.time = ev.time + scenario_.topo.groups[route.group].link_delay;
    } else {
        data.hop = static_cast<std::uint16_t>(ev.hop - 1);
        data.time = ev.time + link_delay(route.routers[ev.hop - 1], route.routers[ev.hop]);
    }
    push(data);
}

void Engine::serve(const Event& ev, int data_nf) {
    counters_.hop_sum_cache += 1.0 + ev.hop;
    counters_.traffic_cache += ev.hop;
    forward_data(ev, data_nf);
}

void Engine::on_request(const Event& ev) {
    if (ev.nf < kNotNominated) fail("request nf below -1", ev);
    const auto& route = routes_[ev.route];
    const std::uint32_t router_id = route.routers[ev.hop];
    RouterState& rs = routers_[router_id];
    ++rs.stats.requests_in;
    if (ev.hop == 0) {
        ++counters_.requests_entered;
        counters_.hop_sum_nocache += static_cast<double>(route.routers.size());
        counters_.traffic_nocache += static_cast<double>(route.routers.size() - 1);
    }
    tap(router_id, false, ev.packet);

    bool hit = false;
    int serve_nf = ev.nf;
    int forward_nf = ev.nf;
    std::int64_t token = ev.token;

    switch (rs.kind) {
        case CacheKind::None:
            break;
        case CacheKind::Lru:
        case CacheKind::Fifo:
        case CacheKind::Rnd:
            hit = rs.repl->lookup(ev.packet);
            break;
        case CacheKind::Selection: {
            const auto outcome = rs.sel->on_request(ev.packet, ev.time);
            hit = outcome == SelectionCache::Outcome::Hit;
            break;
        }
        case CacheKind::Coordinated: {
            RequestPacket req{ev.packet, ev.nf, route.group, ev.time};
            const auto outcome = rs.coord->on_request(req, ev.time);
            if (outcome.nominated) {
                if (ev.nf != kNotNominated) fail("nominated a request with nf >= 0", ev);
                token = static_cast<std::int64_t>(tokens_.size());
                tokens_.push_back({router_id, 0});
            }
            hit = outcome.action == CoordinatedCache::RequestAction::Serve;
            if (hit) serve_nf = outcome.nf; else forward_nf = outcome.nf;
            sync_timers(router_id);
            coordinated_checkpoint(router_id);
            break;
        }
    }

    if (hit) {
        ++rs.stats.hits;
        serve(ev, serve_nf);
        return;
    }

    ++rs.stats.forwarded;
    tap(router_id, true, ev.packet);
    if (ev.hop + 1u < route.routers.size()) {
        Event next = ev;
        next.seq = next_seq_++;
        next.hop = static_cast<std::uint16_t>(ev.hop + 1);
        next.nf = forward_nf;
        next.token = token;
        next.time = ev.time + link_delay(route.routers[ev.hop], route.routers[ev.hop + 1]);
        push(next);
        return;
    }

    // The attachment router missed; the colocated producer serves and copies
    // the request nf into the data packet. The data re-enters the router.
    ++counters_.producer_served;
    counters_.hop_sum_cache += static_cast<double>(route.routers.size());
    counters_.traffic_cache += static_cast<double>(route.routers.size() - 1);
    Event data;
    data.time = ev.time;
    data.seq = next_seq_++;
    data.kind = EventKind::Data;
    data.route = ev.route;
    data.hop = ev.hop;
    data.packet = ev.packet;
    data.nf = forward_nf;
    data.token = token;
    push(data);
}

void Engine::on_data(const Event& ev) {
    if (ev.nf < kNotNominated) fail("data nf below -1", ev);
    const auto& route = routes_[ev.route];
    const std::uint32_t router_id = route.routers[ev.hop];
    RouterState& rs = routers_[router_id];
    int nf = ev.nf;
    std::int64_t token = ev.token;

    switch (rs.kind) {
        case CacheKind::None:
            break;
        case CacheKind::Lru:
        case CacheKind::Fifo:
        case CacheKind::Rnd:
            // Universal caching: store every passing data packet.
            if (!rs.repl->contains(ev.packet)) {
                const auto victim = rs.repl->insert(ev.packet);
                if (rs.repl->contains(ev.packet)) {
                    ++rs.stats.writes;
                    ++counters_.writes_total;
                }
                if (victim) {
                    ++rs.stats.evictions;
                    ++counters_.evictions_total;
                }
            }
            break;
        case CacheKind::Selection: {
            const auto fill = rs.sel->on_data(ev.packet, ev.time);
            if (fill.stored) {
                ++rs.stats.writes;
                ++counters_.writes_total;
            }
            if (fill.evicted) {
                ++rs.stats.evictions;
                ++counters_.evictions_total;
            }
            sync_timers(router_id);
            break;
        }
        case CacheKind::Coordinated: {
            DataPacket packet{ev.packet, ev.nf, 1};
            const auto outcome = rs.coord->on_data(packet, ev.time);
            if (outcome.violation) fail(*outcome.violation, ev);
            nf = outcome.nf;
            if (outcome.wrote) {
                ++rs.stats.writes;
                ++counters_.writes_total;
                if (ev.token < 0) fail("selected data packet carries no nomination token", ev);
                NominationToken& tok = tokens_[static_cast<std::size_t>(ev.token)];
                if (tok.nominator != router_id) {
                    fail("data packet written by a router that did not nominate it", ev);
                }
                if (++tok.writes != 1) fail("nomination token written twice", ev);
                token = -1;
            }
            if (outcome.evicted) {
                ++rs.stats.evictions;
                ++counters_.evictions_total;
            }
            sync_timers(router_id);
            coordinated_checkpoint(router_id);
            break;
        }
    }

    Event onward = ev;
    onward.nf = nf;
    onward.token = token;
    forward_data(onward, nf);
}

void Engine::process(const Event& ev) {
    ++events_processed_;
    recent_[recent_pos_] = ev;
    recent_pos_ = (recent_pos_ + 1) % recent_.size();

    switch (ev.kind) {
        case EventKind::Request:
            on_request(ev);
            break;
        case EventKind::Data:
            on_data(ev);
            break;
        case EventKind::Delivered:
            ++counters_.completions;
            break;
        case EventKind::FrozenTimer: {
            RouterState& rs = routers_[ev.router];
            if (rs.sel) {
                rs.sel->on_timer(ev.time);
                rs.scheduled_frozen = -1.0;
                sync_timers(ev.router);
            } else if (rs.coord) {
                rs.coord->on_frozen_timer(ev.time);
                rs.scheduled_frozen = -1.0;
                sync_timers(ev.router);
                coordinated_checkpoint(ev.router, true);
            }
            break;
        }
        case EventKind::NomTimer: {
            RouterState& rs = routers_[ev.router];
            if (rs.coord && ev.deadline == rs.scheduled_nom) {
                rs.coord->on_nomination_timer(ev.time);
                rs.scheduled_nom = -1.0;
                sync_timers(ev.router);
            }
            break;
        }
    }
}

RunResult Engine::run() {
    build();

    std::size_t wpos = 0;
    while (true) {
        while (wpos < workload_.size() &&
               (queue_.empty() || workload_[wpos].time <= queue_.top().time)) {
            const WorkloadEvent& w = workload_[wpos];
            Event ev;
            ev.time = w.time;
            ev.seq = wpos;
            ev.kind = EventKind::Request;
            ev.route = static_cast<std::uint32_t>(
                w.group * scenario_.topo.producers.size() +
                content_producer_[w.packet.content]);
            ev.hop = 0;
            ev.packet = w.packet;
            ev.nf = kNotNominated;
            ev.token = -1;
            push(ev);
            ++wpos;
        }
        if (queue_.empty()) break;
        if (material_ == 0 && wpos == workload_.size()) break;
        const Event ev = queue_.top();
        queue_.pop();
        if (is_material(ev.kind)) --material_;
        process(ev);
    }

    // End-of-run checks: every request answered, every nomination written
    // exactly once at its nominator, counters consistent with slot state.
    if (counters_.completions != counters_.requests_entered) {
        Event ev{};
        fail("requests entered (" + std::to_string(counters_.requests_entered) +
                 ") != data packets delivered (" + std::to_string(counters_.completions) + ")",
             ev);
    }
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
        if (tokens_[t].writes != 1) {
            Event ev{};
            fail("nomination token " + std::to_string(t) + " has " +
                     std::to_string(tokens_[t].writes) + " writes",
                 ev);
        }
    }
    for (std::uint32_t r = 0; r < routers_.size(); ++r) {
        RouterState& rs = routers_[r];
        rs.coord_events = scenario_.invariant_check_interval - 1;
        coordinated_checkpoint(r, true);
        counters_.routers.push_back(rs.stats);
    }
    if (scenario_.tap.kind != SdTapConfig::Kind::None) {
        counters_.tap_stream = std::move(tap_stream_);
    }

    RunResult result;
    result.counters = std::move(counters_);
    result.report = compute_report(result.counters);
    result.invariant_checks = invariant_checks_;
    result.nomination_tokens = tokens_.size();
    result.events_processed = events_processed_;
    return result;
}

} // namespace

RunResult run_simulation(const Scenario& scenario, std::uint64_t seed) {
    Engine engine(scenario, seed);
    return engine.run();
}

const char* to_string(CacheKind kind) {
    switch (kind) {
        case CacheKind::None: return "none";
        case CacheKind::Lru: return "LRU";
        case CacheKind::Fifo: return "FIFO";
        case CacheKind::Rnd: return "RND";
        case CacheKind::Selection: return "SEL";
        case CacheKind::Coordinated: return "COORD";
    }
    return "?";
}

} // namespace netcache
