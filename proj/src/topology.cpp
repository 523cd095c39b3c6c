#include "netcache/topology.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace netcache {

std::uint32_t Topology::total_contents() const {
    std::uint32_t total = 0;
    for (const auto& p : producers) total += p.content_count;
    return total;
}

std::uint32_t Topology::producer_of_content(std::uint32_t content) const {
    for (const auto& p : producers) {
        if (content >= p.first_content && content < p.first_content + p.content_count) {
            return p.id;
        }
    }
    throw std::out_of_range("producer_of_content: content " + std::to_string(content));
}

std::vector<std::vector<std::uint32_t>> Topology::adjacency() const {
    std::vector<std::vector<std::uint32_t>> adj(router_count);
    for (const auto& link : links) {
        adj[link.a].push_back(link.b);
        adj[link.b].push_back(link.a);
    }
    for (auto& neighbors : adj) std::sort(neighbors.begin(), neighbors.end());
    return adj;
}

Topology build_binary_tree(int levels, std::uint32_t consumers_per_group,
                           std::uint32_t contents, double link_delay) {
    if (levels < 2) throw std::invalid_argument("build_binary_tree: levels must be >= 2");
    Topology topo;
    topo.router_count = (1u << levels) - 1;
    topo.is_edge.assign(topo.router_count, false);
    for (std::uint32_t i = 1; i < topo.router_count; ++i) {
        topo.links.push_back({(i - 1) / 2, i, link_delay});
    }
    const std::uint32_t first_leaf = (1u << (levels - 1)) - 1;
    std::uint32_t group_id = 0;
    for (std::uint32_t leaf = first_leaf; leaf < topo.router_count; ++leaf) {
        topo.is_edge[leaf] = true;
        topo.groups.push_back({group_id++, leaf, consumers_per_group, link_delay});
    }
    topo.producers.push_back({0, 0, 1, contents});
    return topo;
}

const std::string& abilene_topology_text() {
    static const std::string text =
        "# Abilene (Internet2) backbone, 11 routers, 14 links\n"
        "# name_a name_b delay_seconds\n"
        "SEA SNV 0.001\n"
        "SEA DEN 0.001\n"
        "SNV LAX 0.001\n"
        "SNV DEN 0.001\n"
        "LAX HOU 0.001\n"
        "DEN KAN 0.001\n"
        "KAN HOU 0.001\n"
        "KAN IND 0.001\n"
        "HOU ATL 0.001\n"
        "IND ATL 0.001\n"
        "IND CHI 0.001\n"
        "CHI NYC 0.001\n"
        "ATL WDC 0.001\n"
        "NYC WDC 0.001\n";
    return text;
}

CoreTopology parse_core_topology(const std::string& text) {
    CoreTopology core;
    std::map<std::string, std::uint32_t> ids;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b;
        double delay = 0.0;
        if (!(ls >> a >> b >> delay) || delay < 0 || a == b) {
            throw std::runtime_error("parse_core_topology: malformed line: " + line);
        }
        auto intern = [&](const std::string& name) {
            auto [it, inserted] = ids.emplace(name, core.names.size());
            if (inserted) core.names.push_back(name);
            return it->second;
        };
        core.links.push_back({intern(a), intern(b), delay});
    }
    if (core.names.empty()) throw std::runtime_error("parse_core_topology: no links");
    return core;
}

CoreTopology load_core_topology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_core_topology: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_core_topology(buffer.str());
}

Topology build_abilene(std::uint32_t consumers_per_group, std::uint32_t contents_per_producer,
                       const std::string& topo_file, double edge_link_delay) {
    const CoreTopology core = topo_file.empty() ? parse_core_topology(abilene_topology_text())
                                                : load_core_topology(topo_file);
    const auto cores = static_cast<std::uint32_t>(core.names.size());

    Topology topo;
    topo.router_count = 2 * cores; // cores 0..n-1, edges n..2n-1
    topo.is_edge.assign(topo.router_count, false);
    topo.links = core.links;
    topo.router_names = core.names;
    for (std::uint32_t i = 0; i < cores; ++i) {
        const std::uint32_t edge = cores + i;
        topo.router_names.push_back(core.names[i] + "-edge");
        topo.is_edge[edge] = true;
        topo.links.push_back({i, edge, edge_link_delay});
        topo.groups.push_back({i, edge, consumers_per_group, edge_link_delay});
        topo.producers.push_back({i, i, i * contents_per_producer + 1, contents_per_producer});
    }
    return topo;
}

std::vector<Route> shortest_path_routes(const Topology& topo) {
    const auto adj = topo.adjacency();
    std::vector<Route> routes;
    routes.reserve(topo.groups.size() * topo.producers.size());

    std::vector<std::uint32_t> dist;
    for (const auto& group : topo.groups) {
        for (const auto& producer : topo.producers) {
            constexpr std::uint32_t kUnreached = 0xffffffff;
            dist.assign(topo.router_count, kUnreached);
            std::deque<std::uint32_t> frontier{producer.router};
            dist[producer.router] = 0;
            while (!frontier.empty()) {
                const std::uint32_t u = frontier.front();
                frontier.pop_front();
                for (std::uint32_t v : adj[u]) {
                    if (dist[v] == kUnreached) {
                        dist[v] = dist[u] + 1;
                        frontier.push_back(v);
                    }
                }
            }
            if (dist[group.router] == kUnreached) {
                throw std::runtime_error("shortest_path_routes: producer " +
                                         std::to_string(producer.id) + " unreachable from group " +
                                         std::to_string(group.id));
            }
            Route route{group.id, producer.id, {}};
            std::uint32_t at = group.router;
            route.routers.push_back(at);
            while (at != producer.router) {
                // Smallest-id downhill neighbor keeps the path deterministic
                // and lexicographically minimal among shortest paths.
                for (std::uint32_t v : adj[at]) {
                    if (dist[v] + 1 == dist[at]) {
                        at = v;
                        break;
                    }
                }
                route.routers.push_back(at);
            }
            routes.push_back(std::move(route));
        }
    }
    return routes;
}

double router_avg(const std::vector<Route>& routes) {
    if (routes.empty()) return 0.0;
    double hops = 0.0;
    for (const auto& r : routes) hops += static_cast<double>(r.routers.size());
    return hops / static_cast<double>(routes.size()) - 1.0;
}

} // namespace netcache
