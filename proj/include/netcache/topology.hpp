#ifndef NETCACHE_TOPOLOGY_HPP
#define NETCACHE_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace netcache {

struct Link {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    double delay = 0.001; // seconds, per traversal
};

struct ConsumerGroup {
    std::uint32_t id = 0;
    std::uint32_t router = 0; // attachment edge router
    std::uint32_t consumers = 0;
    double link_delay = 0.001; // consumer <-> edge link
};

struct Producer {
    std::uint32_t id = 0;
    std::uint32_t router = 0;        // colocated attachment router
    std::uint32_t first_content = 1; // global 1-based content range
    std::uint32_t content_count = 0;
};

struct Topology {
    std::uint32_t router_count = 0;
    std::vector<bool> is_edge;
    std::vector<Link> links; // router-router only
    std::vector<ConsumerGroup> groups;
    std::vector<Producer> producers;
    std::vector<std::string> router_names; // optional, for named topologies

    std::uint32_t total_contents() const;
    std::uint32_t producer_of_content(std::uint32_t content) const;
    std::vector<std::vector<std::uint32_t>> adjacency() const; // sorted neighbor ids
};

// Full binary tree with 2^levels - 1 routers; every leaf is an edge router
// hosting one consumer group, and a single producer sits at the root.
Topology build_binary_tree(int levels, std::uint32_t consumers_per_group,
                           std::uint32_t contents, double link_delay = 0.001);

// The 11-router US backbone with one edge router (100-consumer group) and one
// producer per core router. The core adjacency comes from a line-oriented
// topology file; with an empty path the bundled copy is used.
Topology build_abilene(std::uint32_t consumers_per_group, std::uint32_t contents_per_producer,
                       const std::string& topo_file = "", double edge_link_delay = 0.001);

// Parses "name_a name_b delay" lines ('#' comments allowed) into a core
// topology; router ids follow first appearance order.
struct CoreTopology {
    std::vector<std::string> names;
    std::vector<Link> links;
};
CoreTopology parse_core_topology(const std::string& text);
CoreTopology load_core_topology(const std::string& path);

// The bundled Abilene adjacency, identical to data/abilene.topo.
const std::string& abilene_topology_text();

// Hop-shortest path for one (group, producer) pair; data returns on the
// reverse path. Ties resolve to the lexicographically smallest router-id
// sequence so routing is deterministic.
struct Route {
    std::uint32_t group = 0;
    std::uint32_t producer = 0;
    std::vector<std::uint32_t> routers; // edge router first, attachment router last
};

std::vector<Route> shortest_path_routes(const Topology& topo);

// Mean number of caches between consumers and producers: request-weighted
// hop distance minus one, with uniform request weights over routes.
double router_avg(const std::vector<Route>& routes);

} // namespace netcache

#endif
