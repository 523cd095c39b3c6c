#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "netcache/topology.hpp"

using namespace netcache;

TEST_CASE("binary tree shapes") {
    const Topology t5 = build_binary_tree(5, 125, 1000);
    CHECK(t5.router_count == 31);
    std::size_t edges = 0;
    for (bool e : t5.is_edge) edges += e;
    CHECK(edges == 16);
    CHECK(t5.groups.size() == 16);
    CHECK(t5.groups.front().consumers == 125);
    CHECK(t5.producers.size() == 1);
    CHECK(t5.total_contents() == 1000);

    const Topology t2 = build_binary_tree(2, 10, 100);
    CHECK(t2.router_count == 3);
    CHECK(t2.groups.size() == 2);

    CHECK_THROWS_AS(build_binary_tree(1, 1, 1), std::invalid_argument);
}

TEST_CASE("tree routes run leaf to root with length equal to levels") {
    for (int levels : {2, 3, 4, 5}) {
        const Topology topo = build_binary_tree(levels, 1, 10);
        const auto routes = shortest_path_routes(topo);
        REQUIRE(routes.size() == topo.groups.size());
        for (const auto& route : routes) {
            CHECK(route.routers.size() == static_cast<std::size_t>(levels));
            CHECK(route.routers.front() == topo.groups[route.group].router);
            CHECK(route.routers.back() == 0); // producer at the root
        }
        CHECK(router_avg(routes) == doctest::Approx(levels - 1.0));
    }
}

TEST_CASE("abilene wiring matches the bundled backbone") {
    const Topology topo = build_abilene(100, 100);
    CHECK(topo.router_count == 22);
    CHECK(topo.producers.size() == 11);
    CHECK(topo.groups.size() == 11);
    CHECK(topo.total_contents() == 1100);
    CHECK(topo.groups.front().consumers == 100);
    std::size_t edges = 0;
    for (bool e : topo.is_edge) edges += e;
    CHECK(edges == 11);
    // 14 backbone links plus one edge attachment per core router.
    CHECK(topo.links.size() == 25);
}

TEST_CASE("bundled abilene file matches the embedded adjacency") {
    std::ifstream in(std::string(NETCACHE_SOURCE_DIR) + "/data/abilene.topo");
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str() == abilene_topology_text());

    // Loading the file gives the same network as the embedded copy.
    const Topology from_file =
        build_abilene(100, 100, std::string(NETCACHE_SOURCE_DIR) + "/data/abilene.topo");
    const Topology embedded = build_abilene(100, 100);
    CHECK(from_file.router_count == embedded.router_count);
    CHECK(from_file.links.size() == embedded.links.size());
    CHECK(from_file.router_names == embedded.router_names);
}

TEST_CASE("abilene adjacency transcription is pinned") {
    const CoreTopology core = parse_core_topology(abilene_topology_text());
    REQUIRE(core.names.size() == 11);
    REQUIRE(core.links.size() == 14);
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& link : core.links) {
        std::string a = core.names[link.a], b = core.names[link.b];
        if (b < a) std::swap(a, b);
        edges.insert({a, b});
    }
    const std::set<std::pair<std::string, std::string>> expected{
        {"SEA", "SNV"}, {"DEN", "SEA"}, {"LAX", "SNV"}, {"DEN", "SNV"}, {"HOU", "LAX"},
        {"DEN", "KAN"}, {"HOU", "KAN"}, {"IND", "KAN"}, {"ATL", "HOU"}, {"ATL", "IND"},
        {"CHI", "IND"}, {"CHI", "NYC"}, {"ATL", "WDC"}, {"NYC", "WDC"}};
    CHECK(edges == expected);
}

TEST_CASE("malformed topology files are rejected") {
    CHECK_THROWS(parse_core_topology("A A 0.001\n"));
    CHECK_THROWS(parse_core_topology("A B\n"));
    CHECK_THROWS(parse_core_topology(""));
    CHECK_THROWS(load_core_topology("/nonexistent/file.topo"));
}

TEST_CASE("abilene routes are deterministic shortest paths") {
    const Topology topo = build_abilene(100, 100);
    const auto routes = shortest_path_routes(topo);
    REQUIRE(routes.size() == 11 * 11);
    const auto adj = topo.adjacency();
    for (const auto& route : routes) {
        CHECK(route.routers.front() == topo.groups[route.group].router);
        CHECK(route.routers.back() == topo.producers[route.producer].router);
        std::set<std::uint32_t> seen;
        for (std::size_t i = 0; i < route.routers.size(); ++i) {
            CHECK(seen.insert(route.routers[i]).second); // simple path
            if (i > 0) {
                const auto& n = adj[route.routers[i - 1]];
                CHECK(std::find(n.begin(), n.end(), route.routers[i]) != n.end());
            }
        }
    }
    // Same-site requests: edge router then the colocated core.
    const auto& local = routes[0 * 11 + 0];
    CHECK(local.routers.size() == 2);

    const auto again = shortest_path_routes(topo);
    for (std::size_t i = 0; i < routes.size(); ++i) CHECK(routes[i].routers == again[i].routers);
}

TEST_CASE("unreachable producers fail route construction") {
    Topology topo;
    topo.router_count = 2; // no link between router 0 and 1
    topo.is_edge = {true, false};
    topo.groups.push_back({0, 0, 1, 0.001});
    topo.producers.push_back({0, 1, 1, 10});
    CHECK_THROWS_AS(shortest_path_routes(topo), std::runtime_error);
}
