#include <catch2/catch_amalgamated.hpp>

#include "ftcl/decomp.hpp"
#include "ftcl/rng.hpp"

using namespace ftcl;

TEST_CASE("decomp on a star isolates the center") {
  Graph g = generate_star(9);
  VertexSet u;
  for (Vertex v = 0; v < 10; ++v) u.insert(v);
  auto r = decomp(g, u, 4);  // contract checked internally
  REQUIRE(r.bad.size() == 1);
  REQUIRE(r.bad.contains(0));
  REQUIRE(r.tree.size() == 9);
}

TEST_CASE("decomp on low-degree graphs returns empty separator") {
  SECTION("path P8") {
    Graph g = load_edge_list("8 7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n");
    VertexSet u({0, 1, 2, 3, 4, 5, 6, 7});
    auto r = decomp(g, u, 4);
    REQUIRE(r.bad.empty());
    REQUIRE(r.tree.size() == 7);
  }
  SECTION("cycle C8") {
    Graph g = generate_cycle(8);
    VertexSet u({0, 1, 2, 3, 4, 5, 6, 7});
    auto r = decomp(g, u, 4);
    REQUIRE(r.bad.empty());
    REQUIRE(r.tree.size() == 7);  // Hamiltonian path
  }
  SECTION("at most four terminals never need a separator") {
    Graph g = generate_gnp(30, 0.2, 5);
    auto r = decomp(g, VertexSet({0, 7, 13, 22}), 4);
    REQUIRE(r.bad.empty());
  }
}

TEST_CASE("decomp edge cases") {
  Graph g = generate_cycle(6);
  REQUIRE(decomp(g, VertexSet{}, 4).tree.empty());
  auto single = decomp(g, VertexSet({3}), 4);
  REQUIRE(single.tree.empty());
  REQUIRE(single.verts == std::vector<Vertex>{3});
  REQUIRE_THROWS_AS(decomp(g, VertexSet({0}), 2), InvalidQuery);
}

TEST_CASE("decomp handles disconnected inputs") {
  // Two disjoint stars.
  Graph g(12);
  for (Vertex v = 1; v <= 5; ++v) g.add_edge(0, v);
  for (Vertex v = 7; v <= 11; ++v) g.add_edge(6, v);
  g.finish();
  VertexSet u;
  for (Vertex v = 0; v < 12; ++v) u.insert(v);
  auto r = decomp(g, u, 4);
  REQUIRE(r.bad == VertexSet({0, 6}));
  REQUIRE(r.tree.size() == 10);
}

TEST_CASE("decomp contract on random graphs") {
  // decomp() throws if its own checker fails, so surviving is the assertion;
  // still spot-check the separation property independently here.
  Rng rng(20240817);
  for (int it = 0; it < 40; ++it) {
    int n = 8 + static_cast<int>(rng.below(120));
    double p = 1.5 / n + 0.15 * rng.below(10) / 10.0;
    Graph g = generate_gnp(n, p, rng.next());
    std::vector<Vertex> us;
    for (Vertex v = 0; v < n; ++v)
      if (rng.coin(0.7)) us.push_back(v);
    VertexSet u(std::move(us));
    auto r = decomp(g, u, 4, rng.next());
    check_decomp_contract(g, u, 4, r);
  }
}

TEST_CASE("decomp contract checker rejects bad outputs") {
  Graph g = generate_star(9);
  VertexSet u;
  for (Vertex v = 0; v < 10; ++v) u.insert(v);
  DecompResult bogus;
  for (Vertex v = 0; v < 10; ++v) bogus.verts.push_back(v);
  for (Vertex v = 1; v < 10; ++v) bogus.tree.push_back({0, v});
  SECTION("degree too high without separator") {
    REQUIRE_THROWS_AS(check_decomp_contract(g, u, 4, bogus), ConstructionError);
  }
  SECTION("separator too large") {
    bogus.bad = VertexSet({0, 1, 2, 3, 4, 5});
    REQUIRE_THROWS_AS(check_decomp_contract(g, u, 4, bogus), ConstructionError);
  }
  SECTION("missing terminal") {
    DecompResult empty;
    REQUIRE_THROWS_AS(check_decomp_contract(g, u, 4, empty), ConstructionError);
  }
}
