#include <catch2/catch_amalgamated.hpp>

#include "ftcl/bits.hpp"
#include "ftcl/graph.hpp"
#include "ftcl/rng.hpp"

using namespace ftcl;

TEST_CASE("edge list parsing") {
  SECTION("path on 3 vertices") {
    Graph g = load_edge_list("3 2\n0 1\n1 2\n");
    REQUIRE(g.n() == 3);
    REQUIRE(g.m() == 2);
    REQUIRE(g.has_edge(0, 1));
    REQUIRE(g.has_edge(2, 1));
    REQUIRE_FALSE(g.has_edge(0, 2));
  }
  SECTION("self-loop rejected") {
    REQUIRE_THROWS_AS(load_edge_list("2 1\n0 0\n"), ParseError);
  }
  SECTION("duplicate edge rejected") {
    REQUIRE_THROWS_AS(load_edge_list("3 2\n0 1\n1 0\n"), ParseError);
  }
  SECTION("out of range id rejected") {
    REQUIRE_THROWS_AS(load_edge_list("2 1\n0 2\n"), ParseError);
  }
  SECTION("malformed line names its number") {
    try {
      load_edge_list("3 2\n0 1\nbogus\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      REQUIRE(std::string(e.what()).find("3") != std::string::npos);
    }
  }
  SECTION("complete graph K4") {
    Graph g = load_edge_list("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    REQUIRE(g.m() == 6);
    for (Vertex v = 0; v < 4; ++v) REQUIRE(g.degree(v) == 3);
  }
}

TEST_CASE("generators") {
  SECTION("star") {
    Graph g = generate_star(9);
    REQUIRE(g.n() == 10);
    REQUIRE(g.degree(0) == 9);
    for (Vertex v = 1; v < 10; ++v) REQUIRE(g.degree(v) == 1);
  }
  SECTION("grid edge count") {
    Graph g = generate_grid(3, 3);
    REQUIRE(g.n() == 9);
    REQUIRE(g.m() == 12);  // 2wh - w - h
    Graph g2 = generate_grid(5, 2);
    REQUIRE(g2.m() == 2 * 5 * 2 - 5 - 2);
  }
  SECTION("gnp extremes") {
    REQUIRE(generate_gnp(20, 0.0, 7).m() == 0);
    REQUIRE(generate_gnp(6, 1.0, 7).m() == 15);
  }
  SECTION("gnp deterministic per seed") {
    Graph a = generate_gnp(40, 0.2, 123), b = generate_gnp(40, 0.2, 123);
    REQUIRE(a.edges() == b.edges());
  }
  SECTION("cycle") {
    Graph g = generate_cycle(5);
    REQUIRE(g.m() == 5);
    for (Vertex v = 0; v < 5; ++v) REQUIRE(g.degree(v) == 2);
  }
  SECTION("bad parameters") {
    REQUIRE_THROWS_AS(generate_gnp(4, 1.5, 0), InvalidQuery);
    REQUIRE_THROWS_AS(generate_cycle(0), InvalidQuery);
  }
}

TEST_CASE("connectivity oracle") {
  SECTION("cut vertex on a path") {
    Graph g = load_edge_list("3 2\n0 1\n1 2\n");
    REQUIRE_FALSE(oracle_connected(g, 0, 2, VertexSet({1})));
    REQUIRE(oracle_connected(g, 0, 2, VertexSet{}));
  }
  SECTION("reflexive") {
    Graph g = generate_gnp(10, 0.1, 3);
    for (Vertex v = 0; v < 10; ++v) REQUIRE(oracle_connected(g, v, v, VertexSet{}));
  }
  SECTION("endpoint in fault set rejected") {
    Graph g = generate_cycle(4);
    REQUIRE_THROWS_AS(oracle_connected(g, 0, 2, VertexSet({0})), InvalidQuery);
  }
  SECTION("Petersen graph survives any two faults") {
    // 3-connected: outer C5, inner pentagram, spokes.
    std::vector<std::pair<Vertex, Vertex>> es;
    for (int i = 0; i < 5; ++i) {
      es.push_back({i, (i + 1) % 5});
      es.push_back({5 + i, 5 + (i + 2) % 5});
      es.push_back({i, 5 + i});
    }
    Graph g = Graph::from_edges(10, es);
    for (Vertex a = 0; a < 10; ++a)
      for (Vertex b = a + 1; b < 10; ++b) {
        VertexSet f({a, b});
        for (Vertex s = 0; s < 10; ++s)
          for (Vertex t = s + 1; t < 10; ++t)
            if (!f.contains(s) && !f.contains(t)) REQUIRE(oracle_connected(g, s, t, f));
      }
  }
  SECTION("equivalence relation on survivors") {
    Graph g = generate_gnp(16, 0.12, 99);
    VertexSet f({2, 9});
    for (Vertex a = 0; a < 16; ++a) {
      if (f.contains(a)) continue;
      for (Vertex b = 0; b < 16; ++b) {
        if (f.contains(b)) continue;
        bool ab = oracle_connected(g, a, b, f);
        REQUIRE(ab == oracle_connected(g, b, a, f));
        for (Vertex c = 0; c < 16; ++c) {
          if (f.contains(c)) continue;
          if (ab && oracle_connected(g, b, c, f)) REQUIRE(oracle_connected(g, a, c, f));
        }
      }
    }
  }
}

TEST_CASE("minimum spanning forest") {
  SECTION("triangle, drop the heavy edge") {
    std::vector<WeightedEdge> es{{0, 1, 1, 0}, {1, 2, 1, 0}, {0, 2, 2, 0}};
    auto keep = min_spanning_forest(3, es);
    REQUIRE(keep == std::vector<size_t>{0, 1});
  }
  SECTION("forest input kept whole") {
    std::vector<WeightedEdge> es{{0, 1, 5, 0}, {2, 3, 1, 0}};
    REQUIRE(min_spanning_forest(4, es).size() == 2);
  }
  SECTION("weighted C4 cycle property") {
    std::vector<WeightedEdge> es{{0, 1, 1, 0}, {1, 2, 2, 0}, {2, 3, 3, 0}, {3, 0, 4, 0}};
    auto keep = min_spanning_forest(4, es);
    REQUIRE(keep == std::vector<size_t>{0, 1, 2});
  }
  SECTION("tie-break is by endpoints then type") {
    std::vector<WeightedEdge> es{{0, 2, 1, 5}, {0, 1, 1, 0}, {1, 2, 1, 0}, {0, 2, 1, 1}};
    auto keep = min_spanning_forest(3, es);
    // Order at weight 1: (0,1,t0), (0,2,t1), (0,2,t5), (1,2,t0); Kruskal takes
    // the first two, so the type tag decides between the parallel {0,2} edges.
    REQUIRE(keep == std::vector<size_t>{1, 3});
  }
  SECTION("random instances: acyclic, spanning, cycle property") {
    Rng rng(4242);
    for (int it = 0; it < 30; ++it) {
      int n = 4 + static_cast<int>(rng.below(28));
      Graph g = generate_gnp(n, 0.25, rng.next());
      std::vector<WeightedEdge> es;
      for (const Edge& e : g.edges())
        es.push_back({e.u, e.v, static_cast<int64_t>(rng.below(6)), 0});
      auto keep = min_spanning_forest(n, es);
      UnionFind uf(n);
      std::vector<char> in_f(es.size(), 0);
      for (size_t i : keep) {
        REQUIRE(uf.unite(es[i].u, es[i].v));  // acyclic
        in_f[i] = 1;
      }
      UnionFind gc(n);
      for (const auto& e : es) gc.unite(e.u, e.v);
      for (Vertex a = 0; a < n; ++a)
        for (Vertex b = 0; b < n; ++b)
          REQUIRE((gc.find(a) == gc.find(b)) == (uf.find(a) == uf.find(b)));  // spanning
      // Cycle property: every non-forest edge is >= each forest edge on its cycle path.
      std::vector<std::vector<std::pair<Vertex, int64_t>>> fadj(n);
      for (size_t i : keep) {
        fadj[es[i].u].push_back({es[i].v, es[i].weight});
        fadj[es[i].v].push_back({es[i].u, es[i].weight});
      }
      for (size_t i = 0; i < es.size(); ++i) {
        if (in_f[i]) continue;
        // max weight on forest path u..v via DFS
        std::vector<int64_t> best(n, -1);
        std::vector<Vertex> stack{es[i].u};
        best[es[i].u] = 0;
        while (!stack.empty()) {
          Vertex x = stack.back();
          stack.pop_back();
          for (auto [y, w] : fadj[x])
            if (best[y] < 0) {
              best[y] = std::max(best[x], w);
              stack.push_back(y);
            }
        }
        REQUIRE(best[es[i].v] >= 0);
        REQUIRE(es[i].weight >= best[es[i].v]);
      }
    }
  }
}

TEST_CASE("bit utilities round-trip") {
  // Not a matrix sweep: one targeted check of packing behavior the labels rely on.
  BitWriter w;
  w.put(0b1011, 4);
  w.put(0xDEADBEEFull, 37);
  w.put(1, 1);
  auto bytes = w.bytes();
  BitReader r(bytes.data(), bytes.size());
  REQUIRE(r.get(4) == 0b1011);
  REQUIRE(r.get(37) == 0xDEADBEEFull);
  REQUIRE(r.get(1) == 1);
  REQUIRE_THROWS(r.get(8));  // only 6 padding bits remain
}
