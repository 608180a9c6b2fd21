#pragma once

// Shared graph builders for the test suites.  Random G(n,p) graphs almost
// always admit a max-degree-4 spanning tree, which collapses the hierarchy to
// a single level with empty boundary sets.  The hub graph below forces a
// non-trivial hierarchy: each hub carries `pend` private pendant leaves, so
// every spanning tree gives the hub degree >= pend, and for pend >= 5 the hub
// must land in the first separator set.  The cycle bodies then survive as
// level-0 components whose boundary is the (large) set of attached hubs.

#include <algorithm>
#include <utility>
#include <vector>

#include "ftcl/graph.hpp"
#include "ftcl/rng.hpp"

namespace ftcl::testing {

struct HubGraph {
    Graph g;
    std::vector<Vertex> hubs;
    std::vector<std::vector<Vertex>> cycle_verts;  // one body cycle per entry
};

// q hubs, each with `pend` pendant leaves; `cycles` body cycles of `k`
// vertices each.  The first cycle attaches (by one edge per hub) to every
// hub, which keeps the graph connected; later cycles attach to a random
// ~85% subset.  Attachment points are spread round-robin so no cycle vertex
// hosts more than a few hubs.
inline HubGraph make_hub_graph(int q, int pend, int cycles, int k,
                               std::uint64_t seed) {
    HubGraph out;
    Rng rng(mix64(seed ^ 0x4b53c0deULL));
    std::vector<std::pair<Vertex, Vertex>> es;
    Vertex next = 0;
    for (int h = 0; h < q; ++h) {
        Vertex hub = next++;
        out.hubs.push_back(hub);
        for (int p = 0; p < pend; ++p) es.emplace_back(hub, next++);
    }
    for (int c = 0; c < cycles; ++c) {
        std::vector<Vertex> cyc(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) cyc[static_cast<std::size_t>(i)] = next++;
        for (int i = 0; i < k; ++i)
            es.emplace_back(cyc[static_cast<std::size_t>(i)],
                            cyc[static_cast<std::size_t>((i + 1) % k)]);
        std::vector<Vertex> picked = out.hubs;
        if (c > 0) {
            for (std::size_t i = picked.size(); i > 1; --i)
                std::swap(picked[i - 1], picked[rng.below(i)]);
            picked.resize(std::max<std::size_t>(1, picked.size() * 17 / 20));
            std::sort(picked.begin(), picked.end());
        }
        for (std::size_t i = 0; i < picked.size(); ++i)
            es.emplace_back(picked[i],
                            cyc[i % static_cast<std::size_t>(k)]);
        out.cycle_verts.push_back(std::move(cyc));
    }
    out.g = Graph::from_edges(next, es);
    return out;
}

}  // namespace ftcl::testing
