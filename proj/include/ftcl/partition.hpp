#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ftcl/errors.hpp"
#include "ftcl/hierarchy.hpp"
#include "ftcl/rng.hpp"

namespace ftcl {

/// Color assignment phi : V -> {1..f+1}. For any fault set of size <= f some
/// color class is fault-free (pigeonhole); the derandomized construction
/// additionally guarantees that large neighbor sets see every color.
struct ColorPartition {
  int f = 1;
  std::vector<int> color;  // phi(v) in [1, f+1]; size n

  std::vector<std::vector<Vertex>> parts() const {
    std::vector<std::vector<Vertex>> ps(f + 1);
    for (Vertex v = 0; v < static_cast<int>(color.size()); ++v)
      ps[color[v] - 1].push_back(v);
    return ps;
  }
};

inline ColorPartition random_partition(int n, int f, uint64_t seed) {
  if (f < 1) throw InvalidQuery("partition: f must be >= 1");
  ColorPartition p;
  p.f = f;
  p.color.resize(n);
  Rng rng(mix64(seed ^ 0xc01055eedull));
  for (Vertex v = 0; v < n; ++v) p.color[v] = 1 + static_cast<int>(rng.below(f + 1));
  return p;
}

/// Probability that some of y designated colors is still missing after x more
/// vertices are colored uniformly from f+1 colors (inclusion-exclusion).
inline double psi(long long x, int y, int f) {
  double total = 0.0;
  double binom = 1.0;  // C(y, k), updated incrementally
  for (int k = 1; k <= y; ++k) {
    binom = binom * (y - k + 1) / k;
    double term = binom * std::pow(1.0 - static_cast<double>(k) / (f + 1), static_cast<double>(x));
    total += (k % 2 == 1) ? term : -term;
  }
  return std::min(1.0, std::max(0.0, total));
}

/// Deterministic coloring by the method of conditional expectations: every
/// hierarchy component whose neighbor set has at least 3(f+1) ln n vertices is
/// guaranteed to see all f+1 colors in it (neighbor sets are truncated to
/// exactly that size while optimizing, which only strengthens the guarantee).
inline ColorPartition derandomized_partition(const std::vector<BaseHierarchy>& hs, int n, int f) {
  if (f < 1) throw InvalidQuery("partition: f must be >= 1");
  const double thresh = 3.0 * (f + 1) * std::log(static_cast<double>(std::max(2, n)));

  // Qualifying (truncated) neighbor sets, and per-vertex membership lists.
  std::vector<std::vector<Vertex>> sets;
  for (const auto& h : hs)
    for (const auto& c : h.comps)
      if (static_cast<double>(c.nbrs.size()) >= thresh) {
        std::vector<Vertex> tr = c.nbrs;
        size_t cap = static_cast<size_t>(std::ceil(thresh));
        if (tr.size() > cap) tr.resize(cap);  // nbrs sorted: keep smallest ids
        sets.push_back(std::move(tr));
      }
  std::vector<std::vector<size_t>> sets_of(n);
  std::vector<long long> uncolored(sets.size());
  std::vector<std::vector<char>> missing(sets.size(), std::vector<char>(f + 2, 1));
  std::vector<int> nmissing(sets.size(), f + 1);
  for (size_t i = 0; i < sets.size(); ++i) {
    uncolored[i] = static_cast<long long>(sets[i].size());
    for (Vertex v : sets[i]) sets_of[v].push_back(i);
  }

  ColorPartition p;
  p.f = f;
  p.color.assign(n, 0);
  std::vector<long long> usage(f + 2, 0);  // balance tie-break
  for (Vertex v = 0; v < n; ++v) {
    int best = 1;
    if (!sets_of[v].empty()) {
      // E[#sets missing a color] conditioned on phi(v) = c, minimized over c.
      double bestval = 0;
      for (int c = 1; c <= f + 1; ++c) {
        double val = 0;
        for (size_t i : sets_of[v]) {
          int y = nmissing[i] - (missing[i][c] ? 1 : 0);
          val += psi(uncolored[i] - 1, y, f);
        }
        if (c == 1 || val < bestval || (val == bestval && usage[c] < usage[best])) {
          bestval = val;
          best = c;
        }
      }
    } else {
      // Unconstrained vertex: spread colors evenly, deterministically.
      for (int c = 2; c <= f + 1; ++c)
        if (usage[c] < usage[best]) best = c;
    }
    p.color[v] = best;
    ++usage[best];
    for (size_t i : sets_of[v]) {
      --uncolored[i];
      if (missing[i][best]) {
        missing[i][best] = 0;
        --nmissing[i];
      }
    }
  }

  // The conditional-expectation invariant guarantees success; verify anyway.
  for (size_t i = 0; i < sets.size(); ++i)
    if (nmissing[i] != 0) throw ConstructionError("partition: color missing from a large neighbor set");
  return p;
}

/// True iff every component of h whose (untruncated) neighbor set is large
/// enough sees all f+1 colors in it.
inline bool partition_hits_all(const BaseHierarchy& h, const ColorPartition& p, int n) {
  const double thresh = 3.0 * (p.f + 1) * std::log(static_cast<double>(std::max(2, n)));
  for (const auto& c : h.comps) {
    if (static_cast<double>(c.nbrs.size()) < thresh) continue;
    std::vector<char> seen(p.f + 2, 0);
    for (Vertex v : c.nbrs) seen[p.color[v]] = 1;
    for (int i = 1; i <= p.f + 1; ++i)
      if (!seen[i]) return false;
  }
  return true;
}

}  // namespace ftcl
