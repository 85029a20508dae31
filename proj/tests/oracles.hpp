#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls the library routine it is meant to check.

#include <cmath>
#include <functional>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/dag.hpp"
#include "cirelax/distribution.hpp"
#include "cirelax/random.hpp"
#include "cirelax/varset.hpp"

namespace cirelax::testing {

/// d-separation straight from the path definition: enumerate every simple
/// undirected path from x to y and check whether z blocks it.
inline bool d_separated_by_paths(const Dag& dag, VarSet x, VarSet y, VarSet z) {
  const int n = dag.size();
  std::vector<VarSet> descendants(n);
  for (int v = 0; v < n; ++v) {
    VarSet seen = VarSet::single(v);
    std::vector<int> stack{v};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int c : dag.children(u).indices())
        if (!seen.contains(c)) {
          seen = seen.with(c);
          stack.push_back(c);
        }
    }
    descendants[v] = seen;
  }
  auto edge = [&](int a, int b) { return dag.parents(b).contains(a); };  // a -> b

  bool connected = false;
  std::vector<int> path;
  std::function<void(int, VarSet)> walk = [&](int v, VarSet visited) {
    if (connected) return;
    if (y.contains(v) && path.size() >= 2) {
      // check blocking along the path
      for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const int prev = path[i - 1], mid = path[i], next = path[i + 1];
        const bool collider = edge(prev, mid) && edge(next, mid);
        if (collider) {
          if (!descendants[mid].intersects(z)) return;
        } else if (z.contains(mid)) {
          return;
        }
      }
      connected = true;
      return;
    }
    if (y.contains(v)) return;
    for (int w = 0; w < n; ++w) {
      if (visited.contains(w) || !(edge(v, w) || edge(w, v))) continue;
      if (x.contains(w)) continue;
      path.push_back(w);
      walk(w, visited.with(w));
      path.pop_back();
    }
  };
  for (int s : x.indices()) {
    path = {s};
    walk(s, VarSet::single(s));
    if (connected) return false;
  }
  return true;
}

/// I(X;Y|Z) in bits as Σ p(xyz) log p(xyz)p(z) / (p(xz)p(yz)), computed from
/// raw outcome probabilities without entropies.
inline double cmi_direct(const JointDistribution<double>& d, VarSet x, VarSet y, VarSet z) {
  auto key = [&](std::size_t o, VarSet s) {
    std::size_t k = 0, mult = 1;
    for (int v : s.indices()) {
      k += mult * static_cast<std::size_t>(d.value(o, v));
      mult *= static_cast<std::size_t>(d.domain_sizes()[v]);
    }
    return k;
  };
  auto table = [&](VarSet s) {
    std::size_t size = 1;
    for (int v : s.indices()) size *= static_cast<std::size_t>(d.domain_sizes()[v]);
    std::vector<double> t(size, 0.0);
    for (std::size_t o = 0; o < d.outcomes(); ++o) t[key(o, s)] += d.probs()[o];
    return t;
  };
  const auto pxyz = table(x | y | z), pxz = table(x | z), pyz = table(y | z), pz = table(z);
  double total = 0.0;
  std::vector<bool> done(pxyz.size(), false);
  for (std::size_t o = 0; o < d.outcomes(); ++o) {
    const std::size_t k = key(o, x | y | z);
    if (done[k]) continue;
    done[k] = true;
    const double p = pxyz[k];
    if (p <= 0) continue;
    total += p * std::log2(p * pz[key(o, z)] / (pxz[key(o, x | z)] * pyz[key(o, y | z)]));
  }
  return total;
}

inline double cmi_direct(const JointDistribution<double>& d, const CITriple& t) {
  return cmi_direct(d, t.x(), t.y(), t.z());
}

/// Random DAG: random topological permutation, each forward edge with
/// probability p.
inline Dag random_dag(int n, Rng& rng, double p = 0.4) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.chance(p)) edges.emplace_back(perm[i], perm[j]);
  return Dag::from_edges(Universe::numbered(n), edges);
}

/// Every labelled DAG on n nodes (each pair absent, i->j or j->i; cyclic
/// ones skipped).
inline std::vector<Dag> all_dags(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < pairs.size(); ++k) combos *= 3;
  std::vector<Dag> out;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<std::pair<int, int>> edges;
    std::size_t c = code;
    for (auto [i, j] : pairs) {
      const auto digit = c % 3;
      c /= 3;
      if (digit == 1) edges.emplace_back(i, j);
      if (digit == 2) edges.emplace_back(j, i);
    }
    try {
      out.push_back(Dag::from_edges(Universe::numbered(n), edges));
    } catch (const std::invalid_argument&) {
      // cyclic
    }
  }
  return out;
}

/// (x;y|z) with singleton x < y and |z| <= max_z.
inline std::vector<CITriple> elemental_queries(int n, int max_z) {
  std::vector<CITriple> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for_each_subset(VarSet::full(n).without(i).without(j), [&](VarSet z) {
        if (z.size() <= max_z) out.emplace_back(VarSet::single(i), VarSet::single(j), z);
      });
  return out;
}

/// Every canonical triple over n variables.
inline std::vector<CITriple> all_triples(int n) {
  std::vector<CITriple> out;
  std::size_t combos = 1;
  for (int i = 0; i < n; ++i) combos *= 4;
  for (std::size_t code = 0; code < combos; ++code) {
    VarSet x, y, z;
    std::size_t c = code;
    for (int i = 0; i < n; ++i, c /= 4) {
      if (c % 4 == 1) x = x.with(i);
      if (c % 4 == 2) y = y.with(i);
      if (c % 4 == 3) z = z.with(i);
    }
    if (x.empty() || y.empty() || y.lowest() < x.lowest()) continue;
    out.emplace_back(x, y, z);
  }
  return out;
}

/// A uniformly chosen triple over n variables.
inline CITriple random_triple(int n, Rng& rng) {
  while (true) {
    VarSet x, y, z;
    for (int i = 0; i < n; ++i) {
      switch (rng.below(4)) {
        case 1: x = x.with(i); break;
        case 2: y = y.with(i); break;
        case 3: z = z.with(i); break;
        default: break;
      }
    }
    if (!x.empty() && !y.empty()) return CITriple(x, y, z);
  }
}

}  // namespace cirelax::testing
