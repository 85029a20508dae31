#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

/// A directed acyclic graph over a named universe. Only structure is stored.
class Dag {
 public:
  Dag(Universe universe, std::vector<VarSet> parents)
      : universe_(std::move(universe)), parents_(std::move(parents)) {
    const int n = universe_.size();
    if (static_cast<int>(parents_.size()) != n) throw std::invalid_argument("one parent set per variable required");
    for (int i = 0; i < n; ++i) {
      if (!VarSet::full(n).contains(parents_[i])) throw std::invalid_argument("parent index out of range");
      if (parents_[i].contains(i)) throw std::invalid_argument("self loop on '" + universe_.name(i) + "'");
    }
    if (static_cast<int>(kahn_order().size()) != n) throw std::invalid_argument("graph has a directed cycle");
  }

  /// Builds from (parent, child) index pairs.
  static Dag from_edges(Universe universe, const std::vector<std::pair<int, int>>& edges) {
    std::vector<VarSet> parents(universe.size());
    for (auto [p, c] : edges) {
      if (p < 0 || c < 0 || p >= universe.size() || c >= universe.size())
        throw std::invalid_argument("edge endpoint out of range");
      parents[c] = parents[c].with(p);
    }
    return Dag(std::move(universe), std::move(parents));
  }

  int size() const { return universe_.size(); }
  const Universe& universe() const { return universe_; }
  VarSet parents(int node) const { return parents_.at(node); }

  VarSet children(int node) const {
    VarSet out;
    for (int c = 0; c < size(); ++c)
      if (parents_[c].contains(node)) out = out.with(c);
    return out;
  }

  /// `set` together with all of its ancestors.
  VarSet ancestral_closure(VarSet set) const {
    VarSet closed = set;
    std::vector<int> stack = set.indices();
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int p : parents_[v].indices()) {
        if (!closed.contains(p)) {
          closed = closed.with(p);
          stack.push_back(p);
        }
      }
    }
    return closed;
  }

  /// Kahn's algorithm, always releasing the smallest available index first.
  std::vector<int> topological_order() const { return kahn_order(); }

  bool is_topological(const std::vector<int>& order) const {
    if (static_cast<int>(order.size()) != size()) return false;
    VarSet seen;
    for (int v : order) {
      if (v < 0 || v >= size() || seen.contains(v)) return false;
      if (!seen.contains(parents_[v])) return false;
      seen = seen.with(v);
    }
    return true;
  }

 private:
  std::vector<int> kahn_order() const {
    const int n = universe_.size();
    std::vector<int> order;
    VarSet placed;
    while (static_cast<int>(order.size()) < n) {
      int next = -1;
      for (int v = 0; v < n && next < 0; ++v)
        if (!placed.contains(v) && placed.contains(parents_[v])) next = v;
      if (next < 0) break;
      order.push_back(next);
      placed = placed.with(next);
    }
    return order;
  }

  Universe universe_;
  std::vector<VarSet> parents_;
};

/// The triples (X_i; U_i \ pa(i) | pa(i)) where U_i holds the variables before
/// X_i in `order`. Triples whose middle set is empty are dropped.
inline CISet recursive_basis(const Dag& dag, const std::vector<int>& order) {
  if (!dag.is_topological(order)) throw std::invalid_argument("order is not a topological order of the DAG");
  CISet basis;
  VarSet earlier;
  for (int v : order) {
    const VarSet rest = earlier - dag.parents(v);
    if (!rest.empty()) basis.add(CITriple(VarSet::single(v), rest, dag.parents(v)));
    earlier = earlier.with(v);
  }
  return basis;
}

inline CISet recursive_basis(const Dag& dag) { return recursive_basis(dag, dag.topological_order()); }

/// d-separation of x and y given z, decided on the moral graph of the
/// ancestral set of x, y and z: separated iff no path from x to y avoids z.
inline bool d_separated(const Dag& dag, VarSet x, VarSet y, VarSet z) {
  if (x.empty() || y.empty()) throw std::invalid_argument("d-separation needs nonempty X and Y");
  if (x.intersects(y) || x.intersects(z) || y.intersects(z))
    throw std::invalid_argument("d-separation sets must be pairwise disjoint");
  const int n = dag.size();
  if (!VarSet::full(n).contains(x | y | z)) throw std::invalid_argument("variable out of range");

  const VarSet relevant = dag.ancestral_closure(x | y | z);
  std::vector<VarSet> adjacent(n);
  for (int v : relevant.indices()) {
    const VarSet pa = dag.parents(v);
    for (int p : pa.indices()) {
      adjacent[v] = adjacent[v].with(p);
      adjacent[p] = adjacent[p].with(v);
    }
    // marry co-parents
    for (int p : pa.indices()) adjacent[p] |= pa.without(p);
  }

  VarSet reached = x;
  std::deque<int> frontier;
  for (int v : x.indices()) frontier.push_back(v);
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop_front();
    const VarSet next = (adjacent[v] & relevant) - z - reached;
    if (next.intersects(y)) return false;
    for (int w : next.indices()) frontier.push_back(w);
    reached |= next;
  }
  return true;
}

inline bool d_separated(const Dag& dag, const CITriple& t) { return d_separated(dag, t.x(), t.y(), t.z()); }

}  // namespace cirelax
