#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

template <typename T>
inline T default_tolerance() {
  if constexpr (std::is_floating_point_v<T>) return T(1e-9);
  else return T(0);
}

/// A set function h: 2^[n] -> T, one value per subset mask, with h(∅) = 0.
template <typename T>
class PolymatroidTable {
 public:
  using value_type = T;

  explicit PolymatroidTable(int n) : n_(n), values_(std::size_t{1} << check_n(n), T(0)) {}
  PolymatroidTable(int n, std::vector<T> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != (std::size_t{1} << check_n(n))) throw std::invalid_argument("table needs 2^n entries");
    if (values_[0] != T(0)) throw std::invalid_argument("h(empty set) must be 0");
  }

  int size() const { return n_; }
  const T& operator[](VarSet s) const { return values_[s.bits()]; }
  const T& at(VarSet s) const { return values_.at(s.bits()); }
  void set(VarSet s, T value) {
    if (s.empty() && value != T(0)) throw std::invalid_argument("h(empty set) must be 0");
    values_.at(s.bits()) = std::move(value);
  }
  const std::vector<T>& values() const { return values_; }

  bool operator==(const PolymatroidTable&) const = default;

 private:
  static int check_n(int n) {
    if (n < 0 || n > 20) throw std::length_error("polymatroid tables support at most 20 variables");
    return n;
  }

  int n_;
  std::vector<T> values_;
};

/// I(x;y|z) = h(xz) + h(yz) - h(xyz) - h(z). Sets need not be disjoint:
/// I(b;b|a) is the conditional entropy h(b|a).
template <typename T>
T cond_mutual_information(const PolymatroidTable<T>& h, VarSet x, VarSet y, VarSet z) {
  return h[x | z] + h[y | z] - h[x | y | z] - h[z];
}

template <typename T>
T cond_mutual_information(const PolymatroidTable<T>& h, const CITriple& t) {
  return cond_mutual_information(h, t.x(), t.y(), t.z());
}

/// h(b|a) = h(ab) - h(a)
template <typename T>
T conditional_entropy(const PolymatroidTable<T>& h, VarSet b, VarSet a) {
  return h[a | b] - h[a];
}

/// h(Σ): the sum of the CMI over all antecedents.
template <typename T>
T measure_of(const PolymatroidTable<T>& h, const CISet& sigma) {
  T total(0);
  for (const auto& s : sigma) total += cond_mutual_information(h, s);
  return total;
}

/// Polymatroid test straight from the definition: h(∅)=0, monotone over all
/// nested pairs, submodular over all pairs. O(4^n).
template <typename T>
bool is_polymatroid_by_definition(const PolymatroidTable<T>& h, T tol = default_tolerance<T>()) {
  const VarSet::Mask full = VarSet::full(h.size()).bits();
  if (h[VarSet{}] != T(0)) return false;
  for (VarSet::Mask a = 0; a <= full; ++a) {
    for (VarSet::Mask b = 0; b <= full; ++b) {
      const VarSet A(a), B(b);
      if (B.contains(A) && h[A] > h[B] + tol) return false;
      if (h[A | B] + h[A & B] > h[A] + h[B] + tol) return false;
    }
  }
  return true;
}

/// Polymatroid test over the elemental Shannon inequalities only:
/// h(Ω) >= h(Ω - i) for each i, and I(i;j|K) >= 0 for i<j, K ⊆ Ω - {i,j}.
template <typename T>
bool satisfies_elemental_inequalities(const PolymatroidTable<T>& h, T tol = default_tolerance<T>()) {
  const int n = h.size();
  const VarSet all = VarSet::full(n);
  if (h[VarSet{}] != T(0)) return false;
  for (int i = 0; i < n; ++i)
    if (h[all] - h[all.without(i)] < -tol) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool ok = true;
      for_each_subset(all.without(i).without(j), [&](VarSet k) {
        if (ok && cond_mutual_information(h, VarSet::single(i), VarSet::single(j), k) < -tol) ok = false;
      });
      if (!ok) return false;
    }
  }
  return true;
}

/// h(∅)=0, monotone and submodular. Uses the elemental inequalities, which
/// generate every Shannon inequality; see is_polymatroid_by_definition for
/// the direct route.
template <typename T>
bool is_polymatroid(const PolymatroidTable<T>& h, T tol = default_tolerance<T>()) {
  return satisfies_elemental_inequalities(h, tol);
}

template <typename T>
PolymatroidTable<double> to_double_table(const PolymatroidTable<T>& h) {
  PolymatroidTable<double> out(h.size());
  for (std::size_t s = 1; s < h.values().size(); ++s)
    out.set(VarSet(static_cast<VarSet::Mask>(s)), to_double(h.values()[s]));
  return out;
}

}  // namespace cirelax
