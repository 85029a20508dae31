#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

inline constexpr int kMaxAtomVariables = 16;

/// A subset of the 2^n - 1 nonempty atoms of the field generated by
/// m(X_1), ..., m(X_n). An atom is named by the variables it takes in
/// positive form, so atom s is ⋂_{i∈s} m(X_i) ∩ ⋂_{i∉s} m^c(X_i).
class AtomSet {
 public:
  explicit AtomSet(int n) : n_(n) {
    if (n < 0 || n > kMaxAtomVariables)
      throw std::length_error("atom sets support at most " + std::to_string(kMaxAtomVariables) + " variables");
    words_.assign(((std::size_t{1} << n) + 63) / 64, 0);
  }

  int variables() const { return n_; }

  void insert(VarSet atom) {
    if (atom.empty()) throw std::invalid_argument("the empty atom is not a member of the field");
    words_[atom.bits() / 64] |= std::uint64_t{1} << (atom.bits() % 64);
  }
  bool contains(VarSet atom) const { return (words_[atom.bits() / 64] >> (atom.bits() % 64)) & 1u; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const { return count() == 0; }

  AtomSet& operator|=(const AtomSet& o) {
    check_same(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  AtomSet operator|(const AtomSet& o) const { AtomSet r = *this; return r |= o; }
  AtomSet operator&(const AtomSet& o) const {
    check_same(o);
    AtomSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  AtomSet operator-(const AtomSet& o) const {
    check_same(o);
    AtomSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }

  bool includes(const AtomSet& o) const { return (o - *this).empty(); }
  bool disjoint(const AtomSet& o) const { return (*this & o).empty(); }

  /// Members in increasing mask order.
  std::vector<VarSet> atoms() const {
    std::vector<VarSet> out;
    for (VarSet::Mask s = 1; s < (VarSet::Mask{1} << n_); ++s)
      if (contains(VarSet(s))) out.emplace_back(s);
    return out;
  }
  std::optional<VarSet> smallest() const {
    for (VarSet::Mask s = 1; s < (VarSet::Mask{1} << n_); ++s)
      if (contains(VarSet(s))) return VarSet(s);
    return std::nullopt;
  }

  bool operator==(const AtomSet&) const = default;

 private:
  void check_same(const AtomSet& o) const {
    if (o.n_ != n_) throw std::invalid_argument("atom sets over different universes");
  }

  int n_;
  std::vector<std::uint64_t> words_;
};

/// m(X;Y|Z): atoms meeting X and Y and avoiding Z.
inline AtomSet atoms_of(const CITriple& t, int n) {
  if (!VarSet::full(n).contains(t.vars())) throw std::invalid_argument("triple mentions variables outside the universe");
  AtomSet out(n);
  for (VarSet::Mask s = 1; s < (VarSet::Mask{1} << n); ++s) {
    const VarSet atom(s);
    if (atom.intersects(t.x()) && atom.intersects(t.y()) && !atom.intersects(t.z())) out.insert(atom);
  }
  return out;
}

/// m(Σ): union of the member images.
inline AtomSet atoms_of_set(const CISet& sigma, int n) {
  AtomSet out(n);
  for (const auto& s : sigma) out |= atoms_of(s, n);
  return out;
}

/// Outcome of the atom-inclusion test. When not implied, `witness` is the
/// smallest atom in m(τ) \ m(Σ).
struct Verdict {
  bool implied = false;
  std::optional<VarSet> witness;
};

/// Exact implication over the positive polymatroids: holds iff m(Σ) ⊇ m(τ).
inline Verdict implies_positive(const CISet& sigma, const CITriple& tau, int n) {
  if (!VarSet::full(n).contains(sigma.vars() | tau.vars()))
    throw std::invalid_argument("antecedents and consequent must share the universe");
  const AtomSet missing = atoms_of(tau, n) - atoms_of_set(sigma, n);
  if (auto w = missing.smallest()) return {false, w};
  return {true, std::nullopt};
}

/// Drops every antecedent whose image is disjoint from m(τ). Requires that Σ
/// implies τ; the result still does.
inline CISet reduce_antecedents(const CISet& sigma, const CITriple& tau, int n) {
  if (!implies_positive(sigma, tau, n).implied)
    throw std::invalid_argument("reduce_antecedents requires an implied consequent");
  const AtomSet target = atoms_of(tau, n);
  CISet kept;
  for (const auto& s : sigma)
    if (!atoms_of(s, n).disjoint(target)) kept.add(s);
  return kept;
}

/// The positive polymatroid whose I-measure puts unit mass on one atom:
/// h(α) = 1 if α meets the atom, else 0. I_h(t) = 1 iff the atom is in m(t).
inline PolymatroidTable<Rational> single_atom_polymatroid(VarSet atom, int n) {
  if (atom.empty()) throw std::invalid_argument("atom must be nonempty");
  if (!VarSet::full(n).contains(atom)) throw std::invalid_argument("atom outside the universe");
  PolymatroidTable<Rational> h(n);
  for (VarSet::Mask a = 1; a < (VarSet::Mask{1} << n); ++a)
    if (VarSet(a).intersects(atom)) h.set(VarSet(a), Rational(1));
  return h;
}

}  // namespace cirelax
