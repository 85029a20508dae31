#pragma once

#include <stdexcept>
#include <vector>

#include "cirelax/distribution.hpp"
#include "cirelax/imeasure.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

inline constexpr int kMaxMeasureVariables = 10;

/// The I-measure restricted to atoms: one mass per nonempty positive-form
/// subset. Any member of the field is measured by summing its atoms.
template <typename T>
class AtomMeasure {
 public:
  explicit AtomMeasure(int n) : n_(n), mass_(std::size_t{1} << n, T(0)) {}
  AtomMeasure(int n, std::vector<T> mass) : n_(n), mass_(std::move(mass)) {
    if (mass_.size() != (std::size_t{1} << n)) throw std::invalid_argument("atom measure needs 2^n slots");
    mass_[0] = T(0);
  }

  int size() const { return n_; }
  const T& operator[](VarSet atom) const { return mass_[atom.bits()]; }
  void set(VarSet atom, T value) {
    if (atom.empty()) throw std::invalid_argument("the empty atom has no mass");
    mass_.at(atom.bits()) = std::move(value);
  }

  /// Member of Δ_n: every atom carries nonnegative mass.
  bool positive(T tol = default_tolerance<T>()) const {
    for (std::size_t s = 1; s < mass_.size(); ++s)
      if (mass_[s] < -tol) return false;
    return true;
  }

  T measure(const AtomSet& atoms) const {
    if (atoms.variables() != n_) throw std::invalid_argument("atom set over a different universe");
    T total(0);
    for (VarSet a : atoms.atoms()) total += mass_[a.bits()];
    return total;
  }

  const std::vector<T>& masses() const { return mass_; }

 private:
  int n_;
  std::vector<T> mass_;
};

/// Möbius inversion of a set function into atom masses:
/// mass(S) = -Σ_{T⊆S} (-1)^{|S\T|} h([n] \ T).
/// For an entropic h this is the I-measure; sums of masses over atoms that
/// meet α reproduce h(α).
template <typename T>
AtomMeasure<T> atom_measure(const PolymatroidTable<T>& h) {
  const int n = h.size();
  if (n > kMaxMeasureVariables) throw std::length_error("atom measures support at most 10 variables");
  const VarSet::Mask full = VarSet::full(n).bits();
  const std::size_t size = std::size_t{1} << n;
  // g(T) = h(Ω) - h(Ω \ T) sums the masses of atoms contained in T.
  std::vector<T> g(size);
  for (std::size_t t = 0; t < size; ++t) g[t] = h[VarSet(full)] - h[VarSet(full & ~static_cast<VarSet::Mask>(t))];
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < size; ++s)
      if (s & (std::size_t{1} << i)) g[s] -= g[s ^ (std::size_t{1} << i)];
  return AtomMeasure<T>(n, std::move(g));
}

template <typename T>
AtomMeasure<double> atom_measure(const JointDistribution<T>& d) {
  return atom_measure(entropic_table(d));
}

/// h(α) = Σ over atoms s meeting α of mass(s). Masses must be nonnegative,
/// which makes the result a positive polymatroid.
template <typename T>
PolymatroidTable<T> polymatroid_from_atoms(const AtomMeasure<T>& m) {
  if (!m.positive(T(0))) throw std::invalid_argument("atom masses must be nonnegative");
  const int n = m.size();
  const std::size_t size = std::size_t{1} << n;
  const VarSet::Mask full = VarSet::full(n).bits();
  // f(T) = Σ_{s⊆T} mass(s) (zeta transform); h(α) = f(Ω) - f(Ω \ α).
  std::vector<T> f(m.masses());
  for (int i = 0; i < n; ++i)
    for (std::size_t s = 0; s < size; ++s)
      if (s & (std::size_t{1} << i)) f[s] += f[s ^ (std::size_t{1} << i)];
  PolymatroidTable<T> h(n);
  for (VarSet::Mask a = 1; a <= full; ++a) h.set(VarSet(a), f[full] - f[full & ~a]);
  return h;
}

}  // namespace cirelax
