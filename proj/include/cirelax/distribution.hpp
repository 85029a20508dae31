#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

inline constexpr std::size_t kMaxOutcomes = std::size_t{1} << 20;

/// An explicit joint probability table over finite domains.
///
/// Outcomes are indexed in mixed radix with variable 0 varying fastest.
/// T is Rational (exact mode) or double.
template <typename T>
class JointDistribution {
 public:
  using value_type = T;

  JointDistribution(std::vector<int> domain_sizes, std::vector<T> probs)
      : domain_sizes_(std::move(domain_sizes)), probs_(std::move(probs)) {
    if (domain_sizes_.empty()) throw std::invalid_argument("distribution needs at least one variable");
    if (static_cast<int>(domain_sizes_.size()) > kMaxVariables) throw std::length_error("too many variables");
    std::size_t outcomes = 1;
    strides_.reserve(domain_sizes_.size());
    for (int card : domain_sizes_) {
      if (card < 1) throw std::invalid_argument("domain sizes must be positive");
      strides_.push_back(outcomes);
      outcomes *= static_cast<std::size_t>(card);
      if (outcomes > kMaxOutcomes) throw std::length_error("outcome count exceeds 2^20");
    }
    if (probs_.size() != outcomes) throw std::invalid_argument("probability table size does not match domains");
    T total(0);
    for (const auto& p : probs_) {
      if (p < T(0)) throw std::invalid_argument("negative probability");
      total += p;
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("probabilities do not sum to 1");
    } else {
      if (total != T(1)) throw std::invalid_argument("probabilities do not sum to exactly 1");
    }
  }

  int size() const { return static_cast<int>(domain_sizes_.size()); }
  const std::vector<int>& domain_sizes() const { return domain_sizes_; }
  const std::vector<T>& probs() const { return probs_; }
  std::size_t outcomes() const { return probs_.size(); }

  /// Value of variable `var` in outcome `index`.
  int value(std::size_t index, int var) const {
    return static_cast<int>((index / strides_[var]) % static_cast<std::size_t>(domain_sizes_[var]));
  }
  std::size_t index_of(const std::vector<int>& values) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < values.size(); ++i) idx += strides_[i] * static_cast<std::size_t>(values[i]);
    return idx;
  }

  /// Marginal probability table over `alpha`, indexed in mixed radix over the
  /// members of alpha in increasing index order.
  std::vector<T> marginal(VarSet alpha) const {
    std::size_t size = 1;
    std::vector<std::pair<int, std::size_t>> layout;
    for (int v : alpha.indices()) {
      if (v >= this->size()) throw std::invalid_argument("variable outside the distribution");
      layout.emplace_back(v, size);
      size *= static_cast<std::size_t>(domain_sizes_[v]);
    }
    std::vector<T> out(size, T(0));
    for (std::size_t o = 0; o < probs_.size(); ++o) {
      std::size_t idx = 0;
      for (auto [v, stride] : layout) idx += stride * static_cast<std::size_t>(value(o, v));
      out[idx] += probs_[o];
    }
    return out;
  }

 private:
  std::vector<int> domain_sizes_;
  std::vector<std::size_t> strides_;
  std::vector<T> probs_;
};

/// H(X_alpha) in bits. Zero-probability outcomes contribute 0.
template <typename T>
double entropy(const JointDistribution<T>& d, VarSet alpha) {
  if (alpha.empty()) return 0.0;
  double h = 0.0;
  for (const auto& p : d.marginal(alpha)) {
    const double q = to_double(p);
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

/// Exact H(X_alpha) when every nonzero marginal probability is a power of
/// 1/2; nullopt otherwise (the value is then irrational).
inline std::optional<Rational> exact_entropy(const JointDistribution<Rational>& d, VarSet alpha) {
  Rational h(0);
  if (alpha.empty()) return h;
  for (const auto& p : d.marginal(alpha)) {
    if (p == 0) continue;
    const auto k = inverse_power_of_two(p);
    if (!k) return std::nullopt;
    h += p * Rational(static_cast<long>(*k));
  }
  return h;
}

/// h(α) = H(X_α) for all 2^n subsets.
template <typename T>
PolymatroidTable<double> entropic_table(const JointDistribution<T>& d) {
  PolymatroidTable<double> h(d.size());
  for (VarSet::Mask a = 1; a < (VarSet::Mask{1} << d.size()); ++a) h.set(VarSet(a), entropy(d, VarSet(a)));
  return h;
}

/// Exact entropic table for dyadic distributions (see exact_entropy).
inline std::optional<PolymatroidTable<Rational>> exact_entropic_table(const JointDistribution<Rational>& d) {
  PolymatroidTable<Rational> h(d.size());
  for (VarSet::Mask a = 1; a < (VarSet::Mask{1} << d.size()); ++a) {
    auto v = exact_entropy(d, VarSet(a));
    if (!v) return std::nullopt;
    h.set(VarSet(a), std::move(*v));
  }
  return h;
}

/// Binary distribution for τ = (A;B|C): every variable except a_1 (the lowest
/// index in A) is a uniform bit independent of the rest, and a_1 is the XOR
/// of the other variables of ABC.
inline JointDistribution<Rational> parity_distribution(int n, const CITriple& tau) {
  if (n < 1 || n > 20) throw std::length_error("parity distributions support 1..20 variables");
  if (!VarSet::full(n).contains(tau.vars())) throw std::invalid_argument("triple outside the universe");
  const int designated = tau.x().lowest();
  const VarSet others = tau.vars().without(designated);
  const std::size_t outcomes = std::size_t{1} << n;
  const Rational mass(1, static_cast<unsigned long>(outcomes >> 1));
  std::vector<Rational> probs(outcomes, Rational(0));
  for (std::size_t o = 0; o < outcomes; ++o) {
    const int parity = std::popcount(static_cast<VarSet::Mask>(o) & others.bits()) & 1;
    const int bit = static_cast<int>((o >> designated) & 1u);
    if (bit == parity) probs[o] = mass;
  }
  return JointDistribution<Rational>(std::vector<int>(static_cast<std::size_t>(n), 2), std::move(probs));
}

}  // namespace cirelax
