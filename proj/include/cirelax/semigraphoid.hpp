#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

inline constexpr int kMaxGraphoidVariables = 5;

namespace detail {

/// Ordered triples (X;Y|Z) coded in base 4, one digit per variable:
/// 0 absent, 1 in X, 2 in Y, 3 in Z.
struct TripleCode {
  static unsigned encode(VarSet x, VarSet y, VarSet z) {
    unsigned code = 0, place = 1;
    for (int i = 0; i < kMaxGraphoidVariables; ++i, place *= 4) {
      if (x.contains(i)) code += place;
      else if (y.contains(i)) code += 2 * place;
      else if (z.contains(i)) code += 3 * place;
    }
    return code;
  }
  static void decode(unsigned code, VarSet& x, VarSet& y, VarSet& z) {
    x = y = z = VarSet{};
    for (int i = 0; code != 0; ++i, code /= 4) {
      switch (code % 4) {
        case 1: x = x.with(i); break;
        case 2: y = y.with(i); break;
        case 3: z = z.with(i); break;
        default: break;
      }
    }
  }
};

}  // namespace detail

/// Least set containing Σ and closed under the semigraphoid axioms:
///   symmetry      (X;Y|Z) -> (Y;X|Z)
///   decomposition (X;YW|Z) -> (X;Y|Z)
///   weak union    (X;YW|Z) -> (X;Y|ZW)
///   contraction   (X;Y|Z) and (X;W|ZY) -> (X;YW|Z)
/// Triples are returned in canonical orientation.
inline std::set<CITriple> semigraphoid_closure(const CISet& sigma, int n) {
  if (n < 0 || n > kMaxGraphoidVariables)
    throw std::length_error("semigraphoid closure supports at most " + std::to_string(kMaxGraphoidVariables) + " variables");
  if (!VarSet::full(n).contains(sigma.vars())) throw std::invalid_argument("triple outside the universe");

  using detail::TripleCode;
  std::vector<char> member(1u << (2 * kMaxGraphoidVariables), 0);
  std::vector<unsigned> work;
  auto add = [&](VarSet x, VarSet y, VarSet z) {
    if (x.empty() || y.empty()) return;
    const unsigned c = TripleCode::encode(x, y, z);
    if (!member[c]) {
      member[c] = 1;
      work.push_back(c);
    }
  };
  auto has = [&](VarSet x, VarSet y, VarSet z) { return member[TripleCode::encode(x, y, z)] != 0; };

  for (const auto& t : sigma) add(t.x(), t.y(), t.z());
  const VarSet all = VarSet::full(n);
  while (!work.empty()) {
    const unsigned code = work.back();
    work.pop_back();
    VarSet x, y, z;
    TripleCode::decode(code, x, y, z);

    add(y, x, z);
    for_each_subset(y, [&](VarSet part) {
      if (part.empty() || part == y) return;
      add(x, part, z);
      add(x, y - part, z | part);
    });
    // (x;y|z) as the first premise, looking for (x;w|zy).
    for_each_subset(all - (x | y | z), [&](VarSet w) {
      if (!w.empty() && has(x, w, z | y)) add(x, y | w, z);
    });
    // (x;y|z) as the second premise (X;W|Z'Y') with W = y, Y' ⊆ z.
    for_each_subset(z, [&](VarSet first) {
      if (!first.empty() && has(x, first, z - first)) add(x, y | first, z - first);
    });
  }

  std::set<CITriple> out;
  for (unsigned c = 0; c < member.size(); ++c) {
    if (!member[c]) continue;
    VarSet x, y, z;
    TripleCode::decode(c, x, y, z);
    out.insert(CITriple(x, y, z));
  }
  return out;
}

}  // namespace cirelax
