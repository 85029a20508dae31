#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cirelax/text.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

/// A conditional-independence statement (X;Y|Z) over pairwise-disjoint sets.
///
/// X and Y are nonempty. The pair is stored in canonical orientation: the side
/// holding the smallest variable index comes first, so (X;Y|Z) and (Y;X|Z)
/// compare equal.
class CITriple {
 public:
  CITriple(VarSet x, VarSet y, VarSet z = {}) : x_(x), y_(y), z_(z) {
    if (x.empty() || y.empty()) throw std::invalid_argument("CI triple needs nonempty X and Y");
    if (x.intersects(y) || x.intersects(z) || y.intersects(z))
      throw std::invalid_argument("CI triple sets must be pairwise disjoint");
    if (y.lowest() < x.lowest()) std::swap(x_, y_);
  }

  VarSet x() const { return x_; }
  VarSet y() const { return y_; }
  VarSet z() const { return z_; }
  /// All variables mentioned.
  VarSet vars() const { return x_ | y_ | z_; }
  bool elemental() const { return x_.size() == 1 && y_.size() == 1; }

  auto operator<=>(const CITriple&) const = default;

 private:
  VarSet x_;
  VarSet y_;
  VarSet z_;
};

/// Ordered, duplicate-free collection of triples.
class CISet {
 public:
  CISet() = default;
  CISet(std::initializer_list<CITriple> triples) {
    for (const auto& t : triples) add(t);
  }
  explicit CISet(const std::vector<CITriple>& triples) {
    for (const auto& t : triples) add(t);
  }

  /// Returns false if the triple was already present.
  bool add(const CITriple& t) {
    if (contains(t)) return false;
    triples_.push_back(t);
    return true;
  }
  bool contains(const CITriple& t) const {
    return std::find(triples_.begin(), triples_.end(), t) != triples_.end();
  }

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const CITriple& operator[](std::size_t i) const { return triples_[i]; }
  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }
  const std::vector<CITriple>& triples() const { return triples_; }

  /// All variables mentioned by any member.
  VarSet vars() const {
    VarSet out;
    for (const auto& t : triples_) out |= t.vars();
    return out;
  }

  bool operator==(const CISet&) const = default;

 private:
  std::vector<CITriple> triples_;
};

struct Classification {
  bool saturated = false;
  bool marginal = false;
  bool general() const { return !saturated && !marginal; }
};

/// Saturated when X, Y and Z together cover all n variables; marginal when Z
/// is empty. Both may hold.
inline Classification classify(const CITriple& t, int n) {
  return {t.vars() == VarSet::full(n), t.z().empty()};
}

inline std::string to_string(const Classification& c) {
  if (c.general()) return "general";
  if (c.saturated && c.marginal) return "saturated,marginal";
  return c.saturated ? "saturated" : "marginal";
}

/// Splits t into elemental triples via the chain rule. For y_j in index order
/// and then x_i in index order, emits (x_i; y_j | Z y_<j x_<i). The CMI of the
/// parts sums to the CMI of t under every polymatroid.
inline std::vector<CITriple> elemental_decompose(const CITriple& t) {
  std::vector<CITriple> parts;
  VarSet y_done;
  for (int yj : t.y().indices()) {
    VarSet x_done;
    for (int xi : t.x().indices()) {
      parts.emplace_back(VarSet::single(xi), VarSet::single(yj), t.z() | y_done | x_done);
      x_done = x_done.with(xi);
    }
    y_done = y_done.with(yj);
  }
  return parts;
}

/// `I(A,B;C|D)`; the bar is omitted when Z is empty.
inline std::string to_string(const CITriple& t, const Universe& u) {
  std::string out = "I(" + u.join(t.x()) + ";" + u.join(t.y());
  if (!t.z().empty()) out += "|" + u.join(t.z());
  return out + ")";
}

namespace detail {

using NameResolver = std::function<int(const std::string&)>;

inline VarSet parse_list(Cursor& in, const NameResolver& resolve, bool allow_empty) {
  VarSet out;
  const char next = in.peek();
  if (allow_empty && (next == ')' || next == '\0')) return out;
  while (true) {
    const int column = in.column();
    const std::string name = in.name();
    const int id = resolve(name);
    if (id < 0) throw ParseError(0, column, "unknown variable '" + name + "'");
    if (out.contains(id)) throw ParseError(0, column, "variable '" + name + "' listed twice");
    out = out.with(id);
    if (!in.accept(',')) break;
  }
  return out;
}

inline CITriple parse_triple_with(std::string_view text, const NameResolver& resolve) {
  Cursor in(text, 0);
  if (in.name() != "I") in.fail("a CI statement starts with 'I('");
  in.expect('(');
  const VarSet x = parse_list(in, resolve, false);
  in.expect(';');
  const VarSet y = parse_list(in, resolve, false);
  VarSet z;
  if (in.accept('|')) z = parse_list(in, resolve, true);
  in.expect(')');
  if (!in.at_end()) in.fail("unexpected trailing input");
  if (x.intersects(y) || x.intersects(z) || y.intersects(z))
    throw ParseError(0, 1, "X, Y and Z must be pairwise disjoint");
  return CITriple(x, y, z);
}

}  // namespace detail

/// Parses `I(list;list|list)` (the `|list` part is optional) against a fixed
/// universe. Names are comma separated; unknown names are rejected.
inline CITriple parse_ci_triple(std::string_view text, const Universe& universe) {
  return detail::parse_triple_with(text, [&](const std::string& name) { return universe.find(name); });
}

/// Same grammar, but unseen names are appended to the universe.
inline CITriple parse_ci_triple_extending(std::string_view text, Universe& universe) {
  return detail::parse_triple_with(text, [&](const std::string& name) { return universe.add(name); });
}

/// An entropy-style query: either `H(list|list)` or a CI statement.
struct InformationTerm {
  enum class Kind { Entropy, MutualInformation } kind;
  VarSet x;
  VarSet y;  // unused for Entropy
  VarSet z;
};

inline InformationTerm parse_information_term(std::string_view text, const Universe& universe) {
  detail::Cursor probe(text, 0);
  if (probe.peek() == 'I') {
    const CITriple t = parse_ci_triple(text, universe);
    return {InformationTerm::Kind::MutualInformation, t.x(), t.y(), t.z()};
  }
  const detail::NameResolver resolve = [&](const std::string& name) { return universe.find(name); };
  detail::Cursor in(text, 0);
  if (in.name() != "H") in.fail("expected 'H(' or 'I('");
  in.expect('(');
  const VarSet x = detail::parse_list(in, resolve, false);
  VarSet z;
  if (in.accept('|')) z = detail::parse_list(in, resolve, true);
  in.expect(')');
  if (!in.at_end()) in.fail("unexpected trailing input");
  return {InformationTerm::Kind::Entropy, x, {}, z};
}

}  // namespace cirelax
