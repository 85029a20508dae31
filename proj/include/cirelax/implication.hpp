#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/dag.hpp"
#include "cirelax/distribution.hpp"
#include "cirelax/imeasure.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/random.hpp"
#include "cirelax/rational.hpp"

namespace cirelax {

enum class RelaxationKind { Recursive, Marginal };

inline std::string to_string(RelaxationKind k) { return k == RelaxationKind::Recursive ? "recursive" : "marginal"; }

/// An exact counterexample: a polymatroid with h(Σ) = 0 and h(τ) = 1.
struct Refutation {
  enum class Kind { SingleAtom, Parity };

  Kind kind = Kind::SingleAtom;
  /// The atom (single-atom) or the variables tied by the parity constraint.
  VarSet support;
  PolymatroidTable<Rational> table{0};
  /// Only for parity refutations.
  std::optional<JointDistribution<Rational>> distribution;
  /// h(τ) under `table`; at least 1.
  Rational tau_measure = 1;
};

/// Chain of antecedents bounding one elemental part of τ: the elemental's
/// CMI is at most the sum of CMIs along the chain.
struct ElementalCover {
  CITriple elemental;
  std::vector<CITriple> chain;
};

struct RelaxationCertificate {
  bool implied = false;
  RelaxationKind kind = RelaxationKind::Recursive;
  /// Present iff implied.
  std::optional<Rational> lambda;
  // recursive evidence
  std::string source;
  // marginal evidence
  std::vector<ElementalCover> covers;
  /// Largest number of elementals that share one antecedent; a per-instance
  /// factor that is never above lambda. Informational only.
  std::optional<Rational> usage_bound;
  // negative verdicts
  std::optional<VarSet> witness_atom;
  std::optional<CITriple> witness_elemental;
  /// d-connecting path, for recursive refutations not caught by atoms.
  std::string witness_path;
  std::optional<Refutation> refutation;
};

namespace detail {

inline void verify_refutation(const Refutation& r, const CISet& sigma, const CITriple& tau) {
  if (!is_polymatroid(r.table)) throw std::logic_error("refutation is not a polymatroid");
  if (measure_of(r.table, sigma) != 0 || cond_mutual_information(r.table, tau) != r.tau_measure || r.tau_measure < 1)
    throw std::logic_error("refutation does not separate antecedents from consequent");
}

/// A binary model where every variable is an XOR of independent fair bits:
/// value(v) is the mask of source bits it sums. Entropies are GF(2) ranks.
struct XorModel {
  std::vector<std::uint32_t> value;
  int sources = 0;
};

inline int gf2_rank(std::vector<std::uint32_t> rows) {
  int rank = 0;
  for (int bit = 31; bit >= 0; --bit) {
    const std::uint32_t mask = std::uint32_t{1} << bit;
    auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](std::uint32_t r) { return (r & mask) != 0; });
    if (pivot == rows.end()) continue;
    std::iter_swap(rows.begin() + rank, pivot);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != static_cast<std::size_t>(rank) && (rows[i] & mask)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

inline PolymatroidTable<Rational> xor_table(const XorModel& m) {
  const int n = static_cast<int>(m.value.size());
  PolymatroidTable<Rational> h(n);
  std::vector<std::uint32_t> rows;
  for (VarSet::Mask s = 1; s < (VarSet::Mask{1} << n); ++s) {
    rows.clear();
    for (int v : VarSet(s).indices()) rows.push_back(m.value[v]);
    h.set(VarSet(s), gf2_rank(rows));
  }
  return h;
}

inline JointDistribution<Rational> xor_distribution(const XorModel& m) {
  const int n = static_cast<int>(m.value.size());
  std::vector<Rational> probs(std::size_t{1} << n, Rational(0));
  const Rational weight(1, 1ul << m.sources);
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << m.sources); ++bits) {
    std::size_t outcome = 0;
    for (int v = 0; v < n; ++v)
      if (std::popcount(m.value[v] & bits) & 1) outcome |= std::size_t{1} << v;
    probs[outcome] += weight;
  }
  return JointDistribution<Rational>(std::vector<int>(n, 2), std::move(probs));
}

/// Model built along a d-connecting path: nodes with no incoming path edge
/// draw a fresh bit, other path nodes XOR their path parents, and each
/// collider outside z is copied down a shortest directed path into z.
inline XorModel path_model(const Dag& dag, const std::vector<int>& path, VarSet z) {
  const int n = dag.size();
  std::vector<VarSet> feeds(n);
  VarSet fresh;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const int v = path[j];
    bool incoming = false;
    for (int k : {static_cast<int>(j) - 1, static_cast<int>(j) + 1}) {
      if (k < 0 || k >= static_cast<int>(path.size())) continue;
      if (dag.parents(v).contains(path[k])) {
        feeds[v] = feeds[v].with(path[k]);
        incoming = true;
      }
    }
    if (!incoming) fresh = fresh.with(v);
  }
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    const int c = path[j];
    if (feeds[c].size() != 2 || z.contains(c)) continue;
    // BFS down from c to the nearest member of z.
    std::vector<int> from(n, -1);
    std::vector<int> queue{c};
    from[c] = c;
    int hit = -1;
    for (std::size_t q = 0; q < queue.size() && hit < 0; ++q)
      for (int w : dag.children(queue[q]).indices()) {
        if (from[w] >= 0) continue;
        from[w] = queue[q];
        if (z.contains(w)) {
          hit = w;
          break;
        }
        queue.push_back(w);
      }
    for (int w = hit; w >= 0 && w != c; w = from[w]) feeds[w] = feeds[w].with(from[w]);
  }
  XorModel m;
  m.value.assign(n, 0);
  for (int v : dag.topological_order()) {
    if (fresh.contains(v)) m.value[v] = std::uint32_t{1} << m.sources++;
    for (int p : feeds[v].indices()) m.value[v] ^= m.value[p];
  }
  return m;
}

/// Simple paths from x to y that z does not block, in lexicographic DFS
/// order, at most `limit` of them.
inline std::vector<std::vector<int>> d_connecting_paths(const Dag& dag, VarSet x, VarSet y, VarSet z,
                                                       std::size_t limit) {
  const int n = dag.size();
  std::vector<VarSet> below(n);
  for (int v : dag.topological_order()) below[v] = VarSet::single(v);
  {
    const auto order = dag.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      for (int c : dag.children(*it).indices()) below[*it] |= below[c];
  }
  auto adjacent = [&](int v) { return dag.parents(v) | dag.children(v); };
  std::vector<std::vector<int>> found;
  std::vector<int> path;
  std::size_t steps = 0;
  auto walk = [&](auto&& self, VarSet visited) -> void {
    if (found.size() >= limit || ++steps > 200000) return;
    const int v = path.back();
    if (path.size() >= 2 && y.contains(v)) {
      found.push_back(path);
      return;
    }
    for (int w : adjacent(v).indices()) {
      if (visited.contains(w) || x.contains(w)) continue;
      if (path.size() >= 2) {
        const int u = path[path.size() - 2];
        const bool collider = dag.parents(v).contains(u) && dag.parents(v).contains(w);
        if (collider ? !below[v].intersects(z) : z.contains(v)) continue;
      }
      path.push_back(w);
      self(self, visited.with(w));
      path.pop_back();
    }
  };
  for (int s : x.indices()) {
    path = {s};
    walk(walk, VarSet::single(s));
  }
  return found;
}

inline std::string path_text(const Dag& dag, const std::vector<int>& path) {
  std::string out = dag.universe().name(path[0]);
  for (std::size_t j = 1; j < path.size(); ++j) {
    out += dag.parents(path[j]).contains(path[j - 1]) ? "->" : "<-";
    out += dag.universe().name(path[j]);
  }
  return out;
}

}  // namespace detail

/// Decides whether the recursive basis of `dag` implies τ, with λ = 1.
///
/// The verdict is d-separation. Atom inclusion on the basis is a necessary
/// condition and is checked on every call; it is not sufficient (for the
/// collider a -> c <- b, positive measures force (a;b|c) from (a;b), while
/// c = a xor b does not). A negative verdict carries the single-atom
/// polymatroid when atom inclusion already fails, and otherwise an XOR model
/// built along a d-connecting path.
inline RelaxationCertificate check_recursive(const Dag& dag, const CITriple& tau) {
  const int n = dag.size();
  if (n > kMaxAtomVariables) throw std::length_error("recursive check supports at most 16 variables");
  const CISet basis = recursive_basis(dag);
  const bool separated = d_separated(dag, tau);
  const Verdict atoms = implies_positive(basis, tau, n);
  if (separated && !atoms.implied)
    throw std::logic_error("d-separated but not implied by atom inclusion: " + to_string(tau, dag.universe()));

  RelaxationCertificate cert;
  cert.kind = RelaxationKind::Recursive;
  cert.implied = separated;
  cert.source = "d-separation";
  if (cert.implied) {
    cert.source += ",atom-inclusion";
    cert.lambda = Rational(1);
    return cert;
  }
  if (!atoms.implied) {
    cert.witness_atom = atoms.witness;
    Refutation r;
    r.kind = Refutation::Kind::SingleAtom;
    r.support = *atoms.witness;
    r.table = single_atom_polymatroid(*atoms.witness, n);
    detail::verify_refutation(r, basis, tau);
    cert.refutation = std::move(r);
    return cert;
  }
  for (const auto& path : detail::d_connecting_paths(dag, tau.x(), tau.y(), tau.z(), 64)) {
    const detail::XorModel m = detail::path_model(dag, path, tau.z());
    Refutation r;
    r.kind = Refutation::Kind::Parity;
    r.table = detail::xor_table(m);
    if (measure_of(r.table, basis) != 0 || cond_mutual_information(r.table, tau) < 1) continue;
    for (int v = 0; v < n; ++v)
      if (m.value[v] != 0) r.support = r.support.with(v);
    r.tau_measure = cond_mutual_information(r.table, tau);
    r.distribution = detail::xor_distribution(m);
    detail::verify_refutation(r, basis, tau);
    cert.witness_path = detail::path_text(dag, path);
    cert.refutation = std::move(r);
    return cert;
  }
  throw std::logic_error("no XOR refutation found for " + to_string(tau, dag.universe()));
}

namespace detail {

/// Does marginal (X;Y) split `s`: s ⊆ XY and s meets both sides?
inline bool splits(const CITriple& sigma, VarSet s) {
  const VarSet xy = sigma.x() | sigma.y();
  return xy.contains(s) && s.intersects(sigma.x()) && s.intersects(sigma.y());
}

/// Builds an inequality chain for (a;b|c), or returns the variable set that
/// no antecedent splits (the support of a refuting parity distribution).
inline std::variant<std::vector<CITriple>, VarSet> cover_elemental(const CISet& sigma, int a, int b, VarSet c) {
  const VarSet ab = VarSet::single(a).with(b);
  std::vector<CITriple> chain;
  while (true) {
    const VarSet s = ab | c;
    const CITriple* same_side = nullptr;
    for (const auto& t : sigma) {
      if (!splits(t, s)) continue;
      if (t.x().contains(a) != t.x().contains(b)) {
        // a and b on opposite sides: I(a;b|c) <= I(X;Y) directly.
        chain.push_back(t);
        return chain;
      }
      if (!same_side) same_side = &t;
    }
    if (!same_side) return s;
    // I(a;b|c) <= I(a;b|c_X) + I(a;c_Y|b c_X), and the second term is at most
    // I(X;Y). c_X is strictly smaller since the split puts part of c in Y.
    chain.push_back(*same_side);
    c &= same_side->x().contains(a) ? same_side->x() : same_side->y();
  }
}

}  // namespace detail

/// Decides Γ_n ⊨ Σ ⇒ τ for marginal antecedents, with λ = |A|·|B|.
///
/// Each elemental (a;b|C) of τ is implied iff it admits a chain: some
/// antecedent (X;Y) with abC ⊆ XY meeting both sides, and if a,b fall on
/// the same side, a chain for (a;b|C∩side). When no antecedent splits the
/// current abC', the parity distribution on abC' refutes.
inline RelaxationCertificate check_marginal(const CISet& sigma, const CITriple& tau, int n) {
  for (const auto& s : sigma)
    if (!s.z().empty()) throw std::invalid_argument("marginal check needs antecedents with empty conditioning sets");
  if (!VarSet::full(n).contains(sigma.vars() | tau.vars())) throw std::invalid_argument("variables outside the universe");

  RelaxationCertificate cert;
  cert.kind = RelaxationKind::Marginal;
  std::map<CITriple, int> usage;
  for (const auto& e : elemental_decompose(tau)) {
    const int a = e.x().lowest();
    const int b = e.y().lowest();
    auto outcome = detail::cover_elemental(sigma, a, b, e.z());
    if (auto* support = std::get_if<VarSet>(&outcome)) {
      cert.implied = false;
      cert.covers.clear();
      cert.witness_elemental = e;
      const CITriple parity_tau(VarSet::single(a), VarSet::single(b), *support - VarSet::single(a).with(b));
      Refutation r;
      r.kind = Refutation::Kind::Parity;
      r.support = *support;
      r.distribution = parity_distribution(n, parity_tau);
      auto table = exact_entropic_table(*r.distribution);
      if (!table) throw std::logic_error("parity distribution is not dyadic");
      r.table = std::move(*table);
      detail::verify_refutation(r, sigma, tau);
      cert.refutation = std::move(r);
      return cert;
    }
    auto chain = std::get<std::vector<CITriple>>(std::move(outcome));
    for (const auto& t : chain) ++usage[t];
    cert.covers.push_back({e, std::move(chain)});
  }
  cert.implied = true;
  cert.lambda = Rational(tau.x().size() * tau.y().size());
  int most = 0;
  for (const auto& [t, count] : usage) most = std::max(most, count);
  cert.usage_bound = Rational(most);
  return cert;
}

/// Σ = {(X1;Xi|X2..X_{i-1}) : 2 <= i <= n} and τ = (X1;X2..Xn). The chain
/// rule gives h(τ) = h(Σ) for every polymatroid.
inline std::pair<CISet, CITriple> tightness_family(int n) {
  if (n < 2) throw std::invalid_argument("tightness family needs n >= 2");
  if (n > kMaxVariables) throw std::length_error("too many variables");
  CISet sigma;
  VarSet between;
  for (int i = 1; i < n; ++i) {
    sigma.add(CITriple(VarSet::single(0), VarSet::single(i), between));
    between = between.with(i);
  }
  return {sigma, CITriple(VarSet::single(0), between)};
}

struct ValidationReport {
  std::size_t trials = 0;
  double lambda = 0;
  /// max over trials of h(τ) - λ·h(Σ)
  double max_violation = 0;
  std::uint64_t worst_seed = 0;
  std::size_t worst_trial = 0;
  bool passed = false;
};

inline constexpr double kValidationTolerance = 1e-9;

/// Samples `trials` random distributions (trial i uses derive_seed(seed, i))
/// and checks λ·h(Σ) >= h(τ) on each within 1e-9.
inline ValidationReport validate_bound(const CISet& sigma, const CITriple& tau, double lambda, int n,
                                       std::size_t trials, std::uint64_t seed, int cardinality = 2) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  if (!VarSet::full(n).contains(sigma.vars() | tau.vars())) throw std::invalid_argument("variables outside the universe");
  ValidationReport rep;
  rep.trials = trials;
  rep.lambda = lambda;
  for (std::size_t i = 0; i < trials; ++i) {
    const std::uint64_t s = derive_seed(seed, i);
    const auto h = entropic_table(random_distribution(n, s, cardinality));
    const double violation = cond_mutual_information(h, tau) - lambda * measure_of(h, sigma);
    if (i == 0 || violation > rep.max_violation) {
      rep.max_violation = violation;
      rep.worst_seed = s;
      rep.worst_trial = i;
    }
  }
  rep.passed = rep.max_violation <= kValidationTolerance;
  return rep;
}

/// Line-oriented certificate text. The first line is `IMPLIED lambda=<q>` or
/// `NOT-IMPLIED witness=<...>`; evidence lines follow in a fixed order.
inline std::string to_text(const RelaxationCertificate& c, const Universe& u) {
  std::ostringstream os;
  if (c.implied) {
    os << "IMPLIED lambda=" << to_string(*c.lambda) << "\n";
  } else if (!c.witness_path.empty()) {
    os << "NOT-IMPLIED witness=" << c.witness_path << "\n";
  } else if (c.witness_elemental) {
    os << "NOT-IMPLIED witness=" << to_string(*c.witness_elemental, u) << "\n";
  } else {
    os << "NOT-IMPLIED witness=" << u.braces(c.witness_atom.value_or(VarSet{})) << "\n";
  }
  os << "kind=" << to_string(c.kind) << "\n";
  if (!c.source.empty()) os << "source=" << c.source << "\n";
  if (c.usage_bound) os << "usage_bound=" << to_string(*c.usage_bound) << "\n";
  for (const auto& cover : c.covers) {
    os << "cover " << to_string(cover.elemental, u) << " by";
    for (const auto& t : cover.chain) os << " " << to_string(t, u);
    os << "\n";
  }
  if (c.refutation) {
    const auto& r = *c.refutation;
    if (r.kind == Refutation::Kind::SingleAtom) os << "refutation=single-atom atom=" << u.braces(r.support) << "\n";
    else os << "refutation=parity support=" << u.braces(r.support) << "\n";
    os << "refutation_check h(sigma)=0 h(tau)=" << to_string(r.tau_measure) << "\n";
  }
  return os.str();
}

}  // namespace cirelax
