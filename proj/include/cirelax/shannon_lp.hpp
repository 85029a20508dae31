#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cirelax/ci_triple.hpp"
#include "cirelax/polymatroid.hpp"
#include "cirelax/rational.hpp"
#include "cirelax/simplex.hpp"
#include "cirelax/varset.hpp"

namespace cirelax {

inline constexpr int kMaxLpVariables = 5;

/// Sparse linear form Σ_S coeff(S)·h(S) over nonempty subsets S.
class LinearFunctional {
 public:
  LinearFunctional() = default;

  void add(VarSet s, const Rational& c) {
    if (s.empty()) return;  // h(∅) = 0
    Rational& slot = coeffs_[s.bits()];
    slot += c;
    if (sgn(slot) == 0) coeffs_.erase(s.bits());
  }
  LinearFunctional& operator+=(const LinearFunctional& o) {
    for (const auto& [s, c] : o.coeffs_) add(VarSet(s), c);
    return *this;
  }
  LinearFunctional scaled(const Rational& k) const {
    LinearFunctional out;
    for (const auto& [s, c] : coeffs_) out.add(VarSet(s), k * c);
    return out;
  }

  template <typename T>
  T evaluate(const PolymatroidTable<T>& h) const {
    T total(0);
    for (const auto& [s, c] : coeffs_) total += T(c) * h[VarSet(s)];
    return total;
  }

  const std::map<VarSet::Mask, Rational>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

 private:
  std::map<VarSet::Mask, Rational> coeffs_;
};

/// h(xz) + h(yz) - h(xyz) - h(z)
inline LinearFunctional cmi_functional(VarSet x, VarSet y, VarSet z) {
  LinearFunctional f;
  f.add(x | z, 1);
  f.add(y | z, 1);
  f.add(x | y | z, -1);
  f.add(z, -1);
  return f;
}
inline LinearFunctional cmi_functional(const CITriple& t) { return cmi_functional(t.x(), t.y(), t.z()); }
inline LinearFunctional cmi_functional(const CISet& sigma) {
  LinearFunctional f;
  for (const auto& s : sigma) f += cmi_functional(s);
  return f;
}

/// Generating rows of Γ_n: h(Ω) - h(Ω - i) >= 0 for every i, then
/// I(i;j|K) >= 0 for i < j and K ⊆ Ω - {i,j} in increasing mask order.
/// There are n + C(n,2)·2^(n-2) of them.
inline std::vector<LinearFunctional> elemental_inequalities(int n) {
  if (n < 2 || n > kMaxLpVariables)
    throw std::length_error("elemental inequalities are generated for 2 <= n <= " + std::to_string(kMaxLpVariables));
  const VarSet all = VarSet::full(n);
  std::vector<LinearFunctional> rows;
  for (int i = 0; i < n; ++i) {
    LinearFunctional f;
    f.add(all, 1);
    f.add(all.without(i), -1);
    rows.push_back(std::move(f));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for_each_subset(all.without(i).without(j), [&](VarSet k) {
        rows.push_back(cmi_functional(VarSet::single(i), VarSet::single(j), k));
      });
  return rows;
}

/// maximize objective(h) over the elemental cone intersected with one
/// normalization row.
struct ConeProgram {
  enum class Normalization { AtMostOne, EqualsZero };

  int n = 0;
  std::vector<LinearFunctional> rows;  // each >= 0
  LinearFunctional objective;
  LinearFunctional normalization;
  Normalization normalization_sense = Normalization::AtMostOne;

  static ConeProgram over_gamma(int n) {
    ConeProgram p;
    p.n = n;
    p.rows = elemental_inequalities(n);
    return p;
  }
};

/// Outcome of a cone program. `point` is the optimal polymatroid, or when
/// unbounded, an improving ray (itself a polymatroid).
struct ConeSolution {
  lp::Status status = lp::Status::Infeasible;
  Rational value = 0;
  std::optional<PolymatroidTable<Rational>> point;
  std::size_t pivot_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
};

namespace detail {

inline std::vector<Rational> dense(const LinearFunctional& f, int n) {
  std::vector<Rational> row((std::size_t{1} << n) - 1, Rational(0));
  for (const auto& [s, c] : f.coeffs()) row[s - 1] = c;
  return row;
}

inline PolymatroidTable<Rational> table_from(const std::vector<Rational>& x, int n) {
  PolymatroidTable<Rational> h(n);
  for (std::size_t i = 0; i < x.size(); ++i) h.set(VarSet(static_cast<VarSet::Mask>(i + 1)), x[i]);
  return h;
}

}  // namespace detail

/// Solves the cone program exactly. Variables are h(S) for nonempty S in
/// increasing mask order, constrained h >= 0 (implied by the rows anyway).
inline ConeSolution simplex_solve(const ConeProgram& p) {
  if (p.n < 1 || p.n > kMaxLpVariables) throw std::length_error("cone programs support n <= 5");
  lp::Program prog;
  prog.num_vars = (std::size_t{1} << p.n) - 1;
  prog.objective = detail::dense(p.objective, p.n);
  for (const auto& row : p.rows) prog.rows.push_back({detail::dense(row, p.n), lp::Sense::GreaterEqual, 0});
  if (!p.normalization.empty()) {
    if (p.normalization_sense == ConeProgram::Normalization::AtMostOne)
      prog.rows.push_back({detail::dense(p.normalization, p.n), lp::Sense::LessEqual, 1});
    else
      prog.rows.push_back({detail::dense(p.normalization, p.n), lp::Sense::Equal, 0});
  }
  const lp::Result r = lp::simplex_solve(prog);
  ConeSolution out;
  out.status = r.status;
  out.pivots = r.pivots;
  out.pivot_count = r.pivots.size();
  if (r.status == lp::Status::Optimal) {
    out.value = r.value;
    out.point = detail::table_from(r.point, p.n);
  } else if (r.status == lp::Status::Unbounded) {
    out.point = detail::table_from(r.ray, p.n);
  } else {
    throw std::logic_error("cone program infeasible; h = 0 is always feasible");
  }
  if (!is_polymatroid(*out.point)) throw std::logic_error("simplex returned a point outside the polymatroid cone");
  return out;
}

/// Least λ with λ·h(Σ) >= h(τ) on all of Γ_n, or nullopt when no finite λ
/// exists. Solved as max I_h(τ) subject to I_h(Σ) <= 1 over the elemental cone.
struct LambdaResult {
  std::optional<Rational> lambda;
  ConeSolution solution;
  bool bounded() const { return lambda.has_value(); }
};

inline ConeProgram lambda_program(const CISet& sigma, const CITriple& tau, int n) {
  if (!VarSet::full(n).contains(sigma.vars() | tau.vars())) throw std::invalid_argument("variables outside the universe");
  ConeProgram p = ConeProgram::over_gamma(n);
  p.objective = cmi_functional(tau);
  p.normalization = cmi_functional(sigma);
  p.normalization_sense = ConeProgram::Normalization::AtMostOne;
  return p;
}

inline LambdaResult optimal_lambda(const CISet& sigma, const CITriple& tau, int n) {
  LambdaResult out;
  out.solution = simplex_solve(lambda_program(sigma, tau, n));
  if (out.solution.status == lp::Status::Optimal) out.lambda = out.solution.value;
  return out;
}

/// True iff Γ_n ⊨ λ·h(Σ) >= h(τ): max of I(τ) - λ·I(Σ) over polymatroids with
/// h(Ω) <= 1 is zero.
inline bool check_ai_gamma(const CISet& sigma, const CITriple& tau, const Rational& lambda, int n) {
  if (!VarSet::full(n).contains(sigma.vars() | tau.vars())) throw std::invalid_argument("variables outside the universe");
  ConeProgram p = ConeProgram::over_gamma(n);
  p.objective = cmi_functional(tau);
  p.objective += cmi_functional(sigma).scaled(-lambda);
  p.normalization.add(VarSet::full(n), 1);
  const ConeSolution s = simplex_solve(p);
  return s.status == lp::Status::Optimal && sgn(s.value) == 0;
}

/// Plain-text listing of a cone program for external audit.
inline std::string dump_program(const ConeProgram& p, const Universe& u) {
  auto term_list = [&](const LinearFunctional& f) {
    std::string out;
    for (const auto& [s, c] : f.coeffs()) {
      out += sgn(c) < 0 ? " - " : " + ";
      out += to_string(Rational(abs(c))) + " h" + u.braces(VarSet(s));
    }
    return out.empty() ? std::string(" 0") : out;
  };
  std::ostringstream os;
  os << "program n=" << p.n << " variables=" << ((1u << p.n) - 1) << " rows=" << p.rows.size() << "\n";
  os << "objective max" << term_list(p.objective) << "\n";
  for (std::size_t i = 0; i < p.rows.size(); ++i) os << "row " << i << ":" << term_list(p.rows[i]) << " >= 0\n";
  if (!p.normalization.empty())
    os << "normalization:" << term_list(p.normalization)
       << (p.normalization_sense == ConeProgram::Normalization::AtMostOne ? " <= 1\n" : " = 0\n");
  return os.str();
}

}  // namespace cirelax
