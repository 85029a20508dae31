#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cirelax/rational.hpp"

namespace cirelax::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<Rational> coeffs;  // dense, one per variable
  Sense sense = Sense::LessEqual;
  Rational rhs = 0;
};

/// maximize objective·x subject to rows, x >= 0.
struct Program {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Constraint> rows;
};

enum class Status { Optimal, Unbounded, Infeasible };

struct Result {
  Status status = Status::Infeasible;
  /// Optimal objective value (Optimal only).
  Rational value = 0;
  /// Optimal vertex, or the feasible vertex where unboundedness was detected.
  std::vector<Rational> point;
  /// Improving feasible direction (Unbounded only): objective·ray > 0 and
  /// point + t·ray stays feasible for all t >= 0.
  std::vector<Rational> ray;
  /// (row, entering column) of every pivot, in order.
  std::vector<std::pair<std::size_t, std::size_t>> pivots;
};

namespace detail {

/// Dense tableau over exact rationals, Bland's rule for entering and leaving.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : a_(rows, std::vector<Rational>(cols + 1)), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r].back(); }
  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return a_.empty() ? 0 : a_[0].size() - 1; }
  std::size_t& basic(std::size_t r) { return basis_[r]; }

  /// Maximizes cost·x over columns marked usable. Returns the entering
  /// column that proved unboundedness, or npos at optimality.
  std::size_t optimize(const std::vector<Rational>& cost, const std::vector<bool>& usable,
                       std::vector<std::pair<std::size_t, std::size_t>>& pivots) {
    load_objective(cost);
    while (true) {
      std::size_t enter = npos;
      for (std::size_t c = 0; c < cols(); ++c) {
        if (usable[c] && sgn(z_[c]) < 0) {
          enter = c;
          break;
        }
      }
      if (enter == npos) return npos;
      std::size_t leave = npos;
      Rational best;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (sgn(a_[r][enter]) <= 0) continue;
        Rational ratio = a_[r].back() / a_[r][enter];
        if (leave == npos || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          best = std::move(ratio);
          leave = r;
        }
      }
      if (leave == npos) return enter;
      pivot(leave, enter);
      pivots.emplace_back(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational p = a_[r][c];
    for (auto& v : a_[r])
      if (sgn(v) != 0) v /= p;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || sgn(a_[i][c]) == 0) continue;
      const Rational f = a_[i][c];
      for (std::size_t k = 0; k <= cols(); ++k)
        if (sgn(a_[r][k]) != 0) a_[i][k] -= f * a_[r][k];
    }
    if (!z_.empty() && sgn(z_[c]) != 0) {
      const Rational f = z_[c];
      for (std::size_t k = 0; k <= cols(); ++k)
        if (sgn(a_[r][k]) != 0) z_[k] -= f * a_[r][k];
    }
    basis_[r] = c;
  }

  void remove_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  /// Current objective value c_B·x_B.
  const Rational& objective_value() const { return z_.back(); }

  std::vector<Rational> solution(std::size_t n) const {
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < rows(); ++r)
      if (basis_[r] < n) x[basis_[r]] = a_[r].back();
    return x;
  }

  std::vector<Rational> direction(std::size_t enter, std::size_t n) const {
    std::vector<Rational> d(n);
    if (enter < n) d[enter] = 1;
    for (std::size_t r = 0; r < rows(); ++r)
      if (basis_[r] < n) d[basis_[r]] = -a_[r][enter];
    return d;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  /// z_j = c_B·B^{-1}A_j - c_j; last slot holds c_B·x_B.
  void load_objective(const std::vector<Rational>& cost) {
    z_.assign(cols() + 1, Rational(0));
    for (std::size_t c = 0; c < cols(); ++c) z_[c] = -cost[c];
    for (std::size_t r = 0; r < rows(); ++r) {
      const Rational& cb = cost[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t k = 0; k <= cols(); ++k)
        if (sgn(a_[r][k]) != 0) z_[k] += cb * a_[r][k];
    }
  }

  std::vector<std::vector<Rational>> a_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> z_;
};

}  // namespace detail

/// Two-phase primal simplex in exact arithmetic. Bland's rule guarantees
/// termination; identical programs give identical pivot sequences.
inline Result simplex_solve(const Program& p) {
  const std::size_t n = p.num_vars;
  if (p.objective.size() != n) throw std::invalid_argument("objective length differs from variable count");

  // Normalize to rhs >= 0, then count auxiliary columns.
  std::vector<Constraint> rows = p.rows;
  std::size_t slacks = 0, artificials = 0;
  for (auto& row : rows) {
    if (row.coeffs.size() != n) throw std::invalid_argument("constraint length differs from variable count");
    if (sgn(row.rhs) < 0) {
      for (auto& c : row.coeffs) c = -c;
      row.rhs = -row.rhs;
      if (row.sense == Sense::LessEqual) row.sense = Sense::GreaterEqual;
      else if (row.sense == Sense::GreaterEqual) row.sense = Sense::LessEqual;
    } else if (sgn(row.rhs) == 0 && row.sense == Sense::GreaterEqual) {
      for (auto& c : row.coeffs) c = -c;
      row.sense = Sense::LessEqual;
    }
    if (row.sense != Sense::Equal) ++slacks;
    if (row.sense != Sense::LessEqual) ++artificials;
  }

  const std::size_t cols = n + slacks + artificials;
  detail::Tableau tab(rows.size(), cols);
  std::size_t next_slack = n, next_art = n + slacks;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < n; ++c) tab.at(r, c) = rows[r].coeffs[c];
    tab.rhs(r) = rows[r].rhs;
    switch (rows[r].sense) {
      case Sense::LessEqual:
        tab.at(r, next_slack) = 1;
        tab.basic(r) = next_slack++;
        break;
      case Sense::GreaterEqual:
        tab.at(r, next_slack++) = -1;
        tab.at(r, next_art) = 1;
        tab.basic(r) = next_art++;
        break;
      case Sense::Equal:
        tab.at(r, next_art) = 1;
        tab.basic(r) = next_art++;
        break;
    }
  }

  Result result;
  std::vector<bool> usable(cols, true);
  if (artificials > 0) {
    std::vector<Rational> phase1(cols, Rational(0));
    for (std::size_t c = n + slacks; c < cols; ++c) phase1[c] = -1;
    tab.optimize(phase1, usable, result.pivots);
    if (sgn(tab.objective_value()) < 0) {
      result.status = Status::Infeasible;
      return result;
    }
    // Pivot remaining zero-level artificials out of the basis.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basic(r) < n + slacks) {
        ++r;
        continue;
      }
      std::size_t col = detail::Tableau::npos;
      for (std::size_t c = 0; c < n + slacks && col == detail::Tableau::npos; ++c)
        if (sgn(tab.at(r, c)) != 0) col = c;
      if (col == detail::Tableau::npos) {
        tab.remove_row(r);  // redundant equality
      } else {
        tab.pivot(r, col);
        result.pivots.emplace_back(r, col);
        ++r;
      }
    }
    for (std::size_t c = n + slacks; c < cols; ++c) usable[c] = false;
  }

  std::vector<Rational> cost(cols, Rational(0));
  for (std::size_t c = 0; c < n; ++c) cost[c] = p.objective[c];
  const std::size_t unbounded_col = tab.optimize(cost, usable, result.pivots);
  result.point = tab.solution(n);
  if (unbounded_col != detail::Tableau::npos) {
    result.status = Status::Unbounded;
    result.ray = tab.direction(unbounded_col, n);
    return result;
  }
  result.status = Status::Optimal;
  result.value = tab.objective_value();
  return result;
}

}  // namespace cirelax::lp
