#ifndef DDVEP_LP_HPP
#define DDVEP_LP_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ddvep/error.hpp"

namespace ddvep {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Constraint {
  Eigen::VectorXd row;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// minimize c^T x subject to the listed constraints and per-variable lower
/// bounds. A variable without a lower bound is free. Variables default to
/// x_j >= 0.
struct LinearProgram {
  Eigen::VectorXd objective;
  std::vector<Constraint> constraints;
  std::vector<std::optional<double>> lower_bounds;

  explicit LinearProgram(Eigen::VectorXd c)
      : objective(std::move(c)), lower_bounds(static_cast<std::size_t>(objective.size()), 0.0) {}

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add(Eigen::VectorXd row, Relation rel, double rhs) {
    constraints.push_back({std::move(row), rel, rhs});
  }
  void set_free(int j) { lower_bounds.at(static_cast<std::size_t>(j)) = std::nullopt; }
  void set_lower(int j, double l) { lower_bounds.at(static_cast<std::size_t>(j)) = l; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

/// Dual multipliers follow the Lagrangian L = c^T x - y^T (A x - b):
/// y_i >= 0 for a >= row, y_i <= 0 for a <= row, free for an equality.
struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective_value = 0.0;
  Eigen::VectorXd duals;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  std::size_t max_pivots = 1'000'000;
};

namespace detail {

using TableauMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense tableau: rows 0..m-1 are constraints, row m holds reduced costs.
// The last column holds the right-hand side (and -objective in row m).
class Tableau {
 public:
  Tableau(TableauMatrix t, std::vector<int> basis, std::vector<bool> may_enter, const SimplexOptions& opt)
      : t_(std::move(t)), basis_(std::move(basis)), may_enter_(std::move(may_enter)), opt_(opt) {}

  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  TableauMatrix& data() { return t_; }
  const std::vector<int>& basis() const { return basis_; }
  std::vector<bool>& may_enter() { return may_enter_; }
  std::size_t pivots() const { return pivots_; }

  // Rebuilds the reduced-cost row for the given column costs.
  void price(const Eigen::VectorXd& cost) {
    const int m = rows();
    t_.row(m).setZero();
    t_.row(m).head(cols()) = cost.transpose();
    for (int i = 0; i < m; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t_.row(m) -= cb * t_.row(i);
    }
  }

  void pivot(int r, int c) {
    const int m = rows();
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
    ++pivots_;
    if (pivots_ > opt_.max_pivots) {
      throw Error(ErrorKind::NumericalFailure,
                  "simplex pivot limit exceeded (" + std::to_string(opt_.max_pivots) + " pivots)");
    }
  }

  // Returns false when the LP is unbounded along an improving column.
  bool optimize() {
    const int m = rows();
    const int n = cols();
    bool bland = false;
    for (;;) {
      int enter = -1;
      double best = -opt_.pivot_tol;
      for (int j = 0; j < n; ++j) {
        if (!may_enter_[static_cast<std::size_t>(j)]) continue;
        const double r = t_(m, j);
        if (bland) {
          if (r < -opt_.pivot_tol) {
            enter = j;
            break;
          }
        } else if (r < best) {
          best = r;
          enter = j;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= opt_.pivot_tol) continue;
        const double q = t_(i, n) / a;
        const bool better = q < ratio - 1e-12 ||
                            (q <= ratio + 1e-12 && leave >= 0 &&
                             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]);
        if (leave < 0 || better) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) return false;
      // Zero-step pivots switch to Bland's rule until progress resumes.
      bland = ratio <= opt_.pivot_tol;
      pivot(leave, enter);
    }
  }

 private:
  TableauMatrix t_;
  std::vector<int> basis_;
  std::vector<bool> may_enter_;
  SimplexOptions opt_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Two-phase primal simplex on a dense tableau.
inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {}) {
  const int n = lp.num_vars();
  const int m = static_cast<int>(lp.constraints.size());
  if (n == 0) throw Error(ErrorKind::InvalidInput, "LP has no variables");
  if (static_cast<int>(lp.lower_bounds.size()) != n) throw Error(ErrorKind::InvalidInput, "LP bound count mismatch");
  for (const Constraint& c : lp.constraints) {
    if (c.row.size() != n) throw Error(ErrorKind::InvalidInput, "LP row length mismatch");
  }

  // Column layout: structural columns (one per bounded variable, two per
  // free one), then one slack/surplus per inequality, then artificials.
  std::vector<int> pos_col(static_cast<std::size_t>(n)), neg_col(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd shift = Eigen::VectorXd::Zero(n);
  int ncols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[static_cast<std::size_t>(j)] = ncols++;
    if (lp.lower_bounds[static_cast<std::size_t>(j)]) {
      shift(j) = *lp.lower_bounds[static_cast<std::size_t>(j)];
    } else {
      neg_col[static_cast<std::size_t>(j)] = ncols++;
    }
  }

  std::vector<double> sign(static_cast<std::size_t>(m), 1.0);
  std::vector<Relation> rel(static_cast<std::size_t>(m));
  std::vector<double> rhs(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Constraint& c = lp.constraints[static_cast<std::size_t>(i)];
    double r = c.rhs - c.row.dot(shift);
    Relation k = c.relation;
    if (r < 0.0) {
      sign[static_cast<std::size_t>(i)] = -1.0;
      r = -r;
      if (k == Relation::LessEqual) {
        k = Relation::GreaterEqual;
      } else if (k == Relation::GreaterEqual) {
        k = Relation::LessEqual;
      }
    }
    rel[static_cast<std::size_t>(i)] = k;
    rhs[static_cast<std::size_t>(i)] = r;
  }

  std::vector<int> slack_col(static_cast<std::size_t>(m), -1), art_col(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    if (rel[static_cast<std::size_t>(i)] != Relation::Equal) slack_col[static_cast<std::size_t>(i)] = ncols++;
  }
  const int first_art = ncols;
  for (int i = 0; i < m; ++i) {
    if (rel[static_cast<std::size_t>(i)] != Relation::LessEqual) art_col[static_cast<std::size_t>(i)] = ncols++;
  }

  detail::TableauMatrix t = detail::TableauMatrix::Zero(m + 1, ncols + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  // Column whose initial entry is e_i; its final reduced cost yields y_i.
  std::vector<int> unit_col(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const Constraint& c = lp.constraints[ii];
    for (int j = 0; j < n; ++j) {
      const double v = sign[ii] * c.row(j);
      t(i, pos_col[static_cast<std::size_t>(j)]) = v;
      if (neg_col[static_cast<std::size_t>(j)] >= 0) t(i, neg_col[static_cast<std::size_t>(j)]) = -v;
    }
    if (rel[ii] == Relation::LessEqual) {
      t(i, slack_col[ii]) = 1.0;
      basis[ii] = slack_col[ii];
      unit_col[ii] = slack_col[ii];
    } else {
      if (rel[ii] == Relation::GreaterEqual) t(i, slack_col[ii]) = -1.0;
      t(i, art_col[ii]) = 1.0;
      basis[ii] = art_col[ii];
      unit_col[ii] = art_col[ii];
    }
    t(i, ncols) = rhs[ii];
  }

  std::vector<bool> may_enter(static_cast<std::size_t>(ncols), true);
  detail::Tableau tab(std::move(t), std::move(basis), std::move(may_enter), opt);

  LpSolution sol;
  if (first_art < ncols) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols);
    phase1.tail(ncols - first_art).setOnes();
    tab.price(phase1);
    tab.optimize();
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] >= first_art) infeas += tab.data()(i, ncols);
    }
    double scale = 1.0;
    for (double r : rhs) scale = std::max(scale, std::abs(r));
    if (infeas > 1e-9 * scale) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = tab.pivots();
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis()[static_cast<std::size_t>(i)] < first_art) continue;
      int best = -1;
      double mag = opt.pivot_tol;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab.data()(i, j)) > mag) {
          mag = std::abs(tab.data()(i, j));
          best = j;
        }
      }
      if (best >= 0) tab.pivot(i, best);
    }
    for (int j = first_art; j < ncols; ++j) tab.may_enter()[static_cast<std::size_t>(j)] = false;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(ncols);
  for (int j = 0; j < n; ++j) {
    cost(pos_col[static_cast<std::size_t>(j)]) = lp.objective(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) cost(neg_col[static_cast<std::size_t>(j)]) = -lp.objective(j);
  }
  tab.price(cost);
  const bool bounded = tab.optimize();
  sol.pivots = tab.pivots();
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  Eigen::VectorXd colval = Eigen::VectorXd::Zero(ncols);
  for (int i = 0; i < m; ++i) colval(tab.basis()[static_cast<std::size_t>(i)]) = tab.data()(i, ncols);
  sol.x = shift;
  for (int j = 0; j < n; ++j) {
    sol.x(j) += colval(pos_col[static_cast<std::size_t>(j)]);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) sol.x(j) -= colval(neg_col[static_cast<std::size_t>(j)]);
  }
  sol.duals.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    sol.duals(i) = -sign[ii] * tab.data()(m, unit_col[ii]);
  }
  sol.objective_value = lp.objective.dot(sol.x);
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace ddvep

#endif  // DDVEP_LP_HPP
