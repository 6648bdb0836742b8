#pragma once

// Dense two-phase simplex and active-set vertex enumeration for the tiny
// polyhedra that arise in two-state incentive games.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "incentive/error.hpp"

namespace incentive::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kVertexDedupeTol = 1e-9;

/// { x : A x <= b, E x = f, lower <= x <= upper }.
/// Empty `lower` means all zeros, empty `upper` means all +infinity.
struct Polytope {
  Eigen::MatrixXd constraint_matrix;
  Eigen::VectorXd rhs;
  Eigen::MatrixXd equality_matrix;
  Eigen::VectorXd equality_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  explicit Polytope(Eigen::Index dimension = 0)
      : constraint_matrix(0, dimension),
        rhs(0),
        equality_matrix(0, dimension),
        equality_rhs(0) {}

  Eigen::Index dimension() const { return constraint_matrix.cols(); }

  double lower_bound(Eigen::Index i) const { return lower.size() == 0 ? 0.0 : lower[i]; }
  double upper_bound(Eigen::Index i) const { return upper.size() == 0 ? kInfinity : upper[i]; }

  void add_inequality(const Eigen::RowVectorXd& row, double bound) {
    append_row(constraint_matrix, rhs, row, bound);
  }
  void add_equality(const Eigen::RowVectorXd& row, double value) {
    append_row(equality_matrix, equality_rhs, row, value);
  }

  /// Throws InputError if shapes disagree or right-hand sides are not finite.
  void validate() const {
    const auto d = dimension();
    if (rhs.size() != constraint_matrix.rows())
      throw InputError("inequality rhs length does not match constraint rows");
    if (equality_matrix.cols() != d && equality_matrix.rows() > 0)
      throw InputError("equality matrix column count does not match dimension");
    if (equality_rhs.size() != equality_matrix.rows())
      throw InputError("equality rhs length does not match equality rows");
    if (lower.size() != 0 && lower.size() != d) throw InputError("lower bound length mismatch");
    if (upper.size() != 0 && upper.size() != d) throw InputError("upper bound length mismatch");
    if (!rhs.allFinite() || !equality_rhs.allFinite())
      throw InputError("constraint right-hand sides must be finite");
    if (!constraint_matrix.allFinite() || !equality_matrix.allFinite())
      throw InputError("constraint coefficients must be finite");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::isnan(lower_bound(i)) || std::isnan(upper_bound(i)) ||
          lower_bound(i) > upper_bound(i) || lower_bound(i) == kInfinity ||
          upper_bound(i) == -kInfinity)
        throw InputError("invalid bounds on variable " + std::to_string(i));
    }
  }

  /// Largest violation of any constraint at x (0 when feasible).
  double violation(const Eigen::VectorXd& x) const {
    double worst = 0.0;
    if (constraint_matrix.rows() > 0)
      worst = std::max(worst, (constraint_matrix * x - rhs).maxCoeff());
    if (equality_matrix.rows() > 0)
      worst = std::max(worst, (equality_matrix * x - equality_rhs).cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      worst = std::max(worst, lower_bound(i) - x[i]);
      worst = std::max(worst, x[i] - upper_bound(i));
    }
    return worst;
  }

 private:
  static void append_row(Eigen::MatrixXd& m, Eigen::VectorXd& v, const Eigen::RowVectorXd& row,
                         double value) {
    if (row.size() != m.cols()) throw InputError("constraint row has wrong length");
    m.conservativeResize(m.rows() + 1, Eigen::NoChange);
    m.row(m.rows() - 1) = row;
    v.conservativeResize(v.size() + 1);
    v[v.size() - 1] = value;
  }
};

/// Minimise objective . x over a polytope.
struct LinearProgram {
  Eigen::VectorXd objective;
  Polytope feasible;

  LinearProgram() = default;
  LinearProgram(Eigen::VectorXd c, Polytope p) : objective(std::move(c)), feasible(std::move(p)) {}

  void validate() const {
    feasible.validate();
    if (objective.size() != feasible.dimension())
      throw InputError("objective length does not match constraint columns");
    if (!objective.allFinite()) throw InputError("objective must be finite");
  }
};

enum class Status { Optimal, Infeasible, Unbounded };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  Status status = Status::Infeasible;
  std::optional<Eigen::VectorXd> point;
  std::optional<double> value;

  bool optimal() const { return status == Status::Optimal; }
};

namespace detail {

// Standard form: min c.y  s.t.  M y = r,  y >= 0,  r >= 0.
// Original variables are recovered as x = offset + map * y.
struct StandardForm {
  Eigen::MatrixXd rows;
  Eigen::VectorXd rhs;
  std::vector<bool> has_slack;  // row was an inequality; its slack column is slack_col[row]
  std::vector<Eigen::Index> slack_col;
  Eigen::MatrixXd map;
  Eigen::VectorXd offset;
  Eigen::Index structural = 0;
};

inline StandardForm to_standard_form(const LinearProgram& lp) {
  const Polytope& p = lp.feasible;
  const Eigen::Index d = p.dimension();

  // Column layout of the structural variables.
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(d, 0);
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(d);
  std::vector<std::pair<Eigen::Index, double>> extra_upper;  // (column, bound)
  Eigen::Index cols = 0;
  std::vector<std::vector<std::pair<Eigen::Index, double>>> var_cols(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double lo = p.lower_bound(i), hi = p.upper_bound(i);
    if (std::isfinite(lo)) {
      offset[i] = lo;
      var_cols[i].push_back({cols, 1.0});
      if (std::isfinite(hi)) extra_upper.push_back({cols, hi - lo});
      ++cols;
    } else if (std::isfinite(hi)) {
      offset[i] = hi;
      var_cols[i].push_back({cols++, -1.0});
    } else {
      var_cols[i].push_back({cols++, 1.0});
      var_cols[i].push_back({cols++, -1.0});
    }
  }
  map = Eigen::MatrixXd::Zero(d, cols);
  for (Eigen::Index i = 0; i < d; ++i)
    for (auto [c, s] : var_cols[i]) map(i, c) = s;

  const Eigen::Index n_le = p.constraint_matrix.rows() + static_cast<Eigen::Index>(extra_upper.size());
  const Eigen::Index n_eq = p.equality_matrix.rows();
  const Eigen::Index n_rows = n_le + n_eq;
  const Eigen::Index total = cols + n_le;

  StandardForm sf;
  sf.structural = cols;
  sf.rows = Eigen::MatrixXd::Zero(n_rows, total);
  sf.rhs = Eigen::VectorXd::Zero(n_rows);
  sf.has_slack.assign(n_rows, false);
  sf.slack_col.assign(n_rows, -1);

  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < p.constraint_matrix.rows(); ++k, ++r) {
    sf.rows.row(r).head(cols) = p.constraint_matrix.row(k) * map;
    sf.rhs[r] = p.rhs[k] - p.constraint_matrix.row(k).dot(offset);
    sf.has_slack[r] = true;
  }
  for (auto [c, bound] : extra_upper) {
    sf.rows(r, c) = 1.0;
    sf.rhs[r] = bound;
    sf.has_slack[r] = true;
    ++r;
  }
  for (Eigen::Index k = 0; k < n_eq; ++k, ++r) {
    sf.rows.row(r).head(cols) = p.equality_matrix.row(k) * map;
    sf.rhs[r] = p.equality_rhs[k] - p.equality_matrix.row(k).dot(offset);
  }
  Eigen::Index slack = cols;
  for (Eigen::Index row = 0; row < n_rows; ++row) {
    if (sf.has_slack[row]) {
      sf.slack_col[row] = slack;
      sf.rows(row, slack++) = 1.0;
    }
    if (sf.rhs[row] < 0) {
      sf.rows.row(row) *= -1.0;
      sf.rhs[row] = -sf.rhs[row];
    }
  }
  sf.map = std::move(map);
  sf.offset = std::move(offset);
  return sf;
}

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tableau simplex. The last row holds reduced costs and the last column the
// right-hand side (so the corner entry is -z).
class Tableau {
 public:
  static constexpr double kPivotTol = 1e-11;
  static constexpr double kCostTol = 1e-11;
  static constexpr Eigen::Index kDegenerateRun = 20;

  Tableau(RowMatrix t, std::vector<Eigen::Index> basis, std::vector<bool> allowed)
      : t_(std::move(t)), basis_(std::move(basis)), allowed_(std::move(allowed)) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index rhs_col() const { return t_.cols() - 1; }
  const RowMatrix& data() const { return t_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

  void set_objective(const Eigen::VectorXd& cost) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cost.size()) = cost.transpose();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const double cb = t_(rows(), basis_[r]);
      if (cb != 0.0) t_.row(rows()) -= cb * t_.row(r);
    }
  }

  void forbid(Eigen::Index col) { allowed_[col] = false; }

  // Every optimum of the current objective keeps nonbasic columns with
  // positive reduced cost at zero; forbidding them pins later objectives to
  // the optimal face.
  void restrict_to_optimal_face(double tol) {
    for (Eigen::Index c = 0; c + 1 < t_.cols(); ++c)
      if (allowed_[c] && t_(rows(), c) > tol) allowed_[c] = false;
  }

  // Returns false if the objective is unbounded below.
  bool optimise() {
    const Eigen::Index limit = 50000;
    Eigen::Index degenerate_run = 0;
    bool bland = false;
    for (Eigen::Index iter = 0; iter < limit; ++iter) {
      Eigen::Index enter = -1;
      double most_negative = -kCostTol;
      for (Eigen::Index c = 0; c + 1 < t_.cols(); ++c) {
        if (!allowed_[c] || t_(rows(), c) >= most_negative) continue;
        enter = c;
        if (bland) break;
        most_negative = t_(rows(), c);
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = kInfinity;
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = t_(r, rhs_col()) / a;
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[r] < basis_[leave])) {
          best = ratio;
          leave = r;
        }
      }
      if (leave < 0) return false;
      // Dantzig pricing until a long degenerate run, then Bland for good.
      degenerate_run = best <= 1e-12 ? degenerate_run + 1 : 0;
      if (degenerate_run > kDegenerateRun) bland = true;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit exceeded");
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[r] = c;
  }

  void drop_row(Eigen::Index r) {
    const Eigen::Index n = t_.rows();
    for (Eigen::Index i = r; i + 1 < n; ++i) t_.row(i) = t_.row(i + 1);
    t_.conservativeResize(n - 1, Eigen::NoChange);
    basis_.erase(basis_.begin() + r);
  }

  Eigen::VectorXd primal(Eigen::Index n) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (Eigen::Index r = 0; r < rows(); ++r)
      if (basis_[r] < n) y[basis_[r]] = std::max(0.0, t_(r, rhs_col()));
    return y;
  }

  double objective_value() const { return -t_(rows(), rhs_col()); }

 private:
  RowMatrix t_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> allowed_;
};

// Two-phase driver. After a successful phase 1 any number of objectives can
// be minimised in sequence, optionally restricted to earlier optimal faces.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp) : lp_(lp), sf_(to_standard_form(lp)), tab_(build()) {}

  bool feasible() const { return feasible_; }

  // Minimises c.x over the current face; false when unbounded.
  bool minimise(const Eigen::VectorXd& c) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n_);
    cost.head(sf_.structural) = sf_.map.transpose() * c;
    tab_.set_objective(cost);
    return tab_.optimise();
  }

  void restrict_to_optimal_face() { tab_.restrict_to_optimal_face(1e-9); }

  Eigen::VectorXd point() const {
    const Eigen::VectorXd y = tab_.primal(n_);
    Eigen::VectorXd x = sf_.offset + sf_.map * y.head(sf_.structural);
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x[i] = std::clamp(x[i], lp_.feasible.lower_bound(i), lp_.feasible.upper_bound(i));
    return x;
  }

 private:
  Tableau build() {
    const Eigen::Index m = sf_.rows.rows();
    n_ = sf_.rows.cols();
    // A row whose slack kept coefficient +1 starts with the slack basic;
    // every other row gets an artificial.
    std::vector<Eigen::Index> basis(m, -1);
    Eigen::Index n_art = 0;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (sf_.has_slack[r] && sf_.rows(r, sf_.slack_col[r]) > 0)
        basis[r] = sf_.slack_col[r];
      else
        ++n_art;
    }
    RowMatrix t = RowMatrix::Zero(m + 1, n_ + n_art + 1);
    t.topLeftCorner(m, n_) = sf_.rows;
    t.col(n_ + n_art).head(m) = sf_.rhs;
    Eigen::Index art = n_;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (basis[r] < 0) {
        t(r, art) = 1.0;
        basis[r] = art++;
      }
    }
    Tableau tab(std::move(t), std::move(basis), std::vector<bool>(n_ + n_art, true));
    if (n_art == 0) {
      feasible_ = true;
      return tab;
    }
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_ + n_art);
    phase1.tail(n_art).setOnes();
    tab.set_objective(phase1);
    tab.optimise();
    const double scale = 1.0 + (sf_.rhs.size() ? sf_.rhs.cwiseAbs().maxCoeff() : 0.0);
    feasible_ = tab.objective_value() <= kFeasibilityTol * scale;
    if (!feasible_) return tab;
    // Drive artificials out of the basis, dropping redundant rows.
    for (Eigen::Index r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[r] < n_) continue;
      Eigen::Index col = -1;
      for (Eigen::Index c = 0; c < n_; ++c) {
        if (std::abs(tab.data()(r, c)) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col >= 0)
        tab.pivot(r, col);
      else
        tab.drop_row(r);
    }
    for (Eigen::Index c = n_; c < n_ + n_art; ++c) tab.forbid(c);
    return tab;
  }

  const LinearProgram& lp_;
  StandardForm sf_;
  Eigen::Index n_ = 0;
  bool feasible_ = false;
  Tableau tab_;
};

}  // namespace detail

/// Two-phase dense simplex (minimisation). Dantzig pricing, falling back to
/// Bland's anti-cycling rule after a run of degenerate pivots.
inline LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  detail::Simplex simplex(lp);
  if (!simplex.feasible()) return {Status::Infeasible, {}, {}};
  if (!simplex.minimise(lp.objective)) return {Status::Unbounded, {}, {}};
  Eigen::VectorXd x = simplex.point();
  const double value = lp.objective.dot(x);
  return {Status::Optimal, std::move(x), value};
}

/// Minimises `lp.objective`, then each tie-break objective in turn over the
/// optimal face of all previous ones. The reported value is that of the
/// primary objective.
inline LpSolution solve_lexicographic(const LinearProgram& lp, const std::vector<Eigen::VectorXd>& tiebreaks) {
  lp.validate();
  for (const auto& c : tiebreaks)
    if (c.size() != lp.objective.size()) throw InputError("tie-break objective has wrong length");
  detail::Simplex simplex(lp);
  if (!simplex.feasible()) return {Status::Infeasible, {}, {}};
  if (!simplex.minimise(lp.objective)) return {Status::Unbounded, {}, {}};
  for (const auto& c : tiebreaks) {
    simplex.restrict_to_optimal_face();
    if (!simplex.minimise(c)) throw InputError("tie-break objective unbounded on the optimal face");
  }
  Eigen::VectorXd x = simplex.point();
  const double value = lp.objective.dot(x);
  return {Status::Optimal, std::move(x), value};
}

/// Lexicographically smallest point of the optimal face (after any explicit
/// tie-breaks): a canonical, reproducible choice among tied optima.
inline LpSolution solve_lp_canonical(const LinearProgram& lp, const std::vector<Eigen::VectorXd>& tiebreaks = {}) {
  std::vector<Eigen::VectorXd> all = tiebreaks;
  const Eigen::Index d = lp.objective.size();
  for (Eigen::Index i = 0; i < d; ++i) all.push_back(Eigen::VectorXd::Unit(d, i));
  return solve_lexicographic(lp, all);
}

namespace detail {

inline bool next_combination(std::vector<Eigen::Index>& idx, Eigen::Index n) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (Eigen::Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Every vertex (basic feasible solution) of a bounded polytope, sorted
/// lexicographically and deduplicated under L-infinity distance 1e-9.
/// Returns an empty list for an empty polytope; throws InputError when the
/// polytope is unbounded.
inline std::vector<Eigen::VectorXd> enumerate_vertices(const Polytope& p) {
  p.validate();
  const Eigen::Index d = p.dimension();

  for (Eigen::Index i = 0; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      const LpSolution s = solve_lp({sign * Eigen::VectorXd::Unit(d, i), p});
      if (s.status == Status::Infeasible) return {};
      if (s.status == Status::Unbounded) throw InputError("vertex enumeration: unbounded polytope");
    }
  }

  // Inequalities including finite bounds, as G x <= h.
  std::vector<Eigen::RowVectorXd> g_rows;
  std::vector<double> h;
  for (Eigen::Index k = 0; k < p.constraint_matrix.rows(); ++k) {
    g_rows.push_back(p.constraint_matrix.row(k));
    h.push_back(p.rhs[k]);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::isfinite(p.lower_bound(i))) {
      g_rows.push_back(-Eigen::RowVectorXd::Unit(d, i));
      h.push_back(-p.lower_bound(i));
    }
    if (std::isfinite(p.upper_bound(i))) {
      g_rows.push_back(Eigen::RowVectorXd::Unit(d, i));
      h.push_back(p.upper_bound(i));
    }
  }

  // Linearly independent subset of the equalities.
  Eigen::MatrixXd eq(0, d);
  Eigen::VectorXd eq_rhs(0);
  for (Eigen::Index k = 0; k < p.equality_matrix.rows(); ++k) {
    Eigen::MatrixXd trial(eq.rows() + 1, d);
    trial << eq, p.equality_matrix.row(k);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    lu.setThreshold(1e-10);
    if (lu.rank() == trial.rows()) {
      eq = trial;
      eq_rhs.conservativeResize(eq_rhs.size() + 1);
      eq_rhs[eq_rhs.size() - 1] = p.equality_rhs[k];
    }
  }

  const Eigen::Index need = d - eq.rows();
  const auto n_ineq = static_cast<Eigen::Index>(g_rows.size());
  std::vector<Eigen::VectorXd> found;
  if (need < 0 || need > n_ineq) return found;

  auto consider = [&](const Eigen::VectorXd& x) {
    if (p.violation(x) > kFeasibilityTol) return;
    for (const auto& v : found)
      if ((v - x).cwiseAbs().maxCoeff() <= kVertexDedupeTol) return;
    found.push_back(x);
  };

  std::vector<Eigen::Index> pick(need);
  for (Eigen::Index i = 0; i < need; ++i) pick[i] = i;
  Eigen::MatrixXd system(d, d);
  Eigen::VectorXd target(d);
  system.topRows(eq.rows()) = eq;
  target.head(eq.rows()) = eq_rhs;
  do {
    for (Eigen::Index i = 0; i < need; ++i) {
      system.row(eq.rows() + i) = g_rows[pick[i]];
      target[eq.rows() + i] = h[pick[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) continue;
    consider(lu.solve(target));
  } while (need > 0 && detail::next_combination(pick, n_ineq));

  for (auto& v : found)
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (std::abs(v[i]) < 1e-13) v[i] = 0.0;
  std::sort(found.begin(), found.end(), [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return found;
}

}  // namespace incentive::lp
