#pragma once

// Incentive design on two-state matrix games. The principal picks rows, the
// agent picks columns, and an incentive scheme assigns a mixed row strategy
// to every column the agent might play.
//
// Tie-breaking throughout: the agent resolves indifference in the principal's
// favour; among principal-optimal schemes the one cheapest for the agent is
// reported; remaining ties go to the lexicographically smallest scheme.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "incentive/belief.hpp"
#include "incentive/error.hpp"
#include "incentive/lp_kernel.hpp"

namespace incentive::matrix {

inline constexpr double kTieTol = 1e-9;

/// Per-state cost matrices; entry (i, j) is the cost when the principal plays
/// row i and the agent plays column j.
class CostTable {
 public:
  CostTable(std::array<Eigen::MatrixXd, 2> principal, std::array<Eigen::MatrixXd, 2> agent)
      : principal_(std::move(principal)), agent_(std::move(agent)) {
    const auto rows = principal_[0].rows(), cols = principal_[0].cols();
    if (rows == 0 || cols == 0) throw InputError("cost matrices must be non-empty");
    for (const auto* set : {&principal_, &agent_})
      for (const auto& m : *set) {
        if (m.rows() != rows || m.cols() != cols) throw InputError("all four cost matrices must share one shape");
        if (!m.allFinite()) throw InputError("cost entries must be finite");
      }
  }

  Eigen::Index rows() const { return principal_[0].rows(); }
  Eigen::Index cols() const { return principal_[0].cols(); }
  const Eigen::MatrixXd& principal(int state) const { return principal_.at(state); }
  const Eigen::MatrixXd& agent(int state) const { return agent_.at(state); }

 private:
  std::array<Eigen::MatrixXd, 2> principal_;
  std::array<Eigen::MatrixXd, 2> agent_;
};

/// Column j is the principal's mixed response to agent action j.
class IncentiveScheme {
 public:
  IncentiveScheme() = default;
  explicit IncentiveScheme(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
    for (Eigen::Index j = 0; j < columns_.cols(); ++j) {
      if ((columns_.col(j).array() < -1e-10).any() || std::abs(columns_.col(j).sum() - 1.0) > 1e-10)
        throw InputError("incentive scheme column " + std::to_string(j) + " is not a distribution");
    }
    columns_ = columns_.cwiseMax(0.0);
  }

  /// Builds from the stacked column vector used by the linear programs;
  /// entries below 1e-12 are rounding residue and are zeroed.
  static IncentiveScheme from_stacked(const Eigen::VectorXd& x, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(x.data(), rows, cols);
    m = (m.array().abs() < 1e-12).select(0.0, m);
    for (Eigen::Index j = 0; j < cols; ++j) m.col(j) /= m.col(j).sum();
    return IncentiveScheme(std::move(m));
  }

  const Eigen::MatrixXd& columns() const { return columns_; }
  Eigen::VectorXd column(Eigen::Index j) const { return columns_.col(j); }

  /// Expected cost under `costs` when the agent plays column j.
  double cost(const Eigen::MatrixXd& costs, Eigen::Index j) const { return columns_.col(j).dot(costs.col(j)); }

  bool approx_equal(const IncentiveScheme& other, double tol = lp::kVertexDedupeTol) const {
    return columns_.rows() == other.columns_.rows() && columns_.cols() == other.columns_.cols() &&
           (columns_ - other.columns_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  Eigen::MatrixXd columns_;
};

/// Agent's best replies to a scheme in one state. Ties within `tol` are all returned.
inline std::vector<int> best_responses(const CostTable& t, const IncentiveScheme& s, int state, double tol = 1e-8) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < t.cols(); ++j) best = std::min(best, s.cost(t.agent(state), j));
  std::vector<int> out;
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    if (s.cost(t.agent(state), j) <= best + tol) out.push_back(static_cast<int>(j));
  return out;
}

struct EquilibriumReport {
  /// One scheme for the uninformed principal; one per state when she observes the state.
  std::vector<IncentiveScheme> schemes;
  std::array<int, 2> agent_actions{};
  std::array<double, 2> principal_state_cost{};
  std::array<double, 2> agent_state_cost{};
  double principal_cost = 0.0;
  double agent_cost = 0.0;

  const IncentiveScheme& scheme_for(int state) const { return schemes.size() == 1 ? schemes[0] : schemes.at(state); }
};

/// Fills the cost fields of a report from its schemes and agent actions.
inline void evaluate_costs(const CostTable& t, Belief b, EquilibriumReport& r) {
  for (int k = 0; k < 2; ++k) {
    r.principal_state_cost[k] = r.scheme_for(k).cost(t.principal(k), r.agent_actions[k]);
    r.agent_state_cost[k] = r.scheme_for(k).cost(t.agent(k), r.agent_actions[k]);
  }
  r.principal_cost = b.p1() * r.principal_state_cost[0] + b.p2() * r.principal_state_cost[1];
  r.agent_cost = b.p1() * r.agent_state_cost[0] + b.p2() * r.agent_state_cost[1];
}

namespace detail {

inline Eigen::Index block(const CostTable& t, Eigen::Index j) { return j * t.rows(); }

// Columns are distributions; everything else is problem specific.
inline lp::Polytope scheme_simplex(const CostTable& t) {
  const Eigen::Index m = t.rows(), n = t.cols();
  lp::Polytope p(m * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m * n);
    row.segment(block(t, j), m).setOnes();
    p.add_equality(row, 1.0);
  }
  return p;
}

// Agent prefers column j in `state`: gamma(v_j).C e_j <= gamma(v_l).C e_l.
inline void add_incentive_constraints(const CostTable& t, int state, Eigen::Index j, lp::Polytope& p) {
  const Eigen::Index m = t.rows();
  const Eigen::MatrixXd& c = t.agent(state);
  for (Eigen::Index l = 0; l < t.cols(); ++l) {
    if (l == j) continue;
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m * t.cols());
    row.segment(block(t, j), m) = c.col(j).transpose();
    row.segment(block(t, l), m) -= c.col(l).transpose();
    p.add_inequality(row, 0.0);
  }
}

inline Eigen::VectorXd response_objective(const CostTable& t, const Eigen::MatrixXd& c1, double w1, Eigen::Index i,
                                          const Eigen::MatrixXd& c2, double w2, Eigen::Index j) {
  Eigen::VectorXd obj = Eigen::VectorXd::Zero(t.rows() * t.cols());
  obj.segment(block(t, i), t.rows()) += w1 * c1.col(i);
  obj.segment(block(t, j), t.rows()) += w2 * c2.col(j);
  return obj;
}

}  // namespace detail

/// Schemes under which the agent plays column j in `state`.
inline lp::Polytope g1_polytope(const CostTable& t, int state, Eigen::Index j) {
  lp::Polytope p = detail::scheme_simplex(t);
  detail::add_incentive_constraints(t, state, j, p);
  return p;
}

/// Schemes under which the agent plays column i in theta_1 and column j in theta_2.
inline lp::Polytope g2_polytope(const CostTable& t, Eigen::Index i, Eigen::Index j) {
  lp::Polytope p = detail::scheme_simplex(t);
  detail::add_incentive_constraints(t, 0, i, p);
  detail::add_incentive_constraints(t, 1, j, p);
  return p;
}

inline Eigen::VectorXd g2_principal_objective(const CostTable& t, Belief b, Eigen::Index i, Eigen::Index j) {
  return detail::response_objective(t, t.principal(0), b.p1(), i, t.principal(1), b.p2(), j);
}

inline Eigen::VectorXd g2_agent_objective(const CostTable& t, Belief b, Eigen::Index i, Eigen::Index j) {
  return detail::response_objective(t, t.agent(0), b.p1(), i, t.agent(1), b.p2(), j);
}

/// Full-information game: the principal sees the state and commits to a
/// state-dependent scheme. One LP per (state, candidate agent action).
inline EquilibriumReport solve_g1(const CostTable& t, Belief prior) {
  const Eigen::Index m = t.rows(), n = t.cols();
  EquilibriumReport report;
  for (int k = 0; k < 2; ++k) {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(m, n);
    std::vector<double> value(n, lp::kInfinity);
    std::vector<lp::LinearProgram> programs;
    std::vector<Eigen::VectorXd> agent_obj;
    for (Eigen::Index j = 0; j < n; ++j) {
      programs.emplace_back(detail::response_objective(t, t.principal(k), 1.0, j, zero, 0.0, j), g1_polytope(t, k, j));
      agent_obj.push_back(detail::response_objective(t, t.agent(k), 1.0, j, zero, 0.0, j));
      const lp::LpSolution s = lp::solve_lp(programs.back());
      if (s.optimal()) value[j] = *s.value;
    }
    const double best = *std::min_element(value.begin(), value.end());
    if (!std::isfinite(best)) throw SolverError("no inducible agent action");
    Eigen::Index chosen = -1;
    double chosen_agent = lp::kInfinity;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (value[j] > best + kTieTol * std::max(1.0, std::abs(best))) continue;
      const lp::LpSolution s = lp::solve_lexicographic(programs[j], {agent_obj[j]});
      const double a = agent_obj[j].dot(*s.point);
      if (a < chosen_agent - 1e-12) {
        chosen = j;
        chosen_agent = a;
      }
    }
    const lp::LpSolution s = lp::solve_lp_canonical(programs[chosen], {agent_obj[chosen]});
    report.schemes.push_back(IncentiveScheme::from_stacked(*s.point, m, n));
    report.agent_actions[k] = static_cast<int>(chosen);
  }
  evaluate_costs(t, prior, report);
  return report;
}

/// Equilibrium value of the uninformed principal at belief b, with the pair
/// of agent responses (column in theta_1, column in theta_2) that attains it.
struct G2Value {
  double principal = 0.0;
  double agent = std::numeric_limits<double>::quiet_NaN();
  int response1 = -1;
  int response2 = -1;
};

/// Minimum over response pairs of the per-pair LP. With `resolve_agent`,
/// ties among principal-optimal pairs and schemes go to the agent's cheapest.
inline G2Value g2_value(const CostTable& t, Belief b, bool resolve_agent = true) {
  const Eigen::Index n = t.cols();
  std::vector<double> value(n * n, lp::kInfinity);
  G2Value out;
  out.principal = lp::kInfinity;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const lp::LpSolution s = lp::solve_lp({g2_principal_objective(t, b, i, j), g2_polytope(t, i, j)});
      if (!s.optimal()) continue;
      value[i * n + j] = *s.value;
      if (*s.value < out.principal) {
        out.principal = *s.value;
        out.response1 = static_cast<int>(i);
        out.response2 = static_cast<int>(j);
      }
    }
  if (!std::isfinite(out.principal)) throw SolverError("no inducible response pair");
  if (!resolve_agent) return out;

  out.agent = lp::kInfinity;
  const double cutoff = out.principal + kTieTol * std::max(1.0, std::abs(out.principal));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (value[i * n + j] > cutoff) continue;
      const Eigen::VectorXd agent_obj = g2_agent_objective(t, b, i, j);
      const lp::LpSolution s =
          lp::solve_lexicographic({g2_principal_objective(t, b, i, j), g2_polytope(t, i, j)}, {agent_obj});
      const double a = agent_obj.dot(*s.point);
      if (a < out.agent - 1e-12) {
        out.agent = a;
        out.response1 = static_cast<int>(i);
        out.response2 = static_cast<int>(j);
      }
    }
  return out;
}

/// Bayesian game: only the agent sees the state; the principal commits to one
/// state-independent scheme.
inline EquilibriumReport solve_g2(const CostTable& t, Belief b) {
  const G2Value v = g2_value(t, b, true);
  const lp::LinearProgram program{g2_principal_objective(t, b, v.response1, v.response2),
                                  g2_polytope(t, v.response1, v.response2)};
  const lp::LpSolution s = lp::solve_lp_canonical(program, {g2_agent_objective(t, b, v.response1, v.response2)});
  EquilibriumReport report;
  report.schemes.push_back(IncentiveScheme::from_stacked(*s.point, t.rows(), t.cols()));
  report.agent_actions = {v.response1, v.response2};
  evaluate_costs(t, b, report);
  return report;
}

/// Principal (and optionally agent) equilibrium cost of the Bayesian game
/// sampled on a uniform belief grid.
struct ValueCurve {
  std::vector<double> beliefs;
  std::vector<double> principal;
  std::vector<double> agent;  // empty unless requested
};

inline ValueCurve g2_curve(const CostTable& t, int grid_size, bool with_agent = true) {
  ValueCurve c;
  c.beliefs = belief_grid(grid_size);
  for (double p : c.beliefs) {
    const G2Value v = g2_value(t, Belief(p), with_agent);
    c.principal.push_back(v.principal);
    if (with_agent) c.agent.push_back(v.agent);
  }
  return c;
}

inline std::vector<double> principal_value_curve(const CostTable& t, int grid_size) {
  return g2_curve(t, grid_size, false).principal;
}

/// Vertices of one response pair's polytope.
struct XiGroup {
  int response1 = 0;
  int response2 = 0;
  std::vector<IncentiveScheme> vertices;
};

/// The principal's effective action set under persuasion: vertices of every
/// response pair's (belief-independent) scheme polytope.
struct Xi {
  std::vector<XiGroup> groups;

  std::vector<IncentiveScheme> distinct() const {
    std::vector<IncentiveScheme> out;
    for (const auto& g : groups)
      for (const auto& v : g.vertices)
        if (std::none_of(out.begin(), out.end(), [&](const IncentiveScheme& u) { return u.approx_equal(v); }))
          out.push_back(v);
    return out;
  }
  const XiGroup& group(int r1, int r2) const {
    for (const auto& g : groups)
      if (g.response1 == r1 && g.response2 == r2) return g;
    throw InputError("no such response pair");
  }
};

inline Xi collect_xi(const CostTable& t) {
  Xi xi;
  for (Eigen::Index i = 0; i < t.cols(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      XiGroup g{static_cast<int>(i), static_cast<int>(j), {}};
      for (const auto& v : lp::enumerate_vertices(g2_polytope(t, i, j)))
        g.vertices.push_back(IncentiveScheme::from_stacked(v, t.rows(), t.cols()));
      xi.groups.push_back(std::move(g));
    }
  return xi;
}

/// One recommendation the agent may send: a scheme together with the response
/// pair it induces, and its per-state sending probability.
struct Recommendation {
  int response1 = 0;
  int response2 = 0;
  IncentiveScheme scheme;
  std::array<double, 2> probability{};  // pi(recommendation | theta_k)
  std::array<double, 2> principal_cost{};
  std::array<double, 2> agent_cost{};
};

struct PersuasionReport {
  std::vector<Recommendation> recommendations;  // those sent with positive probability
  PosteriorSplit split;
  double principal_cost = 0.0;
  double agent_cost = 0.0;
  bool revealing() const { return split.atoms.size() > 1; }
};

namespace detail {

inline std::vector<Recommendation> recommendation_menu(const CostTable& t, const Xi& xi) {
  std::vector<Recommendation> menu;
  for (const auto& g : xi.groups)
    for (const auto& v : g.vertices) {
      Recommendation r{g.response1, g.response2, v, {0.0, 0.0},
                       {v.cost(t.principal(0), g.response1), v.cost(t.principal(1), g.response2)},
                       {v.cost(t.agent(0), g.response1), v.cost(t.agent(1), g.response2)}};
      // Recommendations with identical cost profiles are interchangeable.
      const bool duplicate = std::any_of(menu.begin(), menu.end(), [&](const Recommendation& o) {
        return std::abs(o.principal_cost[0] - r.principal_cost[0]) <= 1e-12 &&
               std::abs(o.principal_cost[1] - r.principal_cost[1]) <= 1e-12 &&
               std::abs(o.agent_cost[0] - r.agent_cost[0]) <= 1e-12 &&
               std::abs(o.agent_cost[1] - r.agent_cost[1]) <= 1e-12;
      });
      if (!duplicate) menu.push_back(std::move(r));
    }
  return menu;
}

// Drops recommendations weakly dominated in all four costs. Swapping one for
// its dominator keeps obedience and weakly improves both objectives.
inline std::vector<Recommendation> prune_dominated(std::vector<Recommendation> menu) {
  auto dominates = [](const Recommendation& a, const Recommendation& b) {
    return a.principal_cost[0] <= b.principal_cost[0] + 1e-12 && a.principal_cost[1] <= b.principal_cost[1] + 1e-12 &&
           a.agent_cost[0] <= b.agent_cost[0] + 1e-12 && a.agent_cost[1] <= b.agent_cost[1] + 1e-12;
  };
  std::vector<Recommendation> kept;
  for (std::size_t r = 0; r < menu.size(); ++r) {
    bool dominated = false;
    for (std::size_t o = 0; o < menu.size() && !dominated; ++o)
      dominated = o != r && dominates(menu[o], menu[r]) && (!dominates(menu[r], menu[o]) || o < r);
    if (!dominated) kept.push_back(menu[r]);
  }
  return kept;
}

// Principal cost profiles not weakly dominated by another; with nonnegative
// posterior weights these are the only deviations that can bind.
inline std::vector<std::array<double, 2>> undominated_deviations(const std::vector<Recommendation>& menu) {
  std::vector<std::array<double, 2>> pts;
  for (const auto& r : menu) pts.push_back(r.principal_cost);
  std::sort(pts.begin(), pts.end());
  std::vector<std::array<double, 2>> front;
  for (const auto& p : pts)
    if (front.empty() || p[1] < front.back()[1] - 1e-12) front.push_back(p);
  return front;
}

}  // namespace detail

/// Largest violation of the principal's obedience constraints by a signaling
/// policy (0 when every recommendation is a best reply to its posterior).
inline double obedience_violation(const CostTable& t, Belief prior, const PersuasionReport& r, const Xi& xi) {
  const auto menu = detail::recommendation_menu(t, xi);
  double worst = 0.0;
  for (const auto& rec : r.recommendations) {
    const double w1 = prior.p1() * rec.probability[0], w2 = prior.p2() * rec.probability[1];
    for (const auto& d : menu)
      worst = std::max(worst, w1 * (rec.principal_cost[0] - d.principal_cost[0]) +
                                  w2 * (rec.principal_cost[1] - d.principal_cost[1]));
  }
  return worst;
}

/// Persuasion game: the informed agent commits to a signaling policy that
/// recommends one of the vertex schemes; the principal must find following
/// the recommendation optimal. Returns the agent-optimal policy; among those
/// the one best for the principal; and if no information need be revealed to
/// reach those costs, the uninformative policy.
inline PersuasionReport solve_g3(const CostTable& t, Belief prior, const Xi& xi) {
  PersuasionReport report;
  auto no_revelation = [&]() {
    const EquilibriumReport g2 = solve_g2(t, prior);
    Recommendation r{g2.agent_actions[0], g2.agent_actions[1], g2.schemes[0], {1.0, 1.0},
                     {g2.principal_state_cost[0], g2.principal_state_cost[1]},
                     {g2.agent_state_cost[0], g2.agent_state_cost[1]}};
    report.recommendations = {r};
    report.split.atoms = {{prior, 1.0}};
    report.principal_cost = g2.principal_cost;
    report.agent_cost = g2.agent_cost;
    return report;
  };
  if (prior.degenerate()) return no_revelation();

  const auto all = detail::recommendation_menu(t, xi);
  const auto deviations = detail::undominated_deviations(all);
  const auto menu = detail::prune_dominated(all);
  const auto a = static_cast<Eigen::Index>(menu.size());
  const double mu1 = prior.p1(), mu2 = prior.p2();

  lp::Polytope feasible(2 * a);
  Eigen::RowVectorXd sum1 = Eigen::RowVectorXd::Zero(2 * a), sum2 = sum1;
  sum1.head(a).setOnes();
  sum2.tail(a).setOnes();
  feasible.add_equality(sum1, 1.0);
  feasible.add_equality(sum2, 1.0);
  for (Eigen::Index r = 0; r < a; ++r)
    for (const auto& d : deviations) {
      const double c1 = mu1 * (menu[r].principal_cost[0] - d[0]);
      const double c2 = mu2 * (menu[r].principal_cost[1] - d[1]);
      if (c1 <= 0.0 && c2 <= 0.0) continue;
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(2 * a);
      row[r] = c1;
      row[a + r] = c2;
      feasible.add_inequality(row, 0.0);
    }
  Eigen::VectorXd agent_obj(2 * a), principal_obj(2 * a);
  for (Eigen::Index r = 0; r < a; ++r) {
    agent_obj[r] = mu1 * menu[r].agent_cost[0];
    agent_obj[a + r] = mu2 * menu[r].agent_cost[1];
    principal_obj[r] = mu1 * menu[r].principal_cost[0];
    principal_obj[a + r] = mu2 * menu[r].principal_cost[1];
  }
  const lp::LpSolution s = lp::solve_lexicographic({agent_obj, feasible}, {principal_obj});
  if (!s.optimal()) throw SolverError("persuasion program has no optimum");
  const Eigen::VectorXd& x = *s.point;
  const double agent_value = *s.value;
  const double principal_value = principal_obj.dot(x);

  const G2Value silent = g2_value(t, prior, true);
  const double tol = kTieTol * std::max(1.0, std::abs(agent_value));
  if (silent.agent <= agent_value + tol && silent.principal <= principal_value + tol) return no_revelation();

  for (Eigen::Index r = 0; r < a; ++r) {
    const double marginal = mu1 * x[r] + mu2 * x[a + r];
    if (marginal <= 1e-12) continue;
    Recommendation rec = menu[r];
    rec.probability = {x[r], x[a + r]};
    report.recommendations.push_back(rec);
    report.split.atoms.push_back({Belief(std::clamp(mu1 * x[r] / marginal, 0.0, 1.0)), marginal});
  }
  report.split.merge();
  report.agent_cost = agent_value;
  report.principal_cost = principal_value;
  return report;
}

inline PersuasionReport solve_g3(const CostTable& t, Belief prior) { return solve_g3(t, prior, collect_xi(t)); }

struct AcquisitionReport {
  PosteriorSplit split;
  double gross_cost = 0.0;    // expected principal equilibrium cost over the split
  double channel_cost = 0.0;  // kappa * (1 - expected reference entropy)
  double total_cost = 0.0;
  double agent_cost = 0.0;
  double envelope_value = 0.0;
};

struct EnvelopeSamples {
  std::vector<double> beliefs;
  std::vector<double> values;
};

/// Samples of J_P2 - kappa * H~ on the curve's grid, with the prior inserted
/// so the envelope is exact there.
inline EnvelopeSamples acquisition_samples(const CostTable& t, const ValueCurve& curve, Belief prior, double kappa) {
  if (prior.degenerate()) throw InputError("costly acquisition needs an interior prior");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be finite and nonnegative");
  EnvelopeSamples out;
  bool inserted = false;
  for (std::size_t k = 0; k < curve.beliefs.size(); ++k) {
    const double p = curve.beliefs[k];
    if (!inserted && p >= prior.p1()) {
      if (p != prior.p1()) {
        out.beliefs.push_back(prior.p1());
        out.values.push_back(g2_value(t, prior, false).principal - kappa * tilde_entropy(prior, prior));
      }
      inserted = true;
    }
    out.beliefs.push_back(p);
    out.values.push_back(curve.principal[k] - kappa * tilde_entropy(Belief(p), prior));
  }
  return out;
}

/// Costly acquisition: the principal buys a signal whose price is kappa times
/// the entropy reduction it causes on a uniform reference belief. Solved by
/// convexifying J_P2 - kappa * H~ on the sampled curve.
inline AcquisitionReport solve_g4(const CostTable& t, const ValueCurve& curve, Belief prior, double kappa) {
  EnvelopeSamples samples = acquisition_samples(t, curve, prior, kappa);
  const EnvelopeResult env = ConvexEnvelope(std::move(samples.beliefs), std::move(samples.values)).evaluate(prior.p1());

  AcquisitionReport r;
  r.split = env.split;
  r.envelope_value = env.value;
  for (const auto& atom : r.split.atoms) {
    const G2Value v = g2_value(t, atom.posterior, true);
    r.gross_cost += atom.weight * v.principal;
    r.agent_cost += atom.weight * v.agent;
    r.channel_cost += atom.weight * (1.0 - tilde_entropy(atom.posterior, prior));
  }
  r.channel_cost *= kappa;
  r.total_cost = r.gross_cost + r.channel_cost;
  return r;
}

inline AcquisitionReport solve_g4(const CostTable& t, Belief prior, double kappa, int grid_size = 2001) {
  return solve_g4(t, g2_curve(t, grid_size, false), prior, kappa);
}

}  // namespace incentive::matrix
