#pragma once

// Brute-force cross-checks. None of these share a minimisation routine with
// the solver they check: matrix values come from exhaustive vertex
// enumeration, envelopes from all bracketing pairs, QG costs from playouts.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "incentive/belief.hpp"
#include "incentive/error.hpp"
#include "incentive/lp_kernel.hpp"
#include "incentive/matrix_games.hpp"
#include "incentive/qg_games.hpp"

namespace incentive::oracle {

inline constexpr std::uint64_t kDefaultSeed = 20240611;

struct OracleReport {
  std::string quantity;
  double solver_value = 0.0;
  double oracle_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

inline OracleReport compare(std::string quantity, double solver, double oracle, double tolerance,
                            std::uint64_t seed = 0) {
  const bool pass = std::abs(solver - oracle) <= tolerance || (std::isinf(solver) && solver == oracle);
  return {std::move(quantity), solver, oracle, tolerance, pass, seed};
}

/// Vertex lists of every response pair's polytope, indexed i * n + j.
inline std::vector<std::vector<Eigen::VectorXd>> pair_vertices(const matrix::CostTable& t) {
  const Eigen::Index n = t.cols();
  std::vector<std::vector<Eigen::VectorXd>> out(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out[i * n + j] = lp::enumerate_vertices(matrix::g2_polytope(t, i, j));
  return out;
}

inline double oracle_g2_by_enumeration(const matrix::CostTable& t, Belief b,
                                       const std::vector<std::vector<Eigen::VectorXd>>& vertices) {
  const Eigen::Index n = t.cols();
  if (static_cast<Eigen::Index>(vertices.size()) != n * n) throw InputError("vertex lists do not match the table");
  double best = lp::kInfinity;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXd c = matrix::g2_principal_objective(t, b, i, j);
      for (const auto& v : vertices[i * n + j]) best = std::min(best, c.dot(v));
    }
  if (!std::isfinite(best)) throw SolverError("no vertex in any response-pair polytope");
  return best;
}

inline double oracle_g2_by_enumeration(const matrix::CostTable& t, Belief b) {
  if (t.rows() > 4 || t.cols() > 4) throw InputError("enumeration oracle is limited to 4x4 tables");
  return oracle_g2_by_enumeration(t, b, pair_vertices(t));
}

/// Full-information value in one state, by enumeration.
inline double oracle_g1_by_enumeration(const matrix::CostTable& t, int state) {
  if (t.rows() > 4 || t.cols() > 4) throw InputError("enumeration oracle is limited to 4x4 tables");
  const Eigen::Index m = t.rows();
  double best = lp::kInfinity;
  for (Eigen::Index j = 0; j < t.cols(); ++j)
    for (const auto& v : lp::enumerate_vertices(matrix::g1_polytope(t, state, j)))
      best = std::min(best, v.segment(j * m, m).dot(t.principal(state).col(j)));
  if (!std::isfinite(best)) throw SolverError("no inducible agent action");
  return best;
}

/// Smallest Bayes-plausible mixture of at most two samples with mean q.
inline double oracle_envelope_by_pairs(const std::vector<double>& xs, const std::vector<double>& ys, double q) {
  if (xs.size() != ys.size() || xs.empty()) throw InputError("envelope oracle needs matching samples");
  double best = lp::kInfinity;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > q) continue;
    if (xs[i] == q) {
      best = std::min(best, ys[i]);
      continue;
    }
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (xs[j] <= q) continue;
      const double w = (q - xs[i]) / (xs[j] - xs[i]);
      best = std::min(best, (1.0 - w) * ys[i] + w * ys[j]);
    }
  }
  if (!std::isfinite(best)) throw InputError("query outside sampled range");
  return best;
}

struct MonteCarloEstimate {
  double principal = 0.0;
  double principal_stderr = 0.0;
  double agent = 0.0;
  double agent_stderr = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct RunningMean {
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stderr_of_mean() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0; }
};

}  // namespace detail

/// Plays the game: draws theta (and channel noise), forms the principal's
/// conditioning mean, lets the agent minimise its quadratic cost against the
/// committed affine policy, and averages the realised costs. G3 uses the
/// channel the agent would choose; G4 uses p.sigma_w_sq and adds the channel
/// price to the principal.
inline MonteCarloEstimate oracle_qg_montecarlo(const qg::QGParams& p, qg::Game game, std::size_t n_samples,
                                               std::uint64_t seed = kDefaultSeed) {
  p.validate();
  if (n_samples == 0) throw InputError("need at least one sample");
  double sigma_w_sq = qg::kNoChannel;
  switch (game) {
    case qg::Game::G1: sigma_w_sq = 0.0; break;
    case qg::Game::G2: sigma_w_sq = qg::kNoChannel; break;
    case qg::Game::G3: sigma_w_sq = qg::f_beta(p.beta) < 0.0 ? 0.0 : qg::kNoChannel; break;
    case qg::Game::G4: sigma_w_sq = p.sigma_w_sq; break;
  }
  const double channel = game == qg::Game::G4 ? qg::qg_channel_cost(p.kappa, sigma_w_sq) : 0.0;

  const double b = p.beta;
  const double q = (1.0 - b) / b;
  const double ut = b / (3.0 * b + 2.0), vt = 2.0 / (3.0 * b + 2.0);
  const double sigma0 = std::sqrt(p.sigma0_sq);
  const double sigma_w = std::isinf(sigma_w_sq) ? 0.0 : std::sqrt(sigma_w_sq);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  detail::RunningMean jp, ja;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double theta = p.z0 + sigma0 * normal(rng);
    double z = p.z0;
    if (sigma_w_sq == 0.0) {
      z = theta;
    } else if (!std::isinf(sigma_w_sq)) {
      const double s = theta + sigma_w * normal(rng);
      z = (sigma_w_sq * p.z0 + p.sigma0_sq * s) / (p.sigma0_sq + sigma_w_sq);
    }
    // gamma(v) = u^t(z) + q (v - v^t(z)) = a + q v.
    const double a = (ut - q * vt) * z;
    const double v = (1.0 + q) * (theta - a) / ((1.0 + q) * (1.0 + q) + 1.0);
    const double u = a + q * v;
    jp.add(qg::principal_cost(b, u, v, theta) + channel);
    ja.add(qg::agent_cost(u, v, theta));
  }
  return {jp.mean, jp.stderr_of_mean(), ja.mean, ja.stderr_of_mean(), n_samples, seed};
}

struct ChannelMoments {
  double theta_zs = 0.0, theta_zs_stderr = 0.0;
  double zs_sq = 0.0, zs_sq_stderr = 0.0;
};

/// Sample estimates of E[theta z_s] and E[z_s^2] for a finite channel.
inline ChannelMoments oracle_channel_moments(const qg::QGParams& p, double sigma_w_sq, std::size_t n_samples,
                                             std::uint64_t seed = kDefaultSeed) {
  p.validate();
  if (!(sigma_w_sq > 0.0) || std::isinf(sigma_w_sq)) throw InputError("channel variance must be positive and finite");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  detail::RunningMean tz, zz;
  const double sigma0 = std::sqrt(p.sigma0_sq), sigma_w = std::sqrt(sigma_w_sq);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double theta = p.z0 + sigma0 * normal(rng);
    const double s = theta + sigma_w * normal(rng);
    const double z = (sigma_w_sq * p.z0 + p.sigma0_sq * s) / (p.sigma0_sq + sigma_w_sq);
    tz.add(theta * z);
    zz.add(z * z);
  }
  return {tz.mean, tz.stderr_of_mean(), zz.mean, zz.stderr_of_mean()};
}

struct DenseMinimum {
  double sigma_w_sq = qg::kNoChannel;
  double cost = 0.0;
};

/// Exhaustive log-spaced scan of the acquisition cost, plus no acquisition.
inline DenseMinimum oracle_qg_g4_dense(const qg::QGParams& p, int points = 100000) {
  if (points < 2) throw InputError("dense scan needs at least two points");
  DenseMinimum best{qg::kNoChannel, qg::qg_g4_cost(p, qg::kNoChannel)};
  const double lo = std::log10(qg::kSweepLow), hi = std::log10(qg::kSweepHigh);
  for (int i = 0; i < points; ++i) {
    const double s = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
    const double c = qg::qg_g4_cost(p, s);
    if (c < best.cost) best = {s, c};
  }
  return best;
}

/// Upper bound on |d J_A2 / d mu| on any affine piece.
inline double agent_slope_bound(const matrix::CostTable& t) {
  const double hi = std::max(t.agent(0).maxCoeff(), t.agent(1).maxCoeff());
  const double lo = std::min(t.agent(0).minCoeff(), t.agent(1).minCoeff());
  return hi - lo;
}

/// Oracle checks for one matrix scenario at its prior.
inline std::vector<OracleReport> matrix_suite(const matrix::CostTable& t, Belief prior, double kappa,
                                              int grid_size = 2001) {
  std::vector<OracleReport> out;
  const auto vertices = pair_vertices(t);
  const auto g1 = matrix::solve_g1(t, prior);
  for (int k = 0; k < 2; ++k)
    out.push_back(compare("g1 principal cost, state " + std::to_string(k + 1), g1.principal_state_cost[k],
                          oracle_g1_by_enumeration(t, k), 1e-8));
  out.push_back(compare("g2 principal cost", matrix::solve_g2(t, prior).principal_cost,
                        oracle_g2_by_enumeration(t, prior, vertices), 1e-8));

  const auto curve = matrix::g2_curve(t, grid_size, true);
  const double step = 1.0 / (grid_size - 1);
  if (!prior.degenerate()) {
    const auto g3 = matrix::solve_g3(t, prior);
    out.push_back(compare("g3 agent cost vs envelope", g3.agent_cost,
                          oracle_envelope_by_pairs(curve.beliefs, curve.agent, prior.p1()),
                          2.0 * agent_slope_bound(t) * step + 1e-9));
    const auto samples = matrix::acquisition_samples(t, curve, prior, kappa);
    const auto g4 = matrix::solve_g4(t, curve, prior, kappa);
    out.push_back(compare("g4 envelope value", g4.envelope_value,
                          oracle_envelope_by_pairs(samples.beliefs, samples.values, prior.p1()), 1e-10));
  }
  for (std::size_t k = 0; k < curve.beliefs.size(); k += (grid_size - 1) / 20 > 0 ? (grid_size - 1) / 20 : 1)
    out.push_back(compare("g2 curve at " + std::to_string(curve.beliefs[k]), curve.principal[k],
                          oracle_g2_by_enumeration(t, Belief(curve.beliefs[k]), vertices), 1e-8));
  return out;
}

/// Oracle checks for one QG parameter set.
inline std::vector<OracleReport> qg_suite(const qg::QGParams& p, std::uint64_t seed = kDefaultSeed,
                                          std::size_t samples = 1000000) {
  std::vector<OracleReport> out;
  auto mc = [&](const std::string& label, qg::Game g, double solver_principal, double solver_agent) {
    const auto e = oracle_qg_montecarlo(p, g, samples, seed);
    out.push_back(compare(label + " principal cost", solver_principal, e.principal,
                          4.0 * e.principal_stderr + 1e-12, seed));
    out.push_back(compare(label + " agent cost", solver_agent, e.agent, 4.0 * e.agent_stderr + 1e-12, seed));
  };
  const auto g1 = qg::qg_g1(p);
  const auto g2 = qg::qg_g2(p);
  const auto g3 = qg::qg_g3(p);
  mc("g1", qg::Game::G1, g1.principal_cost, g1.agent_cost);
  mc("g2", qg::Game::G2, g2.principal_cost, g2.agent_cost);
  mc("g3", qg::Game::G3, g3.principal_cost, g3.agent_cost);

  const auto g4 = qg::qg_g4_optimize(p);
  const auto dense = oracle_qg_g4_dense(p);
  out.push_back(compare("g4 optimal cost", g4.principal_cost, dense.cost, 1e-6));
  if (g4.channel && !std::isinf(*g4.channel) && !std::isinf(dense.sigma_w_sq))
    out.push_back(compare("g4 log10 argmin", std::log10(*g4.channel), std::log10(dense.sigma_w_sq), 1e-4));
  if (g4.channel && !std::isinf(*g4.channel)) {
    qg::QGParams at = p;
    at.sigma_w_sq = *g4.channel;
    const auto e = oracle_qg_montecarlo(at, qg::Game::G4, samples, seed);
    out.push_back(compare("g4 principal cost at optimum", g4.principal_cost, e.principal,
                          4.0 * e.principal_stderr + 1e-12, seed));
  }
  return out;
}

}  // namespace incentive::oracle
