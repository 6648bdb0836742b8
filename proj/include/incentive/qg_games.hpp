#pragma once

// Scalar quadratic-Gaussian incentive game
//   c_P(u,v;theta) = (theta-u-v)^2 + 2u^2 + beta v^2
//   c_A(u,v;theta) = (theta-u-v)^2 + v^2
// with theta ~ N(z0, sigma0^2), under affine (mean) feedback policies
//   gamma(v) = intercept_slope * m + q * v,
// where m is theta when the principal is informed and the posterior mean
// otherwise. Information, when it flows, goes through s = theta + w with
// w ~ N(0, sigma_w^2).

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "incentive/error.hpp"
#include "incentive/golden_section.hpp"

namespace incentive::qg {

inline constexpr double kNoChannel = std::numeric_limits<double>::infinity();

struct QGParams {
  double beta = 1.0;
  double z0 = 0.0;
  double sigma0_sq = 0.0;
  double kappa = 0.0;
  double sigma_w_sq = kNoChannel;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be positive and finite");
    if (!std::isfinite(z0)) throw InputError("z0 must be finite");
    if (!(sigma0_sq >= 0.0) || !std::isfinite(sigma0_sq)) throw InputError("sigma0_sq must be nonnegative and finite");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InputError("kappa must be nonnegative and finite");
    if (!(sigma_w_sq > 0.0)) throw InputError("sigma_w_sq must be positive (or infinite)");
  }
};

enum class Game { G1, G2, G3, G4 };

inline std::string to_string(Game g) {
  switch (g) {
    case Game::G1: return "G1";
    case Game::G2: return "G2";
    case Game::G3: return "G3";
    case Game::G4: return "G4";
  }
  return "?";
}

struct AffinePolicy {
  double ut_slope = 0.0;  // u^t = ut_slope * theta
  double vt_slope = 0.0;  // v^t = vt_slope * theta
  double q = 0.0;
  double intercept_slope = 0.0;

  double operator()(double v, double conditioning_mean) const { return intercept_slope * conditioning_mean + q * v; }
};

/// Distribution of the principal's posterior: z_s ~ N(z0, zs_var) and the
/// posterior variance sigma_s^2 is deterministic.
struct PosteriorStats {
  double sigma_w_sq = kNoChannel;
  double zs_mean = 0.0;
  double zs_var = 0.0;
  double posterior_var = 0.0;
};

struct QGReport {
  Game game = Game::G1;
  double principal_cost = 0.0;
  double agent_cost = 0.0;
  AffinePolicy policy;
  std::optional<double> channel;  // chosen sigma_w^2; +inf means no information
  PosteriorStats posterior;
  double f_beta = 0.0;  // set for G3
  bool revelation = false;
  bool tie = false;
  double channel_cost = 0.0;  // G4 only, included in principal_cost
};

inline double optimal_q(double beta) { return (1.0 - beta) / beta; }

inline AffinePolicy mean_feedback_policy(double beta) {
  AffinePolicy p;
  p.ut_slope = beta / (3.0 * beta + 2.0);
  p.vt_slope = 2.0 / (3.0 * beta + 2.0);
  p.q = optimal_q(beta);
  p.intercept_slope = p.ut_slope - p.q * p.vt_slope;
  return p;
}

inline std::pair<double, double> qg_team_solution(const QGParams& p) {
  p.validate();
  const auto pol = mean_feedback_policy(p.beta);
  return {pol.ut_slope, pol.vt_slope};
}

/// Agent's response to the mean-feedback policy built on mean z.
inline double agent_response(double beta, double theta, double z) {
  return (beta * (3.0 * beta + 2.0) * theta - (beta * beta + 2.0 * beta - 2.0) * z) /
         ((beta * beta + 1.0) * (3.0 * beta + 2.0));
}

inline double principal_cost(double beta, double u, double v, double theta) {
  const double e = theta - u - v;
  return e * e + 2.0 * u * u + beta * v * v;
}

inline double agent_cost(double u, double v, double theta) {
  const double e = theta - u - v;
  return e * e + v * v;
}

namespace detail {
inline double principal_mean_coef(double beta) { return 2.0 * beta / (3.0 * beta + 2.0); }
inline double principal_var_coef(double beta) {
  const double b2 = beta * beta;
  return (b2 * b2 + b2 * beta + 2.0 * b2 - 4.0 * beta + 2.0) / (b2 * b2 + 2.0 * b2 + 1.0);
}
inline double agent_mean_coef(double beta) {
  return 4.0 * (beta * beta + 1.0) / (9.0 * beta * beta + 12.0 * beta + 4.0);
}
inline double agent_var_coef(double beta) { return beta * beta / (beta * beta + 1.0); }
}  // namespace detail

inline PosteriorStats posterior_stats(const QGParams& p, double sigma_w_sq) {
  if (!(sigma_w_sq >= 0.0)) throw InputError("sigma_w_sq must be nonnegative");
  PosteriorStats s;
  s.sigma_w_sq = sigma_w_sq;
  s.zs_mean = p.z0;
  if (std::isinf(sigma_w_sq)) {
    s.zs_var = 0.0;
    s.posterior_var = p.sigma0_sq;
  } else if (p.sigma0_sq + sigma_w_sq == 0.0) {
    s.zs_var = 0.0;
    s.posterior_var = 0.0;
  } else {
    s.zs_var = p.sigma0_sq * p.sigma0_sq / (p.sigma0_sq + sigma_w_sq);
    s.posterior_var = p.sigma0_sq * sigma_w_sq / (p.sigma0_sq + sigma_w_sq);
  }
  return s;
}

inline QGReport qg_g1(const QGParams& p) {
  p.validate();
  const double m2 = p.z0 * p.z0 + p.sigma0_sq;
  const double b = p.beta;
  QGReport r;
  r.game = Game::G1;
  r.policy = mean_feedback_policy(b);
  r.principal_cost = 2.0 * b * m2 / (3.0 * b + 2.0);
  r.agent_cost = 4.0 * (b * b + 1.0) * m2 / ((3.0 * b + 2.0) * (3.0 * b + 2.0));
  r.channel = 0.0;
  r.posterior = posterior_stats(p, 0.0);
  r.revelation = true;
  return r;
}

/// Mean-feedback equilibrium when the principal's belief is N(mean, var).
inline QGReport qg_g2(const QGParams& p, double belief_mean, double belief_var) {
  p.validate();
  if (!std::isfinite(belief_mean)) throw InputError("belief mean must be finite");
  if (!(belief_var >= 0.0) || !std::isfinite(belief_var)) throw InputError("belief variance must be nonnegative");
  const double b = p.beta;
  QGReport r;
  r.game = Game::G2;
  r.policy = mean_feedback_policy(b);
  r.principal_cost = detail::principal_mean_coef(b) * belief_mean * belief_mean + detail::principal_var_coef(b) * belief_var;
  r.agent_cost = detail::agent_mean_coef(b) * belief_mean * belief_mean + detail::agent_var_coef(b) * belief_var;
  r.channel = kNoChannel;
  r.posterior.sigma_w_sq = kNoChannel;
  r.posterior.zs_mean = belief_mean;
  r.posterior.posterior_var = belief_var;
  return r;
}

inline QGReport qg_g2(const QGParams& p) { return qg_g2(p, p.z0, p.sigma0_sq); }

inline double f_beta(double beta) {
  if (!(beta > 0.0)) throw InputError("beta must be positive");
  return detail::agent_mean_coef(beta) - detail::agent_var_coef(beta);
}

/// Expected (principal, agent) costs when the principal sees s = theta + w
/// and plays mean feedback on z_s. Channel cost is not included.
inline std::pair<double, double> channel_costs(const QGParams& p, double sigma_w_sq) {
  const auto s = posterior_stats(p, sigma_w_sq);
  const double b = p.beta;
  const double zs2 = p.z0 * p.z0 + s.zs_var;
  return {detail::principal_mean_coef(b) * zs2 + detail::principal_var_coef(b) * s.posterior_var,
          detail::agent_mean_coef(b) * zs2 + detail::agent_var_coef(b) * s.posterior_var};
}

/// Agent-driven disclosure: the agent picks sigma_w in {0, inf} by the sign
/// of f(beta). A zero f is reported as no revelation with tie set.
inline QGReport qg_g3(const QGParams& p) {
  p.validate();
  const double f = f_beta(p.beta);
  QGReport r;
  if (f < 0.0) {
    r = qg_g1(p);
    r.revelation = true;
  } else {
    r = qg_g2(p);
    r.posterior = posterior_stats(p, kNoChannel);
    r.revelation = false;
    r.tie = f == 0.0;
  }
  r.game = Game::G3;
  r.f_beta = f;
  return r;
}

inline double qg_channel_cost(double kappa, double sigma_w_sq) {
  if (std::isinf(sigma_w_sq)) return 0.0;
  if (sigma_w_sq <= 0.0) return kappa > 0.0 ? kNoChannel : 0.0;
  return 0.5 * kappa * std::log1p(1.0 / sigma_w_sq);
}

/// Principal's total cost (natural-log channel cost) for a given channel.
inline double qg_g4_cost(const QGParams& p, double sigma_w_sq) {
  p.validate();
  if (std::isnan(sigma_w_sq)) throw InputError("sigma_w_sq is NaN");
  if (sigma_w_sq <= 0.0) return kNoChannel;
  return channel_costs(p, sigma_w_sq).first + qg_channel_cost(p.kappa, sigma_w_sq);
}

inline constexpr double kSweepLow = 1e-6;
inline constexpr double kSweepHigh = 1e6;
inline constexpr int kSweepPoints = 200;

/// 200 log-spaced channel variances in [1e-6, 1e6].
inline std::vector<double> sigma_w_sweep(int points = kSweepPoints) {
  if (points < 2) throw InputError("sweep needs at least two points");
  std::vector<double> out(points);
  const double lo = std::log10(kSweepLow), hi = std::log10(kSweepHigh);
  for (int i = 0; i < points; ++i) out[i] = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
  return out;
}

inline QGReport qg_g4_report(const QGParams& p, double sigma_w_sq) {
  QGReport r;
  r.game = Game::G4;
  r.policy = mean_feedback_policy(p.beta);
  const auto [jp, ja] = channel_costs(p, sigma_w_sq);
  r.channel_cost = qg_channel_cost(p.kappa, sigma_w_sq);
  r.principal_cost = jp + r.channel_cost;
  r.agent_cost = ja;
  r.channel = sigma_w_sq;
  r.posterior = posterior_stats(p, sigma_w_sq);
  r.revelation = !std::isinf(sigma_w_sq);
  return r;
}

/// Grid sweep, golden-section refinement in log(sigma_w^2) around the best
/// grid point, then comparison with not acquiring at all.
inline QGReport qg_g4_optimize(const QGParams& p) {
  p.validate();
  const auto grid = sigma_w_sweep();
  std::size_t best = 0;
  double best_cost = kNoChannel;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double c = qg_g4_cost(p, grid[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  const double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  const double hi = std::log(grid[best + 1 == grid.size() ? best : best + 1]);
  const auto refined = golden_section_minimize([&](double t) { return qg_g4_cost(p, std::exp(t)); }, lo, hi, 1e-8);
  double arg = grid[best];
  if (refined.value < best_cost) {
    arg = std::exp(refined.x);
    best_cost = refined.value;
  }
  if (qg_g4_cost(p, kNoChannel) <= best_cost) arg = kNoChannel;
  return qg_g4_report(p, arg);
}

}  // namespace incentive::qg
