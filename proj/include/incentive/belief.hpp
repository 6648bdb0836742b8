#pragma once

// Two-state belief arithmetic: Bayes updates, entropies, posterior splits and
// lower convex envelopes of functions of the belief.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "incentive/error.hpp"

namespace incentive {

/// Probability of state theta_1 in a two-state world.
class Belief {
 public:
  constexpr Belief() = default;
  explicit Belief(double p1) : p1_(p1) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) throw InputError("belief must lie in [0,1], got " + std::to_string(p1));
  }

  constexpr double p1() const { return p1_; }
  constexpr double p2() const { return 1.0 - p1_; }
  constexpr double operator[](int state) const { return state == 0 ? p1_ : 1.0 - p1_; }
  constexpr bool degenerate() const { return p1_ == 0.0 || p1_ == 1.0; }

 private:
  double p1_ = 0.5;
};

/// likelihoods(s, k) = pi(s | theta_k). Each column sums to one.
class SignalingScheme {
 public:
  explicit SignalingScheme(Eigen::MatrixX2d likelihoods) : l_(std::move(likelihoods)) {
    if (l_.rows() == 0) throw InputError("signaling scheme needs at least one signal");
    if ((l_.array() < 0.0).any()) throw InputError("signal likelihoods must be nonnegative");
    for (int k = 0; k < 2; ++k)
      if (std::abs(l_.col(k).sum() - 1.0) > 1e-10)
        throw InputError("signal likelihoods must sum to one in every state");
  }

  static SignalingScheme uninformative() { return SignalingScheme(Eigen::MatrixX2d::Ones(1, 2)); }
  static SignalingScheme fully_revealing() {
    Eigen::MatrixX2d l(2, 2);
    l << 1, 0, 0, 1;
    return SignalingScheme(l);
  }

  Eigen::Index signals() const { return l_.rows(); }
  double likelihood(Eigen::Index signal, int state) const { return l_(signal, state); }
  const Eigen::MatrixX2d& likelihoods() const { return l_; }

 private:
  Eigen::MatrixX2d l_;
};

struct Atom {
  Belief posterior;
  double weight = 0.0;
};

/// A finite distribution over posteriors.
struct PosteriorSplit {
  std::vector<Atom> atoms;

  double mean() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.weight * a.posterior.p1();
    return m;
  }
  double total_weight() const {
    double w = 0.0;
    for (const auto& a : atoms) w += a.weight;
    return w;
  }
  bool bayes_plausible(Belief prior, double tol = 1e-9) const {
    return std::abs(total_weight() - 1.0) <= 1e-10 && std::abs(mean() - prior.p1()) <= tol;
  }
  /// Expected value of f over the posteriors.
  template <class F>
  double expect(F&& f) const {
    double e = 0.0;
    for (const auto& a : atoms) e += a.weight * f(a.posterior);
    return e;
  }
  /// Merges atoms whose posteriors agree within tol, keeping first-seen order.
  void merge(double tol = 1e-9) {
    std::vector<Atom> merged;
    for (const auto& a : atoms) {
      auto it = std::find_if(merged.begin(), merged.end(), [&](const Atom& b) {
        return std::abs(b.posterior.p1() - a.posterior.p1()) <= tol;
      });
      if (it == merged.end())
        merged.push_back(a);
      else
        it->weight += a.weight;
    }
    atoms = std::move(merged);
  }
};

inline double signal_probability(Belief prior, const SignalingScheme& scheme, Eigen::Index s) {
  return scheme.likelihood(s, 0) * prior.p1() + scheme.likelihood(s, 1) * prior.p2();
}

inline Belief bayes_posterior(Belief prior, const SignalingScheme& scheme, Eigen::Index signal) {
  if (signal < 0 || signal >= scheme.signals()) throw InputError("signal index out of range");
  const double marginal = signal_probability(prior, scheme, signal);
  if (!(marginal > 0.0)) throw InputError("signal has zero probability under the prior");
  return Belief(std::clamp(scheme.likelihood(signal, 0) * prior.p1() / marginal, 0.0, 1.0));
}

/// Distribution over posteriors induced by a signaling scheme; one atom per
/// signal with positive probability.
inline PosteriorSplit induced_split(Belief prior, const SignalingScheme& scheme) {
  PosteriorSplit split;
  for (Eigen::Index s = 0; s < scheme.signals(); ++s) {
    const double w = signal_probability(prior, scheme, s);
    if (w > 0.0) split.atoms.push_back({bayes_posterior(prior, scheme, s), w});
  }
  return split;
}

/// Base-2 entropy, so the uniform belief has entropy one.
inline double binary_entropy(Belief b) {
  auto term = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
  return term(b.p1()) + term(b.p2());
}

/// Image of `posterior` under the Bayes map that sends `prior` to the
/// uniform reference belief via the same signaling scheme.
inline Belief reference_transform(Belief posterior, Belief prior) {
  if (prior.degenerate()) throw InputError("reference transform needs an interior prior");
  const double a = posterior.p1() / prior.p1();
  const double b = posterior.p2() / prior.p2();
  return Belief(std::clamp(a / (a + b), 0.0, 1.0));
}

inline double tilde_entropy(Belief posterior, Belief prior) {
  return binary_entropy(reference_transform(posterior, prior));
}

/// Uniform grid over [0,1] with `n` points, endpoints exact.
inline std::vector<double> belief_grid(int n) {
  if (n < 2) throw InputError("belief grid needs at least two points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
  return g;
}

struct EnvelopeResult {
  double value = 0.0;
  PosteriorSplit split;
};

/// Lower convex envelope of sampled points (x ascending), built once and
/// evaluated at any number of queries in [x.front(), x.back()].
class ConvexEnvelope {
 public:
  ConvexEnvelope(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InputError("envelope needs matching samples");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InputError("envelope sample is not finite");
      if (i > 0 && !(xs[i] > xs[i - 1])) throw InputError("envelope abscissae must increase");
    }
    // Andrew's monotone chain, lower half only.
    for (std::size_t i = 0; i < xs.size(); ++i) {
      while (hull_.size() >= 2) {
        const auto& o = hull_[hull_.size() - 2];
        const auto& a = hull_.back();
        const double cross = (a.x - o.x) * (ys[i] - o.y) - (a.y - o.y) * (xs[i] - o.x);
        if (cross <= 0.0)
          hull_.pop_back();
        else
          break;
      }
      hull_.push_back({xs[i], ys[i]});
    }
  }

  struct Vertex {
    double x, y;
  };
  const std::vector<Vertex>& vertices() const { return hull_; }

  EnvelopeResult evaluate(double q) const {
    if (q < hull_.front().x - 1e-12 || q > hull_.back().x + 1e-12)
      throw InputError("envelope query outside sampled range");
    auto it = std::lower_bound(hull_.begin(), hull_.end(), q,
                               [](const Vertex& v, double x) { return v.x < x; });
    EnvelopeResult r;
    if (it != hull_.begin() && std::abs((it - 1)->x - q) <= 1e-12) --it;
    if (it != hull_.end() && std::abs(it->x - q) <= 1e-12) {
      r.value = it->y;
      r.split.atoms = {{Belief(clamp01(it->x)), 1.0}};
      return r;
    }
    if (it == hull_.end()) --it;
    if (it == hull_.begin()) ++it;
    const Vertex& right = *it;
    const Vertex& left = *(it - 1);
    const double w_right = (q - left.x) / (right.x - left.x);
    r.value = (1.0 - w_right) * left.y + w_right * right.y;
    r.split.atoms = {{Belief(clamp01(left.x)), 1.0 - w_right}, {Belief(clamp01(right.x)), w_right}};
    return r;
  }

  double operator()(double q) const { return evaluate(q).value; }

 private:
  static double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }
  std::vector<Vertex> hull_;
};

/// Samples f on a uniform grid of `grid_size` beliefs and evaluates the lower
/// convex envelope of the samples at `query`, with its supporting split.
inline EnvelopeResult lower_convex_envelope(const std::function<double(Belief)>& f, Belief query,
                                            int grid_size = 2001) {
  if (grid_size < 3) throw InputError("envelope grid needs at least three points");
  std::vector<double> xs = belief_grid(grid_size);
  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(Belief(xs[i]));
  return ConvexEnvelope(std::move(xs), std::move(ys)).evaluate(query.p1());
}

}  // namespace incentive
