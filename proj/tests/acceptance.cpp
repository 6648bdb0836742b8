// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "incentive/cli.hpp"
#include "incentive/scenarios.hpp"
#include "test_support.hpp"

using namespace incentive;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Collects sub-check failures for one criterion.
struct Check {
  std::vector<std::string> failures;
  void near(const std::string& what, double got, double want, double tol) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s.precision(12);
      s << what << ": got " << got << ", want " << want << " +- " << tol;
      failures.push_back(s.str());
    }
  }
  void holds(const std::string& what, bool ok) {
    if (!ok) failures.push_back(what);
  }
  bool pass() const { return failures.empty(); }
};

struct Outcome {
  std::string id, title;
  Check check;
  double seconds = 0.0;
};

using Points = std::set<std::pair<double, double>>;

Points first_row_weights(const matrix::XiGroup& g) {
  Points out;
  for (const auto& v : g.vertices) out.insert({v.columns()(0, 0), v.columns()(0, 1)});
  return out;
}

std::string describe(const Points& p) {
  std::ostringstream s;
  s << "{";
  for (auto it = p.begin(); it != p.end(); ++it) s << (it == p.begin() ? "" : ", ") << "(" << it->first << "," << it->second << ")";
  return s.str() + "}";
}

double agent_slope_bound(const matrix::CostTable& t) { return oracle::agent_slope_bound(t); }

}  // namespace

int main() {
  const auto suite_start = Clock::now();
  const auto a = matrix::scenario_a();
  const auto b = matrix::scenario_b();
  constexpr int kGrid = 2001;
  std::vector<Outcome> outcomes;
  auto run = [&](const std::string& id, const std::string& title, const std::function<void(Check&)>& body) {
    Outcome o{id, title, {}, 0.0};
    const auto t0 = Clock::now();
    try {
      body(o.check);
    } catch (const std::exception& e) {
      o.check.failures.push_back(std::string("exception: ") + e.what());
    }
    o.seconds = seconds_since(t0);
    outcomes.push_back(std::move(o));
  };

  run("AC1", "matrix G1, scenario A at 0.4", [&](Check& c) {
    const auto t0 = Clock::now();
    const auto r = matrix::solve_g1(a, Belief(0.4));
    const double elapsed = seconds_since(t0);
    c.near("J_P1", r.principal_cost, 1.0, 1e-8);
    c.near("J_A1", r.agent_cost, 3.0, 1e-8);
    const double want[2][2][2] = {{{0.5, 0.5}, {0.0, 1.0}}, {{0.0, 1.0}, {1.0, 0.0}}};
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int u = 0; u < 2; ++u)
          c.near("state " + std::to_string(k + 1) + " column " + std::to_string(j + 1), r.schemes[k].columns()(u, j),
                 want[k][j][u], 1e-8);
    c.holds("runtime under 0.1 s", elapsed < 0.1);
  });

  run("AC2", "matrix G2, scenario A at 0.4", [&](Check& c) {
    const auto r = matrix::solve_g2(a, Belief(0.4));
    c.near("J_P2", r.principal_cost, 2.6, 1e-8);
    c.near("J_A2", r.agent_cost, 2.6, 1e-8);
    c.near("gamma(v1)[u1]", r.schemes[0].columns()(0, 0), 0.0, 1e-8);
    c.near("gamma(v1)[u2]", r.schemes[0].columns()(1, 0), 1.0, 1e-8);
    c.near("gamma(v2)[u1]", r.schemes[0].columns()(0, 1), 1.0, 1e-8);
    c.near("gamma(v2)[u2]", r.schemes[0].columns()(1, 1), 0.0, 1e-8);
  });

  // Shared by AC3, AC4 and AC9: scenarios A, B and 50 random 2x2/3x3 tables.
  std::vector<matrix::CostTable> tables = fixtures::random_tables(20240611, 50);
  tables.push_back(a);
  tables.push_back(b);
  std::vector<matrix::ValueCurve> curves;
  const auto curve_start = Clock::now();
  for (const auto& t : tables) curves.push_back(matrix::g2_curve(t, kGrid, true));
  const double curve_seconds = seconds_since(curve_start);

  run("AC3", "price of ignorance on 52 tables", [&](Check& c) {
    int violations = 0;
    for (std::size_t n = 0; n < tables.size(); ++n) {
      const auto g1 = matrix::solve_g1(tables[n], Belief(0.5));
      for (std::size_t k = 0; k < curves[n].beliefs.size(); ++k) {
        const double p = curves[n].beliefs[k];
        const double full = p * g1.principal_state_cost[0] + (1.0 - p) * g1.principal_state_cost[1];
        if (full > curves[n].principal[k] + 1e-8 && ++violations <= 3)
          c.near("table " + std::to_string(n) + " J_P1 - J_P2 at " + std::to_string(p), full - curves[n].principal[k], 0.0, 1e-8);
      }
    }
    c.holds(std::to_string(violations) + " grid points violate J_P1 <= J_P2", violations == 0);
  });

  run("AC4", "concavity of J_P2 and figure 1 endpoints", [&](Check& c) {
    int violations = 0;
    for (std::size_t n = 0; n < tables.size(); ++n) {
      const auto& y = curves[n].principal;
      for (std::size_t k = 1; k + 1 < y.size(); ++k)
        if (y[k] < 0.5 * (y[k - 1] + y[k + 1]) - 1e-8) ++violations;
    }
    c.holds(std::to_string(violations) + " midpoint-concavity violations", violations == 0);
    cli::Scenario s;
    s.table = a;
    s.prior = 0.4;
    const auto fig = cli::figure(1, s, kGrid);
    const auto g1 = matrix::solve_g1(a, Belief(0.5));
    c.near("figure 1 at belief 0", fig.rows.front()[1], g1.principal_state_cost[1], 1e-8);
    c.near("figure 1 at belief 1", fig.rows.back()[1], g1.principal_state_cost[0], 1e-8);
  });

  run("AC5", "matrix G3, scenario A agent cost curve", [&](Check& c) {
    const auto xi = matrix::collect_xi(a);
    for (int k = 0; k <= 100; ++k) {
      const double mu = k / 100.0;
      c.near("J_A3 at " + std::to_string(mu), matrix::solve_g3(a, Belief(mu), xi).agent_cost,
             mu <= 0.5 ? 3.0 - mu : 2.0 + mu, 1e-6);
    }
    c.holds("no revelation at 0.4", !matrix::solve_g3(a, Belief(0.4), xi).revealing());
  });

  run("AC6", "matrix G3, scenario B at 0.75", [&](Check& c) {
    const auto r = matrix::solve_g3(b, Belief(0.75));
    c.holds("two-atom split", r.split.atoms.size() == 2);
    if (r.split.atoms.size() == 2) {
      c.near("low posterior", r.split.atoms[0].posterior.p1(), 0.0, 1e-6);
      c.near("low weight", r.split.atoms[0].weight, 0.25, 1e-6);
      c.near("high posterior", r.split.atoms[1].posterior.p1(), 1.0, 1e-6);
      c.near("high weight", r.split.atoms[1].weight, 0.75, 1e-6);
    }
    c.near("J_A3", r.agent_cost, 1.75, 1e-6);
    c.near("J_P3", r.principal_cost, 1.0, 1e-6);
    const auto g2 = matrix::solve_g2(b, Belief(0.75));
    c.near("J_A2", g2.agent_cost, 2.0, 1e-6);
    c.near("J_P2", g2.principal_cost, 2.0, 1e-6);
  });

  run("AC7", "vertex groups of scenario A", [&](Check& c) {
    // Weight on u1 in gamma(v1) and gamma(v2), as printed for each group.
    const Points printed[2][2] = {{{{0.5, 1.0}}, {{0.0, 0.0}, {0.0, 1.0}, {0.5, 1.0}}},
                                  {{{0.5, 1.0}, {1.0, 0.0}}, {{0.5, 1.0}, {1.0, 0.0}}}};
    const auto xi = matrix::collect_xi(a);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const Points got = first_row_weights(xi.group(i, j));
        const std::string name = "Xi" + std::to_string(i + 1) + std::to_string(j + 1);
        c.holds(name + " contains every listed vertex",
                std::includes(got.begin(), got.end(), printed[i][j].begin(), printed[i][j].end()));
        c.holds(name + " = " + describe(got) + ", listed " + describe(printed[i][j]), got == printed[i][j]);
      }
  });

  run("AC8", "matrix G4, scenario B at 0.75", [&](Check& c) {
    const auto curve = matrix::g2_curve(b, kGrid, false);
    const auto r = matrix::solve_g4(b, curve, Belief(0.75), 2.0);
    c.holds("two-atom split", r.split.atoms.size() == 2);
    if (r.split.atoms.size() == 2) {
      c.near("low posterior", r.split.atoms[0].posterior.p1(), 0.01, 0.02);
      c.near("high posterior", r.split.atoms[1].posterior.p1(), 0.87, 0.02);
    }
    c.near("principal total", r.total_cost, 1.88, 0.02);
    c.near("agent", r.agent_cost, 1.75, 0.02);
    double last = -lp::kInfinity, at_large = 0.0;
    for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, 1e6}) {
      const double total = matrix::solve_g4(b, curve, Belief(0.75), k).total_cost;
      c.holds("total nondecreasing at kappa " + std::to_string(k), total >= last - 1e-12);
      last = at_large = total;
    }
    c.near("kappa 1e6 total vs J_P2(0.75)", at_large, matrix::g2_value(b, Belief(0.75), false).principal, 1e-4);
  });

  run("AC9", "persuasion LP equals agent envelope, 50 random tables", [&](Check& c) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0;
    for (std::size_t n = 0; n < 50; ++n) {
      const auto& t = tables[n];
      const auto xi = matrix::collect_xi(t);
      const ConvexEnvelope env(curves[n].beliefs, curves[n].agent);
      const double tol = 2.0 * agent_slope_bound(t) / 2000.0;
      for (int q = 0; q < 25; ++q) {
        double p = u(rng);
        if (p == 0.0) p = 0.5;
        const double lp_value = matrix::solve_g3(t, Belief(p), xi).agent_cost;
        if (std::abs(lp_value - env(p)) > tol && ++bad <= 3)
          c.near("table " + std::to_string(n) + " prior " + std::to_string(p), lp_value, env(p), tol);
      }
    }
    c.holds(std::to_string(bad) + " priors off the envelope", bad == 0);
  });

  run("AC10", "QG closed forms", [&](Check& c) {
    double worst = lp::kInfinity;
    for (int i = 1; i <= 20000; ++i) {
      const qg::QGParams p{20.0 * i / 20000.0, 1.0, 4.0};
      worst = std::min(worst, qg::qg_g2(p).principal_cost - qg::qg_g1(p).principal_cost);
    }
    c.holds("J_P2 - J_P1 >= -1e-12 on (0, 20]", worst >= -1e-12);
    const qg::QGParams root{std::sqrt(3.0) - 1.0, 1.0, 4.0};
    c.near("gap at sqrt(3)-1", qg::qg_g2(root).principal_cost - qg::qg_g1(root).principal_cost, 0.0, 1e-10);
    c.near("f(1)", qg::f_beta(1.0), -0.18, 1e-12);
    c.holds("beta 1 reveals", qg::qg_g3({1.0, 1.0, 4.0}).revelation);
    c.near("f(0.5)", qg::f_beta(0.5), 0.2082, 1e-4);
    c.holds("beta 0.5 withholds", !qg::qg_g3({0.5, 1.0, 4.0}).revelation);
    c.near("f(1e-6)", qg::f_beta(1e-6), 1.0, 1e-4);
    c.near("f(1e6)", qg::f_beta(1e6), -5.0 / 9.0, 1e-4);
  });

  run("AC11", "QG Monte-Carlo playout", [&](Check& c) {
    const qg::QGParams p{1.0, 1.0, 4.0};
    const auto t0 = Clock::now();
    const auto g1 = oracle::oracle_qg_montecarlo(p, qg::Game::G1, 1000000);
    const auto g2 = oracle::oracle_qg_montecarlo(p, qg::Game::G2, 1000000);
    c.near("J_P1 vs playout", qg::qg_g1(p).principal_cost, g1.principal, 4.0 * g1.principal_stderr);
    c.near("J_P2 vs playout", qg::qg_g2(p).principal_cost, g2.principal, 4.0 * g2.principal_stderr);
    c.holds("runtime under 10 s", seconds_since(t0) < 10.0);
  });

  run("AC12", "QG acquisition", [&](Check& c) {
    for (double beta : {0.5, 1.0}) {
      const qg::QGParams p{beta, 1.0, 4.0, 1.0};
      c.near("beta " + std::to_string(beta) + " cost at 1e12", qg::qg_g4_cost(p, 1e12), qg::qg_g2(p).principal_cost, 1e-5);
      const qg::QGParams free{beta, 1.0, 4.0, 0.0};
      c.near("beta " + std::to_string(beta) + " free information", qg::qg_g4_optimize(free).principal_cost,
             qg::qg_g1(free).principal_cost, 1e-5);
    }
    const std::string csv = "acceptance_figure4.csv";
    std::ostringstream out, err;
    const int code = cli::run({"figure", "4", std::string(INCENTIVE_SCENARIO_DIR) + "/qg_fig4.json", "--out", csv}, out, err);
    c.holds("figure 4 CSV emitted: " + err.str(), code == cli::kOk);
    std::ifstream in(csv);
    std::string header, line;
    std::getline(in, header);
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    c.holds("figure 4 CSV has 200 rows", rows == 200);
    for (double beta : {0.5, 1.0})
      for (double kappa : {0.5, 2.0}) {
        const std::string tag = "beta " + cli::fmt(beta) + " kappa " + cli::fmt(kappa);
        c.holds(tag + " column present",
                header.find("cost_beta_" + cli::fmt(beta) + "_kappa_" + cli::fmt(kappa)) != std::string::npos);
        const qg::QGParams p{beta, 1.0, 4.0, kappa};
        const auto r = qg::qg_g4_optimize(p);
        const auto dense = oracle::oracle_qg_g4_dense(p, 100000);
        c.holds(tag + " interior optimum", r.channel && std::isfinite(*r.channel) && std::isfinite(dense.sigma_w_sq));
        if (r.channel && std::isfinite(*r.channel) && std::isfinite(dense.sigma_w_sq))
          c.near(tag + " log10 argmin", std::log10(*r.channel), std::log10(dense.sigma_w_sq), 1e-4);
      }
  });

  const double total = seconds_since(suite_start);
  for (auto& o : outcomes)
    if (o.id == "AC9") {
      o.seconds += curve_seconds;
      o.check.holds("full suite under 60 s (took " + cli::fmt(total) + " s)", total < 60.0);
    }

  int failed = 0;
  for (const auto& o : outcomes) {
    std::printf("%-4s %s  %s (%.2f s)\n", o.id.c_str(), o.check.pass() ? "PASS" : "FAIL", o.title.c_str(), o.seconds);
    for (const auto& f : o.check.failures) std::printf("       - %s\n", f.c_str());
    if (!o.check.pass()) ++failed;
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(outcomes.size()) - failed, outcomes.size(), total);
  return failed == 0 ? 0 : 1;
}
