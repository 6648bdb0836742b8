#pragma once

// Command-line front end. Everything lives in this header so tests can drive
// run() in-process; tools/incentive_cli.cpp is a thin main().

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "incentive/belief.hpp"
#include "incentive/error.hpp"
#include "incentive/matrix_games.hpp"
#include "incentive/oracle.hpp"
#include "incentive/qg_games.hpp"

namespace incentive::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kValidation = 2, kSolver = 3, kVerifyFailed = 4 };

inline constexpr int kDefaultGrid = 2001;

/// A validation problem tied to a line of the scenario file.
class ScenarioError : public InputError {
 public:
  ScenarioError(const std::string& file, int line, const std::string& what)
      : InputError(file + ":" + std::to_string(line) + ": " + what) {}
};

struct Scenario {
  enum class Kind { Matrix, QG } kind = Kind::Matrix;
  std::string name;
  std::optional<matrix::CostTable> table;
  double prior = 0.5;
  double kappa = 0.0;
  std::vector<double> kappa_grid;
  qg::QGParams qg;
  std::vector<double> beta_grid;
};

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// First line mentioning "key"; good enough to point a reader at the field.
inline int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

struct Reader {
  const std::string& file;
  const std::string& text;
  const json& doc;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ScenarioError(file, line_of_key(text, key), what);
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!doc.contains(key)) {
      if (fallback) return *fallback;
      fail(key, "missing field '" + key + "'");
    }
    const json& v = doc.at(key);
    if (!v.is_number()) fail(key, "field '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "field '" + key + "' must be finite");
    return x;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (!doc.contains(key)) return out;
    const json& v = doc.at(key);
    if (!v.is_array()) fail(key, "field '" + key + "' must be an array of numbers");
    for (const auto& e : v) {
      if (!e.is_number()) fail(key, "field '" + key + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Eigen::MatrixXd matrix_at(const std::string& key, const json& v) const {
    if (!v.is_array() || v.empty()) fail(key, "cost matrix must be a non-empty array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    for (const auto& row : v) {
      if (!row.is_array() || row.empty()) fail(key, "cost matrix rows must be non-empty arrays");
      if (cols == 0) cols = row.size();
      if (row.size() != cols) fail(key, "cost matrix rows must have equal length");
    }
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) {
        if (!v[i][j].is_number()) fail(key, "cost entries must be numbers");
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
        if (!std::isfinite(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
          fail(key, "cost entries must be finite");
      }
    return m;
  }

  std::array<Eigen::MatrixXd, 2> per_state(const std::string& key) const {
    if (!doc.contains(key)) fail(key, "missing field '" + key + "'");
    const json& v = doc.at(key);
    if (!v.is_array() || v.size() != 2) fail(key, "field '" + key + "' must hold one matrix per state (two)");
    return {matrix_at(key, v[0]), matrix_at(key, v[1])};
  }
};

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const std::string& file = "<scenario>") {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const int line = detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ScenarioError(file, line, "parse error: " + what);
  }
  if (!doc.is_object()) throw ScenarioError(file, 1, "scenario must be a JSON object");
  const detail::Reader rd{file, text, doc};

  Scenario s;
  if (!doc.contains("kind") || !doc["kind"].is_string()) rd.fail("kind", "field 'kind' must be \"matrix\" or \"qg\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (doc.contains("name") && doc["name"].is_string()) s.name = doc["name"].get<std::string>();
  try {
    if (kind == "matrix") {
      s.kind = Scenario::Kind::Matrix;
      s.table.emplace(rd.per_state("principal"), rd.per_state("agent"));
      s.prior = rd.number("prior");
      if (!(s.prior >= 0.0 && s.prior <= 1.0)) rd.fail("prior", "prior must lie in [0,1]");
      s.kappa = rd.number("kappa", 0.0);
      if (s.kappa < 0.0) rd.fail("kappa", "kappa must be nonnegative");
      s.kappa_grid = rd.numbers("kappa_grid");
      for (double k : s.kappa_grid)
        if (!(k >= 0.0) || !std::isfinite(k)) rd.fail("kappa_grid", "kappa_grid entries must be finite and nonnegative");
    } else if (kind == "qg") {
      s.kind = Scenario::Kind::QG;
      s.qg.beta = rd.number("beta");
      if (!(s.qg.beta > 0.0)) rd.fail("beta", "beta must be positive");
      s.qg.z0 = rd.number("z0");
      s.qg.sigma0_sq = rd.number("sigma0_sq");
      if (s.qg.sigma0_sq < 0.0) rd.fail("sigma0_sq", "sigma0_sq must be nonnegative");
      s.qg.kappa = rd.number("kappa", 0.0);
      if (s.qg.kappa < 0.0) rd.fail("kappa", "kappa must be nonnegative");
      s.kappa = s.qg.kappa;
      s.kappa_grid = rd.numbers("kappa_grid");
      s.beta_grid = rd.numbers("beta_grid");
      for (double k : s.kappa_grid)
        if (!(k >= 0.0) || !std::isfinite(k)) rd.fail("kappa_grid", "kappa_grid entries must be finite and nonnegative");
      for (double b : s.beta_grid)
        if (!(b > 0.0) || !std::isfinite(b)) rd.fail("beta_grid", "beta_grid entries must be positive and finite");
    } else {
      rd.fail("kind", "unknown scenario kind '" + kind + "'");
    }
  } catch (const ScenarioError&) {
    throw;
  } catch (const InputError& e) {
    throw ScenarioError(file, detail::line_of_key(text, kind == "qg" ? "beta" : "principal"), e.what());
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path, 0, "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

// ---- formatting ----------------------------------------------------------

inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

/// 12 significant digits; infinities become null.
inline json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt(x));
}

inline json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const PosteriorSplit& split) {
  json atoms = json::array();
  for (const auto& a : split.atoms) atoms.push_back({{"posterior", num(a.posterior.p1())}, {"weight", num(a.weight)}});
  return atoms;
}

inline json to_json(const matrix::EquilibriumReport& r, const std::string& game) {
  json schemes = json::array();
  for (const auto& s : r.schemes) schemes.push_back(to_json(s.columns()));
  return {{"game", game},
          {"schemes", schemes},
          {"agent_actions", {r.agent_actions[0], r.agent_actions[1]}},
          {"principal_state_cost", {num(r.principal_state_cost[0]), num(r.principal_state_cost[1])}},
          {"agent_state_cost", {num(r.agent_state_cost[0]), num(r.agent_state_cost[1])}},
          {"principal_cost", num(r.principal_cost)},
          {"agent_cost", num(r.agent_cost)}};
}

inline json to_json(const matrix::PersuasionReport& r) {
  json recs = json::array();
  for (const auto& rec : r.recommendations)
    recs.push_back({{"agent_actions", {rec.response1, rec.response2}},
                    {"scheme", to_json(rec.scheme.columns())},
                    {"probability", {num(rec.probability[0]), num(rec.probability[1])}},
                    {"principal_state_cost", {num(rec.principal_cost[0]), num(rec.principal_cost[1])}},
                    {"agent_state_cost", {num(rec.agent_cost[0]), num(rec.agent_cost[1])}}});
  return {{"game", "G3"},
          {"recommendations", recs},
          {"split", to_json(r.split)},
          {"revealing", r.revealing()},
          {"principal_cost", num(r.principal_cost)},
          {"agent_cost", num(r.agent_cost)}};
}

inline json to_json(const matrix::AcquisitionReport& r, double kappa) {
  return {{"game", "G4"},
          {"kappa", num(kappa)},
          {"split", to_json(r.split)},
          {"gross_cost", num(r.gross_cost)},
          {"channel_cost", num(r.channel_cost)},
          {"principal_cost", num(r.total_cost)},
          {"agent_cost", num(r.agent_cost)}};
}

inline json to_json(const qg::QGReport& r) {
  json j = {{"game", qg::to_string(r.game)},
            {"principal_cost", num(r.principal_cost)},
            {"agent_cost", num(r.agent_cost)},
            {"policy",
             {{"ut_slope", num(r.policy.ut_slope)},
              {"vt_slope", num(r.policy.vt_slope)},
              {"q", num(r.policy.q)},
              {"intercept_slope", num(r.policy.intercept_slope)}}},
            {"sigma_w_sq", r.channel ? num(*r.channel) : json(nullptr)},
            {"posterior",
             {{"zs_mean", num(r.posterior.zs_mean)},
              {"zs_var", num(r.posterior.zs_var)},
              {"posterior_var", num(r.posterior.posterior_var)}}},
            {"revelation", r.revelation}};
  if (r.game == qg::Game::G3) {
    j["f_beta"] = num(r.f_beta);
    j["tie"] = r.tie;
  }
  if (r.game == qg::Game::G4) j["channel_cost"] = num(r.channel_cost);
  return j;
}

/// Rebuilds a Bayesian/full-information report's costs from its schemes.
inline matrix::EquilibriumReport report_from_json(const json& j) {
  matrix::EquilibriumReport r;
  for (const auto& s : j.at("schemes")) {
    const auto rows = s.size(), cols = s.at(0).size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b)
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s[a][b].get<double>();
    r.schemes.emplace_back(m);
  }
  r.agent_actions = {j.at("agent_actions")[0].get<int>(), j.at("agent_actions")[1].get<int>()};
  return r;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + fmt(row[c]);
      out += "\n";
    }
    return out;
  }
  json to_json() const {
    json rs = json::array();
    for (const auto& row : rows) {
      json r = json::array();
      for (double x : row) r.push_back(num(x));
      rs.push_back(r);
    }
    return {{"columns", columns}, {"rows", rs}};
  }
};

// ---- series --------------------------------------------------------------

inline const matrix::CostTable& require_matrix(const Scenario& s) {
  if (s.kind != Scenario::Kind::Matrix) throw InputError("this command needs a matrix scenario");
  return *s.table;
}

inline const qg::QGParams& require_qg(const Scenario& s) {
  if (s.kind != Scenario::Kind::QG) throw InputError("this command needs a qg scenario");
  return s.qg;
}

inline std::vector<double> envelope_on_grid(const std::vector<double>& xs, const std::vector<double>& ys) {
  const ConvexEnvelope env(xs, ys);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(env(x));
  return out;
}

inline Table belief_sweep(const Scenario& s, int grid) {
  const auto& t = require_matrix(s);
  const auto curve = matrix::g2_curve(t, grid, true);
  const auto g1 = matrix::solve_g1(t, Belief(0.5));
  const auto g3 = envelope_on_grid(curve.beliefs, curve.agent);
  Table tab{{"belief", "principal_g1", "principal_g2", "agent_g2", "agent_g3"}, {}};
  for (std::size_t k = 0; k < curve.beliefs.size(); ++k) {
    const double p = curve.beliefs[k];
    tab.rows.push_back({p, p * g1.principal_state_cost[0] + (1.0 - p) * g1.principal_state_cost[1], curve.principal[k],
                        curve.agent[k], g3[k]});
  }
  return tab;
}

inline std::vector<double> matrix_kappa_grid(const Scenario& s) {
  return s.kappa_grid.empty() ? std::vector<double>{0.0, 0.5, 1.0, 2.0, 4.0, 1e6} : s.kappa_grid;
}

inline Table matrix_kappa_sweep(const Scenario& s, int grid) {
  const auto& t = require_matrix(s);
  const Belief prior(s.prior);
  const auto curve = matrix::g2_curve(t, grid, false);
  Table tab{{"kappa", "principal_cost", "gross_cost", "channel_cost", "agent_cost", "posterior_low", "posterior_high",
             "weight_high"},
            {}};
  for (double k : matrix_kappa_grid(s)) {
    const auto r = matrix::solve_g4(t, curve, prior, k);
    const auto& atoms = r.split.atoms;
    const double lo = atoms.front().posterior.p1(), hi = atoms.back().posterior.p1();
    tab.rows.push_back({k, r.total_cost, r.gross_cost, r.channel_cost, r.agent_cost, lo, hi, atoms.back().weight});
  }
  return tab;
}

inline Table sigma_w_sweep(const qg::QGParams& p) {
  Table tab{{"sigma_w_sq", "principal_cost", "agent_cost", "channel_cost"}, {}};
  for (double s : qg::sigma_w_sweep()) {
    const auto r = qg::qg_g4_report(p, s);
    tab.rows.push_back({s, r.principal_cost, r.agent_cost, r.channel_cost});
  }
  return tab;
}

inline std::vector<double> qg_kappa_grid(const Scenario& s) {
  return s.kappa_grid.empty() ? std::vector<double>{s.qg.kappa} : s.kappa_grid;
}

inline std::vector<double> qg_beta_grid(const Scenario& s) {
  return s.beta_grid.empty() ? std::vector<double>{s.qg.beta} : s.beta_grid;
}

inline Table qg_kappa_sweep(const Scenario& s) {
  Table tab{{"kappa", "sigma_w_sq", "principal_cost", "agent_cost"}, {}};
  for (double k : qg_kappa_grid(s)) {
    qg::QGParams p = s.qg;
    p.kappa = k;
    const auto r = qg::qg_g4_optimize(p);
    tab.rows.push_back({k, *r.channel, r.principal_cost, r.agent_cost});
  }
  return tab;
}

/// Series behind the four figures: the uninformed principal's cost (1), the
/// agent's cost and its convexification (2), the acquisition objective and
/// its envelope (3), and the QG acquisition cost against channel noise (4).
inline Table figure(int which, const Scenario& s, int grid) {
  switch (which) {
    case 1: {
      const auto& t = require_matrix(s);
      const auto curve = matrix::g2_curve(t, grid, false);
      Table tab{{"belief", "principal_g2"}, {}};
      for (std::size_t k = 0; k < curve.beliefs.size(); ++k) tab.rows.push_back({curve.beliefs[k], curve.principal[k]});
      return tab;
    }
    case 2: {
      const auto& t = require_matrix(s);
      const auto curve = matrix::g2_curve(t, grid, true);
      const auto env = envelope_on_grid(curve.beliefs, curve.agent);
      Table tab{{"belief", "agent_g2", "agent_envelope"}, {}};
      for (std::size_t k = 0; k < curve.beliefs.size(); ++k)
        tab.rows.push_back({curve.beliefs[k], curve.agent[k], env[k]});
      return tab;
    }
    case 3: {
      const auto& t = require_matrix(s);
      const Belief prior(s.prior);
      if (prior.degenerate()) throw InputError("figure 3 needs an interior prior");
      const auto curve = matrix::g2_curve(t, grid, false);
      std::vector<double> objective;
      for (std::size_t k = 0; k < curve.beliefs.size(); ++k)
        objective.push_back(curve.principal[k] - s.kappa * tilde_entropy(Belief(curve.beliefs[k]), prior));
      const auto env = envelope_on_grid(curve.beliefs, objective);
      Table tab{{"belief", "principal_g2", "objective", "envelope"}, {}};
      for (std::size_t k = 0; k < curve.beliefs.size(); ++k)
        tab.rows.push_back({curve.beliefs[k], curve.principal[k], objective[k], env[k]});
      return tab;
    }
    case 4: {
      require_qg(s);
      Table tab{{"sigma_w_sq"}, {}};
      std::vector<qg::QGParams> series;
      for (double b : qg_beta_grid(s))
        for (double k : qg_kappa_grid(s)) {
          qg::QGParams p = s.qg;
          p.beta = b;
          p.kappa = k;
          series.push_back(p);
          tab.columns.push_back("cost_beta_" + fmt(b) + "_kappa_" + fmt(k));
        }
      for (double sw : qg::sigma_w_sweep()) {
        std::vector<double> row{sw};
        for (const auto& p : series) row.push_back(qg::qg_g4_cost(p, sw));
        tab.rows.push_back(row);
      }
      return tab;
    }
    default:
      throw InputError("figure must be 1, 2, 3 or 4");
  }
}

// ---- verification --------------------------------------------------------

inline std::vector<oracle::OracleReport> verify(const Scenario& s, int grid, std::uint64_t seed) {
  if (s.kind == Scenario::Kind::Matrix) return oracle::matrix_suite(*s.table, Belief(s.prior), s.kappa, grid);
  std::vector<oracle::OracleReport> out;
  for (double b : qg_beta_grid(s))
    for (double k : qg_kappa_grid(s)) {
      qg::QGParams p = s.qg;
      p.beta = b;
      p.kappa = k;
      for (auto r : oracle::qg_suite(p, seed)) {
        r.quantity = "beta=" + fmt(b) + " kappa=" + fmt(k) + " " + r.quantity;
        out.push_back(std::move(r));
      }
    }
  return out;
}

inline json to_json(const std::vector<oracle::OracleReport>& reports) {
  json out = json::array();
  for (const auto& r : reports)
    out.push_back({{"quantity", r.quantity},
                   {"solver_value", num(r.solver_value)},
                   {"oracle_value", num(r.oracle_value)},
                   {"tolerance", num(r.tolerance)},
                   {"pass", r.pass},
                   {"seed", r.seed}});
  return out;
}

inline std::string verify_text(const std::vector<oracle::OracleReport>& reports) {
  std::string out;
  for (const auto& r : reports)
    out += std::string(r.pass ? "PASS " : "FAIL ") + r.quantity + ": solver " + fmt(r.solver_value) + ", oracle " +
           fmt(r.oracle_value) + ", tol " + fmt(r.tolerance) + "\n";
  return out;
}

// ---- entry point ---------------------------------------------------------

struct Options {
  int grid = kDefaultGrid;
  std::string format;
  std::string out;
  bool verify = false;
  std::uint64_t seed = oracle::kDefaultSeed;
  std::string over;
  int figure = 0;
  std::string scenario;
};

inline json solve(const std::string& game, const Scenario& s, int grid) {
  if (s.kind == Scenario::Kind::Matrix) {
    const auto& t = *s.table;
    const Belief prior(s.prior);
    if (game == "g1") return to_json(matrix::solve_g1(t, prior), "G1");
    if (game == "g2") return to_json(matrix::solve_g2(t, prior), "G2");
    if (game == "g3") return to_json(matrix::solve_g3(t, prior));
    return to_json(matrix::solve_g4(t, prior, s.kappa, grid), s.kappa);
  }
  if (game == "g1") return to_json(qg::qg_g1(s.qg));
  if (game == "g2") return to_json(qg::qg_g2(s.qg));
  if (game == "g3") return to_json(qg::qg_g3(s.qg));
  return to_json(qg::qg_g4_optimize(s.qg));
}

inline std::string flat_csv(const json& report) {
  std::string out = "field,value\n";
  for (const auto& [key, value] : report.items())
    if (value.is_number()) out += key + "," + fmt(value.get<double>()) + "\n";
  return out;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incentive design equilibria for matrix and quadratic-Gaussian games", "incentive_cli"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--grid", o.grid, "belief grid size")->check(CLI::Range(3, 1000001));
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", o.out, "write output to this path instead of stdout");
  app.add_flag("--verify", o.verify, "also run the oracle suite; exit 4 on any failure");
  app.add_option("--seed", o.seed, "Monte-Carlo seed");
  app.fallthrough();

  std::vector<CLI::App*> games;
  for (const char* g : {"g1", "g2", "g3", "g4"}) {
    auto* sub = app.add_subcommand(g, "solve one game and print its report");
    sub->add_option("scenario", o.scenario, "scenario file")->required();
    games.push_back(sub);
  }
  auto* sweep = app.add_subcommand("sweep", "belief, kappa or sigma_w^2 sweep as CSV");
  sweep->add_option("scenario", o.scenario, "scenario file")->required();
  sweep->add_option("--over", o.over, "swept quantity")->check(CLI::IsMember({"belief", "kappa", "sigma_w"}));
  auto* fig = app.add_subcommand("figure", "data series behind a figure");
  fig->add_option("number", o.figure, "figure number")->required()->check(CLI::Range(1, 4));
  fig->add_option("scenario", o.scenario, "scenario file")->required();
  auto* ver = app.add_subcommand("verify", "run the oracle suite");
  ver->add_option("scenario", o.scenario, "scenario file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  std::string payload;
  int status = kOk;
  try {
    const Scenario s = load_scenario(o.scenario);
    const CLI::App* chosen = app.get_subcommands().front();
    const std::string cmd = chosen->get_name();
    if (cmd == "verify") {
      const auto reports = verify(s, o.grid, o.seed);
      payload = o.format == "json" ? to_json(reports).dump(2) + "\n" : verify_text(reports);
      for (const auto& r : reports)
        if (!r.pass) status = kVerifyFailed;
    } else if (cmd == "sweep" || cmd == "figure") {
      Table tab;
      if (cmd == "figure") {
        tab = figure(o.figure, s, o.grid);
      } else {
        const std::string over =
            o.over.empty() ? (s.kind == Scenario::Kind::Matrix ? "belief" : "sigma_w") : o.over;
        if (over == "belief")
          tab = belief_sweep(s, o.grid);
        else if (over == "kappa")
          tab = s.kind == Scenario::Kind::Matrix ? matrix_kappa_sweep(s, o.grid) : qg_kappa_sweep(s);
        else
          tab = sigma_w_sweep(require_qg(s));
      }
      payload = o.format == "json" ? tab.to_json().dump(2) + "\n" : tab.csv();
    } else {
      const json report = solve(cmd, s, o.grid);
      payload = o.format == "csv" ? flat_csv(report) : report.dump(2) + "\n";
    }
    if (o.verify && cmd != "verify") {
      const auto reports = verify(s, o.grid, o.seed);
      err << verify_text(reports);
      for (const auto& r : reports)
        if (!r.pass) status = kVerifyFailed;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolver;
  }

  if (o.out.empty()) {
    out << payload;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << o.out << "\n";
      return kValidation;
    }
    f << payload;
  }
  return status;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace incentive::cli
