#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <sstream>

#include "mcl/errors.hpp"
#include "mcl/experiments.hpp"
#include "mcl/families.hpp"
#include "mcl/instance_io.hpp"
#include "mcl/metric.hpp"

using namespace mcl;

namespace {

struct Csv {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int col(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("no column " + name);
    return static_cast<int>(it - header.begin());
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line.rfind(std::string("# ") + kCsvVersion + " schema=", 0), 0u) << line;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) == 0) {
      auto eq = line.find('=');
      c.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
    } else if (c.header.empty()) {
      c.header = split(line);
    } else {
      c.rows.push_back(split(line));
      EXPECT_EQ(c.rows.back().size(), c.header.size()) << line;
    }
  }
  return c;
}

ExperimentConfig transition_config(int n, const std::string& grid, int trials) {
  ExperimentConfig cfg;
  cfg.n_list = {n};
  cfg.eta_grid = parse_grid(grid);
  cfg.trials = trials;
  cfg.seed = 2024;
  return cfg;
}

}  // namespace

TEST(Grid, Parse) {
  auto g = parse_grid("0.5:1.2:0.025");
  ASSERT_EQ(g.size(), 29u);
  EXPECT_EQ(g.front(), 0.5);
  EXPECT_NEAR(g.back(), 1.2, 1e-12);
  EXPECT_EQ(parse_grid("0.1,0.2,0.5"), (std::vector<double>{0.1, 0.2, 0.5}));
  EXPECT_EQ(parse_int_list("20,40"), (std::vector<int>{20, 40}));
  EXPECT_THROW(parse_grid("0.5,0.1"), ParseError);
  EXPECT_THROW(parse_grid("1:0:0.1"), ParseError);
  EXPECT_THROW(parse_grid("a,b"), ParseError);
  EXPECT_EQ(fmt(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(fmt(0.1), "0.10000000000000001");
}

TEST(MinCurve, Rows) {
  ExperimentConfig cfg;
  cfg.n_list = {5, 20};
  cfg.alpha_grid = parse_grid("0.5:1:0.05");
  Csv c = parse_csv(cmd_min_curve(cfg));
  int marked = 0;
  for (auto& r : c.rows) {
    const int n = std::stoi(r[c.col("n")]);
    const double a = std::stod(r[c.col("alpha")]);
    const double v = std::stod(r[c.col("value")]);
    EXPECT_NEAR(v, metric_min(n, a), 1e-12 * v);
    if (r[c.col("marker")] == "alpha_star") {
      ++marked;
      EXPECT_EQ(a, alpha_star(n));
      if (n == 20) EXPECT_NEAR(a, 304.0 / 338.0, 1e-15);
    }
    if (a == 1.0) EXPECT_NEAR(v, n * (n + 1) / 4.0, 1e-12 * v);
  }
  EXPECT_EQ(marked, 2);
}

TEST(MinCurve, ScaledCurvesCollapseAboveAlphaStar) {
  // Compared at the same relative position between alpha* and 1.
  for (int k = 0; k <= 15; ++k) {
    const double t = 0.05 + 0.05 * k;
    double lo = 1e300, hi = 0;
    for (int n : {20, 50, 100}) {
      const double as = alpha_star(n);
      const double v = metric_min(n, as + t * (1 - as)) / n;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    EXPECT_LE((hi - lo) / hi, 0.15) << t;
  }
}

TEST(Transition, DeskScaleThreshold) {
  std::vector<TransitionResult> res;
  Csv c = parse_csv(cmd_transition(transition_config(20, "0.5:1.2:0.05", 200), &res));
  ASSERT_EQ(res.size(), 1u);
  ASSERT_TRUE(res[0].threshold);
  const double eta = *res[0].threshold;
  EXPECT_GE(eta, 1 - 2.5 * std::pow(21.0, -2.0 / 3));
  EXPECT_LE(eta, 1.1);
  bool in_grid = false;
  for (double g : res[0].eta_grid) in_grid |= g == eta;
  EXPECT_TRUE(in_grid);
  for (double r : res[0].success_rates) {
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_EQ(c.meta.at("trials"), "200");
}

TEST(Transition, PlateauAndSpuriousRegime) {
  TransitionResult hi = run_transition(20, {1.5}, 200, 1, OptimizerConfig{});
  EXPECT_EQ(hi.success_rates[0], 1.0);
  TransitionResult lo = run_transition(20, {0.2}, 200, 1, OptimizerConfig{});
  EXPECT_LT(lo.success_rates[0], 1.0);
  EXPECT_GT(lo.spurious[0], 0);
}

TEST(Transition, RowRevalidation) {
  // Recompute one grid point trial by trial from the documented stream layout.
  const std::vector<double> grid = parse_grid("0.4:1.2:0.2");
  const int n = 12, trials = 40;
  TransitionResult r = run_transition(n, grid, trials, 77, OptimizerConfig{});
  const std::size_t e = 1;
  std::vector<int> S(n);
  for (int i = 0; i < n; ++i) S[i] = i;
  Instance inst = one_param_instance(split_graph(n, n), S, grid[e] / (n + 1));
  int ok = 0;
  for (int t = 0; t < trials; ++t)
    ok += gd_run(inst, OptimizerConfig{}, RandomStream{77, std::uint64_t(n)}.child(e).child(t)).classification ==
          Classification::GlobalMin;
  EXPECT_EQ(double(ok) / trials, r.success_rates[e]);
}

TEST(Reproducibility, ByteIdenticalAcrossRunsAndThreads) {
  ExperimentConfig cfg = transition_config(10, "0.5:1.5:0.25", 30);
  omp_set_num_threads(1);
  const std::string a = cmd_transition(cfg);
  omp_set_num_threads(4);
  const std::string b = cmd_transition(cfg);
  const std::string c = cmd_transition(cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);

  ExperimentConfig red;
  red.m = 5;
  red.eps_grid = {0.01, 0.5};
  red.starts = 500;
  red.seed = 9;
  omp_set_num_threads(1);
  const std::string r1 = cmd_reduced_landscape(red);
  omp_set_num_threads(4);
  EXPECT_EQ(r1, cmd_reduced_landscape(red));
}

TEST(Bernoulli, SmokeStudy) {
  ExperimentConfig cfg;
  cfg.n = 12;
  cfg.mu = 1;
  cfg.eta = 3;
  cfg.trials = 200;
  cfg.seed = 5;
  BernoulliStudy st;
  Csv c = parse_csv(cmd_bernoulli_study(cfg, &st));
  EXPECT_GE(st.fraction, 0.9);
  EXPECT_TRUE(st.vacuous);
  EXPECT_EQ(c.meta.at("probability_vacuous"), "true");
  EXPECT_EQ(st.p, 1.0);
  EXPECT_EQ(st.fraction, 1.0);
  EXPECT_GE(st.band_fraction, 0.95);
  // Spot re-validation of every 100th sample.
  const GroundTruth u = incoherent_truth(12, 1);
  for (std::size_t k = 0; k < c.rows.size(); k += 100) {
    auto s = bernoulli_instance(12, st.p, RandomStream{5, 0}.child(k), u);
    EXPECT_EQ(c.rows[k][c.col("metric")], fmt(exact_metric(s.instance, st.alpha).value));
  }
}

TEST(Rip, Study) {
  for (int n : {5, 6}) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.alpha_grid = {0.5};
    cfg.delta_grid = {0.0, 0.25, 0.5};
    cfg.mu_list = {1, 2};
    Csv c = parse_csv(cmd_rip_study(cfg));
    double last_bound = 0;
    int extremal = 0;
    for (auto& r : c.rows) {
      const double d = std::stod(r[c.col("delta")]);
      const double mu = std::stod(r[c.col("mu")]);
      const double exact = std::stod(r[c.col("exact")]);
      if (r[c.col("family")] == "rip_extremal") {
        ++extremal;
        EXPECT_NEAR(std::stod(r[c.col("ratio_exact_over_bound")]), 1.0, 1e-12);
        const double b = std::stod(r[c.col("bound_rip")]);
        EXPECT_GT(b, last_bound);
        last_bound = b;
        EXPECT_EQ(r[c.col("exact")], fmt(exact_metric(rip_extremal_instance(n, d), 0.5).value));
      } else {
        EXPECT_EQ(r[c.col("exact")], fmt(exact_metric(rip3_instance(n, mu, d), 0.5).value));
        const bool holds = exact >= std::stod(r[c.col("rip3_lower")]);
        EXPECT_EQ(r[c.col("lower_holds")], holds ? "1" : "0");
        if (d == 0.0) EXPECT_TRUE(holds);
      }
    }
    EXPECT_EQ(extremal, 3);
  }
}

TEST(Reduced, Regimes) {
  ExperimentConfig cfg;
  cfg.m = 6;
  cfg.eps_grid = {0.1, 3.5};
  cfg.starts = 10000;
  cfg.seed = 3;
  Csv c = parse_csv(cmd_reduced_landscape(cfg));
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_GE(std::stoi(c.rows[0][c.col("spurious")]), 20);
  EXPECT_EQ(c.rows[0][c.col("regime")], "spurious_even");
  EXPECT_EQ(std::stoi(c.rows[1][c.col("spurious")]), 0);
  EXPECT_EQ(c.rows[1][c.col("regime")], "no_spurious");
}

TEST(Analyze, Examples) {
  InstanceFile f{rip_extremal_instance(5, 0.5), {}};
  nlohmann::json j = cmd_analyze(f, 0.5);
  EXPECT_NEAR(j["metric"]["value"].get<double>(), 73.0, 1e-10);
  ASSERT_EQ(j["bounds"][0]["name"], "rip");
  EXPECT_TRUE(j["bounds"][0]["tight"].get<bool>());
  EXPECT_TRUE(j["bounds"][0]["holds"].get<bool>());

  Matrix off(2, 2);
  off << 0, 1, 1, 0;
  nlohmann::json d = cmd_analyze({make_instance(off, Vector::Ones(2)), {}}, 0.5);
  EXPECT_EQ(d["metric"]["value"], "inf");
  EXPECT_EQ(d["degenerate_reason"], "bipartite");
  EXPECT_TRUE(d["witness"].is_array());

  Matrix z = Matrix::Ones(3, 3);
  z(1, 1) = 0;
  nlohmann::json zt = cmd_analyze({make_instance(z, Vector::Zero(3)), {}}, 0.5);
  EXPECT_EQ(zt["zero_truth_verdict"], "MultipleGlobalSolutions");
  EXPECT_EQ(zt["witness"], nlohmann::json::parse("[0.0, 1.0, 0.0]"));
  EXPECT_FALSE(zt.contains("metric"));
}
