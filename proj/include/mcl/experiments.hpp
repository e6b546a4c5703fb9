#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcl/instance_io.hpp"
#include "mcl/landscape.hpp"

namespace mcl {

inline constexpr const char* kCsvVersion = "mcl-csv/1";

// "a:b:step" (inclusive, sorted) or "x,y,z".
std::vector<double> parse_grid(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);
std::string fmt(double x);  // 17 significant digits; inf/-inf/nan spelled out

struct ExperimentConfig {
  std::vector<int> n_list;
  std::vector<double> alpha_grid;
  std::vector<double> eta_grid;
  std::vector<double> delta_grid;
  std::vector<double> mu_list{1.0};
  std::vector<double> eps_grid;
  int n = 0;
  int m = 0;
  double alpha = -1.0;  // negative: command default
  double mu = 1.0;
  double eta = 3.0;
  int trials = 200;
  int starts = 10000;
  std::uint64_t seed = 0;
  bool scaled = false;
  OptimizerConfig gd;

  void validate_grid(const std::vector<double>& g, const char* name) const;
};

nlohmann::json cmd_analyze(const InstanceFile& file, double alpha);

std::string cmd_min_curve(const ExperimentConfig& cfg);

struct TransitionResult {
  int n = 0;
  std::vector<double> eta_grid;
  std::vector<double> success_rates;
  std::vector<int> spurious, saddles, unconverged;
  std::optional<double> threshold;  // smallest grid eta from which every rate is 1.0
  std::optional<double> midpoint;   // bisection point between the threshold and the grid point below
  std::optional<double> midpoint_rate;
  std::optional<double> refined;    // midpoint if its rate is 1.0, else the threshold
};
TransitionResult run_transition(int n, const std::vector<double>& eta_grid, int trials, std::uint64_t seed,
                                const OptimizerConfig& gd);
std::string cmd_transition(const ExperimentConfig& cfg, std::vector<TransitionResult>* results = nullptr);

struct BernoulliStudy {
  int n = 0;
  double p = 0.0;
  double alpha = 0.0;
  double bound = 0.0;
  double probability = 0.0;  // 1 - 3 n^{1 - eta/2}
  double fraction = 0.0;     // samples with exact metric <= bound
  double band_fraction = 0.0;  // samples with nonzero count in [n^2 p/2, 3 n^2 p/2]
  bool vacuous = false;      // probability <= 0 or below the 0.9 smoke target
  std::vector<double> metric;
  std::vector<int> nonzero, resamples;
};
BernoulliStudy run_bernoulli(int n, double mu, double eta, int trials, std::uint64_t seed, double alpha);
std::string cmd_bernoulli_study(const ExperimentConfig& cfg, BernoulliStudy* result = nullptr);

std::string cmd_rip_study(const ExperimentConfig& cfg);
std::string cmd_reduced_landscape(const ExperimentConfig& cfg);

}  // namespace mcl
