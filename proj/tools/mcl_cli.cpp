// mcl: complexity metric and landscape experiments for rank-1 weighted matrix completion.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mcl/experiments.hpp"
#include "mcl/instance_io.hpp"
#include "mcl/metric.hpp"

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complexity metric and landscape experiments for rank-1 weighted matrix completion"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  app.require_subcommand(1);

  mcl::ExperimentConfig cfg;
  std::string out, instance_path, n_list = "20,50,100", alpha_grid = "0:1:0.01", eta_grid = "0.5:1.2:0.05",
                                  delta_grid = "0,0.25,0.5", mu_list = "1", eps_grid = "0.05,0.1,0.5,1,3.5";
  bool raw = false;
  double alpha = 0.5;

  auto* analyze = app.add_subcommand("analyze", "Diagnose one instance file");
  analyze->add_option("--instance", instance_path, "Instance JSON file")->required();
  analyze->add_option("--alpha", alpha, "Weight alpha in [0,1]");
  analyze->add_flag("--raw", raw, "Do not symmetrize/normalize on load");

  auto* min_curve = app.add_subcommand("min-curve", "Minimum metric curves");
  min_curve->add_option("--n", n_list, "Comma-separated n values");
  min_curve->add_option("--alpha-grid", alpha_grid, "a:b:step or comma list");
  min_curve->add_flag("--scaled", cfg.scaled, "Report metric_min / n in the value column");

  auto* transition = app.add_subcommand("transition", "Gradient descent success transition in eta");
  transition->add_option("--n", n_list, "Comma-separated n values");
  transition->add_option("--eta", eta_grid, "a:b:step or comma list");
  transition->add_option("--trials", cfg.trials, "Trials per grid point");
  transition->add_option("--seed", cfg.seed, "Seed");
  transition->add_option("--max-iters", cfg.gd.max_iters, "Gradient descent iteration cap");
  transition->add_option("--success-tol", cfg.gd.success_tol, "Success radius (Frobenius)");
  transition->add_option("--grad-tol", cfg.gd.grad_tol, "Stationarity tolerance (inf norm)");

  auto* bernoulli = app.add_subcommand("bernoulli", "Bernoulli sampling bound study");
  bernoulli->add_option("--n", cfg.n, "Dimension")->required();
  bernoulli->add_option("--mu", cfg.mu, "Incoherence");
  bernoulli->add_option("--eta", cfg.eta, "Probability exponent (> 2)");
  bernoulli->add_option("--trials", cfg.trials, "Samples");
  bernoulli->add_option("--seed", cfg.seed, "Seed");
  bernoulli->add_option("--alpha", cfg.alpha, "Weight alpha (default alpha*(n))");

  auto* rip = app.add_subcommand("rip", "RIP family study");
  rip->add_option("--n", cfg.n, "Dimension")->required();
  rip->add_option("--alpha-grid", alpha_grid, "a:b:step or comma list");
  rip->add_option("--delta-grid", delta_grid, "a:b:step or comma list");
  rip->add_option("--mu", mu_list, "Comma-separated incoherence values for the rip3 rows");

  auto* reduced = app.add_subcommand("reduced", "Critical points of the reduced problem");
  reduced->add_option("--m", cfg.m, "Reduced dimension")->required();
  reduced->add_option("--eps-grid", eps_grid, "a:b:step or comma list");
  reduced->add_option("--starts", cfg.starts, "Newton starts per eps");
  reduced->add_option("--seed", cfg.seed, "Seed");

  for (auto* sub : {analyze, min_curve, transition, bernoulli, rip, reduced})
    sub->add_option("--out", out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) {
      auto file = mcl::read_instance(instance_path, raw);
      emit(mcl::cmd_analyze(file, alpha).dump(2) + "\n", out);
    } else if (*min_curve) {
      cfg.n_list = mcl::parse_int_list(n_list);
      cfg.alpha_grid = mcl::parse_grid(alpha_grid);
      emit(mcl::cmd_min_curve(cfg), out);
    } else if (*transition) {
      cfg.n_list = mcl::parse_int_list(n_list);
      cfg.eta_grid = mcl::parse_grid(eta_grid);
      emit(mcl::cmd_transition(cfg), out);
    } else if (*bernoulli) {
      emit(mcl::cmd_bernoulli_study(cfg), out);
    } else if (*rip) {
      cfg.alpha_grid = mcl::parse_grid(alpha_grid);
      cfg.delta_grid = mcl::parse_grid(delta_grid);
      cfg.mu_list = mcl::parse_grid(mu_list);
      emit(mcl::cmd_rip_study(cfg), out);
    } else if (*reduced) {
      cfg.eps_grid = mcl::parse_grid(eps_grid);
      emit(mcl::cmd_reduced_landscape(cfg), out);
    }
  } catch (const mcl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mcl::HypothesisError& e) {
    std::cerr << "out of range: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
