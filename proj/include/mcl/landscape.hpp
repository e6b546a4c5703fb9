#pragma once

#include <optional>
#include <vector>

#include "mcl/families.hpp"
#include "mcl/instance.hpp"

namespace mcl {

enum class StepRule { Fixed, Backtracking };
enum class InitKind { Gaussian, UniformBox };

struct OptimizerConfig {
  int max_iters = 200000;
  StepRule step_rule = StepRule::Backtracking;
  double step = 1.0;  // fixed step, or first trial step under backtracking
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double grad_tol = 1e-12;     // infinity norm
  double success_tol = 1e-5;   // Frobenius distance of u u^T to u* u*^T
  double eig_tol = 1e-8;
  InitKind init = InitKind::Gaussian;
  double init_scale = 0.0;     // Gaussian std or box radius; 0 means 1/n
  double overflow = 1e100;
  bool record_trajectory = false;

  void validate() const;
};

enum class Classification { GlobalMin, SpuriousSOSP, StrictSaddle, Unconverged };
const char* to_string(Classification c);

struct CriticalPoint {
  Point point;
  double grad_inf_norm = 0.0;
  double min_hessian_eig = 0.0;
  double distance_to_truth = 0.0;
  Classification classification = Classification::Unconverged;
};

struct GdResult {
  CriticalPoint critical;
  int iterations = 0;
  std::vector<double> objective_trace;  // filled when record_trajectory is set
};

Point sample_init(int n, const OptimizerConfig& config, const RandomStream& stream);
GdResult gd_descend(const Instance& inst, const OptimizerConfig& config, const Point& start);
CriticalPoint gd_run(const Instance& inst, const OptimizerConfig& config, const RandomStream& stream);
CriticalPoint classify_point(const Instance& inst, const Point& u, const OptimizerConfig& config);

// Reduced m-dimensional problem: sum (x_i^2-1)^2 + eps * sum_{i != j} (x_i x_j - 1)^2.
// eps may exceed 1 here; the full-instance family needs eps in [0, 1].
struct ReducedProblem {
  int m = 1;
  double eps = 0.0;
};

double reduced_objective(const ReducedProblem& p, const Vector& x);
Vector reduced_gradient(const ReducedProblem& p, const Vector& x);
Matrix reduced_hessian(const ReducedProblem& p, const Vector& x);

// u_i = x_i/m on S, zero elsewhere.
Point lift_to_full(const Vector& x, int n, const SimpleGraph& graph, const std::vector<int>& S);

// Half the entries +a, half -a, a = sqrt((1-eps)/(1+(m-1)eps)); `negative`
// lists the -a positions (default: the second half).
Vector spurious_even(int m, double eps);
Vector spurious_even_point(int m, double eps, const std::vector<int>& negative);
std::vector<Vector> spurious_even_all(int m, double eps);

struct OddConstruction {
  Vector x;  // first k entries y1, remaining k+1 entries y2
  double y1 = 0.0, y2 = 0.0, z = 0.0;  // z = (1-eps) y2^2
  int k = 0;
};
OddConstruction spurious_odd(int m, double eps);
// Real roots of a z^3 + b z^2 + c z + d, ascending.
std::vector<double> cubic_roots(double a, double b, double c, double d);

struct NewtonTolerances {
  double grad_tol = 1e-10;
  double eig_tol = 1e-8;
  double success_tol = 1e-6;
  double dedupe_radius = 1e-6;
  double pinv_cutoff = 1e-10;
  int max_iters = 200;
};

struct CriticalPointScan {
  std::vector<CriticalPoint> points;  // distinct, in order of first discovery
  int dropped = 0;                    // starts that did not converge
};
CriticalPointScan find_critical_points_reduced(const ReducedProblem& p, int starts,
                                               const RandomStream& stream,
                                               const NewtonTolerances& tols = {});

struct SaddleScanOptions {
  double grad_small = 1e-10;
  double curvature_small = 1e-10;
  int descent_iters = 2000;  // short descent from each sample toward stationary points
};
// A violation is an evaluated point outside the eta-neighbourhoods of +-u* (and inside
// the ball) with gradient <= grad_small and no curvature below -curvature_small.
struct SaddleScan {
  double beta_hat = 0.0;
  double gamma_hat = 0.0;
  bool violation = false;
  int evaluated = 0;
  int discarded = 0;
};
SaddleScan strict_saddle_scan(const Instance& inst, double eta, int samples, const RandomStream& stream,
                              const SaddleScanOptions& options = {});

struct ZeroTruthVerdict {
  bool no_sscp = true;
  std::optional<Point> witness;  // e_{i0} for the first zero diagonal entry
};
ZeroTruthVerdict classify_zero_truth(const WeightMatrix& C);

}  // namespace mcl
