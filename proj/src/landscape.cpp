#include "mcl/landscape.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace mcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective and gradient with preallocated storage for the descent loop.
struct Evaluator {
  const Instance& inst;
  Matrix R;
  Vector w;

  explicit Evaluator(const Instance& in) : inst(in), R(in.n(), in.n()), w(in.n()) {}

  // Leaves R = u u^T - u* u*^T for the evaluated point.
  double value(const Vector& u) {
    R.noalias() = u * u.transpose();
    R.noalias() -= inst.u_star * inst.u_star.transpose();
    return (inst.C.array() * R.array().square()).sum();
  }

  void grad(const Vector& u, Vector& g) {
    const auto& v = inst.u_star;
    w = u.cwiseProduct(u);
    g.noalias() = inst.C * w;
    g = g.cwiseProduct(u);
    w = v.cwiseProduct(u);
    Vector cv = inst.C * w;
    g -= v.cwiseProduct(cv);
    g *= 4.0;
  }
};

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(grad_tol > 0 && success_tol > 0 && eig_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (!(step > 0)) throw std::invalid_argument("step must be positive");
  if (step_rule == StepRule::Backtracking && !(armijo_c > 0 && armijo_c < 1 && shrink > 0 && shrink < 1))
    throw std::invalid_argument("backtracking needs c, shrink in (0, 1)");
  if (init_scale < 0) throw std::invalid_argument("init_scale must be nonnegative");
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::GlobalMin: return "GlobalMin";
    case Classification::SpuriousSOSP: return "SpuriousSOSP";
    case Classification::StrictSaddle: return "StrictSaddle";
    case Classification::Unconverged: return "Unconverged";
  }
  return "?";
}

Point sample_init(int n, const OptimizerConfig& config, const RandomStream& stream) {
  auto rng = stream.engine();
  const double scale = config.init_scale > 0 ? config.init_scale : 1.0 / n;
  Point u(n);
  if (config.init == InitKind::Gaussian) {
    std::normal_distribution<double> d(0.0, scale);
    for (int i = 0; i < n; ++i) u[i] = d(rng);
  } else {
    std::uniform_real_distribution<double> d(-scale, scale);
    for (int i = 0; i < n; ++i) u[i] = d(rng);
  }
  return u;
}

CriticalPoint classify_point(const Instance& inst, const Point& u, const OptimizerConfig& config) {
  CriticalPoint cp;
  cp.point = u;
  cp.grad_inf_norm = gradient(inst, u).lpNorm<Eigen::Infinity>();
  cp.distance_to_truth = solution_distance(u, inst.u_star);
  cp.min_hessian_eig = u.allFinite() ? min_eigenvalue(hessian(inst, u)) : -kInf;
  if (!u.allFinite()) {
    cp.classification = Classification::Unconverged;
  } else if (cp.distance_to_truth <= config.success_tol) {
    cp.classification = Classification::GlobalMin;
  } else if (cp.grad_inf_norm <= config.grad_tol) {
    cp.classification = cp.min_hessian_eig >= -config.eig_tol ? Classification::SpuriousSOSP
                                                              : Classification::StrictSaddle;
  } else {
    cp.classification = Classification::Unconverged;
  }
  return cp;
}

GdResult gd_descend(const Instance& inst, const OptimizerConfig& config, const Point& start) {
  config.validate();
  if (start.size() != inst.n()) throw DimensionError("start point dimension mismatch");
  Evaluator ev(inst);
  GdResult res;
  Vector u = start, g(inst.n()), trial(inst.n());
  double f = ev.value(u);
  ev.grad(u, g);
  if (config.record_trajectory) res.objective_trace.push_back(f);
  double t = config.step;
  bool diverged = false;
  int it = 0;
  for (; it < config.max_iters; ++it) {
    if (ev.R.norm() <= config.success_tol) break;
    if (g.lpNorm<Eigen::Infinity>() <= config.grad_tol) break;
    if (config.step_rule == StepRule::Fixed) {
      u -= config.step * g;
      f = ev.value(u);
    } else {
      const double gg = g.squaredNorm();
      if (it > 0) t *= 2.0;
      bool accepted = false;
      while (t > 1e-300) {
        trial = u - t * g;
        double ft = ev.value(trial);
        double drop = config.armijo_c * t * gg;
        bool armijo = ft <= f - drop;
        // Below rounding level, plain non-increase is the best available test.
        if (armijo || (drop < 1e-15 * std::abs(f) && ft <= f)) {
          u.swap(trial);
          f = ft;
          accepted = true;
          break;
        }
        t *= config.shrink;
      }
      if (!accepted) {
        ev.value(u);
        break;
      }
    }
    if (!std::isfinite(f) || f > config.overflow) {
      diverged = true;
      ++it;
      break;
    }
    ev.grad(u, g);
    if (config.record_trajectory) res.objective_trace.push_back(f);
  }
  res.iterations = it;
  if (diverged) {
    res.critical.point = u;
    res.critical.grad_inf_norm = kInf;
    res.critical.min_hessian_eig = -kInf;
    res.critical.distance_to_truth = kInf;
    res.critical.classification = Classification::Unconverged;
    return res;
  }
  res.critical = classify_point(inst, u, config);
  return res;
}

CriticalPoint gd_run(const Instance& inst, const OptimizerConfig& config, const RandomStream& stream) {
  return gd_descend(inst, config, sample_init(inst.n(), config, stream)).critical;
}

double reduced_objective(const ReducedProblem& p, const Vector& x) {
  double f = 0.0;
  const auto m = x.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    double a = x[i] * x[i] - 1.0;
    f += a * a;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) {
        double b = x[i] * x[j] - 1.0;
        f += p.eps * b * b;
      }
  }
  return f;
}

Vector reduced_gradient(const ReducedProblem& p, const Vector& x) {
  const auto m = x.size();
  Vector g(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j)
      if (j != i) s += x[j] * (x[i] * x[j] - 1.0);
    g[i] = 4.0 * (x[i] * x[i] * x[i] - x[i] + p.eps * s);
  }
  return g;
}

Matrix reduced_hessian(const ReducedProblem& p, const Vector& x) {
  const auto m = x.size();
  Matrix H(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      if (i == j) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < m; ++k)
          if (k != i) s += x[k] * x[k];
        H(i, i) = 4.0 * (3.0 * x[i] * x[i] - 1.0 + p.eps * s);
      } else {
        H(i, j) = 4.0 * p.eps * (2.0 * x[i] * x[j] - 1.0);
      }
    }
  return H;
}

Point lift_to_full(const Vector& x, int n, const SimpleGraph& graph, const std::vector<int>& S) {
  if (static_cast<Eigen::Index>(S.size()) != x.size()) throw DimensionError("|S| must equal dim x");
  if (graph.n != n) throw DimensionError("graph size must equal n");
  const double m = static_cast<double>(S.size());
  Point u = Point::Zero(n);
  for (std::size_t i = 0; i < S.size(); ++i) u[S[i]] = x[i] / m;
  return u;
}

Vector spurious_even_point(int m, double eps, const std::vector<int>& negative) {
  if (m < 2 || m % 2) throw HypothesisError("spurious_even needs an even m >= 2");
  if (!(eps >= 0.0 && eps < 1.0)) throw HypothesisError("eps must lie in [0, 1)");
  if (static_cast<int>(negative.size()) != m / 2) throw HypothesisError("need m/2 negative positions");
  const double a = std::sqrt((1.0 - eps) / (1.0 + (m - 1) * eps));
  Vector x = Vector::Constant(m, a);
  for (int i : negative) {
    if (i < 0 || i >= m) throw HypothesisError("negative position out of range");
    x[i] = -a;
  }
  return x;
}

Vector spurious_even(int m, double eps) {
  if (m < 2 || m % 2) throw HypothesisError("spurious_even needs an even m >= 2");
  if (!(eps >= 0.0) || 2.0 - (m + 4) * eps - (m - 2.0) * (m + 1) * eps * eps <= 0.0)
    throw HypothesisError("spurious_even needs 0 <= eps < 1/(m+1)");
  std::vector<int> neg;
  for (int i = m / 2; i < m; ++i) neg.push_back(i);
  return spurious_even_point(m, eps, neg);
}

std::vector<Vector> spurious_even_all(int m, double eps) {
  spurious_even(m, eps);
  std::vector<Vector> out;
  for (unsigned s = 0; s < (1u << m); ++s) {
    if (std::popcount(s) != m / 2) continue;
    std::vector<int> neg;
    for (int i = 0; i < m; ++i)
      if (s >> i & 1) neg.push_back(i);
    out.push_back(spurious_even_point(m, eps, neg));
  }
  return out;
}

std::vector<double> cubic_roots(double a, double b, double c, double d) {
  if (a == 0.0) throw std::invalid_argument("leading coefficient is zero");
  b /= a;
  c /= a;
  d /= a;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  std::vector<double> roots;
  if (disc > 0.0) {
    double s = std::sqrt(disc);
    roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s));
  } else if (p == 0.0) {
    roots.push_back(std::cbrt(-q));
  } else {
    double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }
  for (double& t : roots) {
    t -= b / 3.0;
    double f = ((t + b) * t + c) * t + d;
    double df = (3.0 * t + 2.0 * b) * t + c;
    if (df != 0.0) t -= f / df;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

OddConstruction spurious_odd(int m, double eps) {
  if (m < 3 || m % 2 == 0) throw HypothesisError("spurious_odd needs an odd m >= 3");
  if (!(eps > 0.0 && eps < 1.0 / (13.0 * (m + 1)))) throw HypothesisError("spurious_odd needs 0 < eps < 1/(13(m+1))");
  const int k = (m - 1) / 2;
  const double e = eps, kk = k;
  const double A = (1 + kk * e) * (1 + 2 * kk * e);
  const double B = -2 * (1 + kk * e) * (1 + (kk - 1) * e);
  const double Cc = (1 + kk * e) * (1 + (kk - 1) * e) * (2 * kk * kk * e * e + 2 * kk * e * e - kk * e - e + 1);
  const double D = -kk * kk * e * e * (1 + (kk - 1) * e) * (1 - e) * (1 - e);
  const double lo = 1 - (2 * kk + 1) * e, hi = 1 - (1.5 * kk + 1) * e;
  const double slack = 1e-12;
  std::optional<double> z;
  for (double r : cubic_roots(A, B, Cc, D))
    if (r >= lo - slack && r <= hi + slack) {
      z = r;
      break;
    }
  if (!z) throw HypothesisError("no cubic root inside the bracket");
  OddConstruction out;
  out.k = k;
  out.z = *z;
  out.y2 = std::sqrt(*z / (1 - e));
  out.y1 = out.y2 / (kk * e) * ((1 + kk * e) * *z - (kk * kk * e * e + (kk - 1) * e + 1)) /
           (*z + (1 + (kk - 1) * e));
  out.x = Vector::Constant(m, out.y2);
  out.x.head(k).setConstant(out.y1);

  const ReducedProblem prob{m, eps};
  if (!(out.y1 >= -2.0 && out.y1 <= -0.6 && out.y2 >= 0.5 && out.y2 <= 1.0))
    throw std::runtime_error("odd construction outside the proven ranges");
  if (reduced_gradient(prob, out.x).lpNorm<Eigen::Infinity>() >= 1e-8)
    throw std::runtime_error("odd construction is not stationary");
  if (!(min_eigenvalue(reduced_hessian(prob, out.x)) > 0.0))
    throw std::runtime_error("odd construction Hessian is not positive definite");
  return out;
}

CriticalPointScan find_critical_points_reduced(const ReducedProblem& p, int starts, const RandomStream& stream,
                                               const NewtonTolerances& tols) {
  if (p.m < 1 || !(p.eps >= 0.0)) throw HypothesisError("reduced problem needs m >= 1, eps >= 0");
  if (starts < 1) throw std::invalid_argument("starts must be >= 1");
  const int m = p.m;
  std::vector<std::optional<Vector>> found(starts);
#pragma omp parallel for schedule(dynamic, 16)
  for (int s = 0; s < starts; ++s) {
    auto rng = stream.child(static_cast<std::uint64_t>(s)).engine();
    std::uniform_real_distribution<double> box(-2.0, 2.0);
    Vector x(m);
    for (int i = 0; i < m; ++i) x[i] = box(rng);
    for (int it = 0; it <= tols.max_iters; ++it) {
      Vector g = reduced_gradient(p, x);
      if (!g.allFinite()) break;
      if (g.lpNorm<Eigen::Infinity>() <= tols.grad_tol) {
        found[s] = x;
        break;
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es(reduced_hessian(p, x));
      Vector coef = es.eigenvectors().transpose() * g;
      for (int i = 0; i < m; ++i) {
        double lam = es.eigenvalues()[i];
        coef[i] = std::abs(lam) > tols.pinv_cutoff ? coef[i] / lam : 0.0;
      }
      Vector step = -(es.eigenvectors() * coef);
      double len = step.norm();
      if (len > 1.0) step /= len;
      if (len == 0.0) break;
      x += step;
    }
  }
  CriticalPointScan scan;
  const Vector ones = Vector::Ones(m);
  for (int s = 0; s < starts; ++s) {
    if (!found[s]) {
      ++scan.dropped;
      continue;
    }
    const Vector& x = *found[s];
    bool seen = false;
    for (const auto& cp : scan.points)
      if ((cp.point - x).norm() <= tols.dedupe_radius) {
        seen = true;
        break;
      }
    if (seen) continue;
    CriticalPoint cp;
    cp.point = x;
    cp.grad_inf_norm = reduced_gradient(p, x).lpNorm<Eigen::Infinity>();
    cp.min_hessian_eig = min_eigenvalue(reduced_hessian(p, x));
    cp.distance_to_truth = solution_distance(x, ones);
    if (cp.distance_to_truth <= tols.success_tol)
      cp.classification = Classification::GlobalMin;
    else
      cp.classification = cp.min_hessian_eig >= -tols.eig_tol ? Classification::SpuriousSOSP
                                                              : Classification::StrictSaddle;
    scan.points.push_back(std::move(cp));
  }
  return scan;
}

SaddleScan strict_saddle_scan(const Instance& inst, double eta, int samples, const RandomStream& stream,
                              const SaddleScanOptions& options) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const int n = inst.n();
  const double R = 8.0 * n + 2.0;
  OptimizerConfig descent;
  descent.max_iters = std::max(1, options.descent_iters);
  std::vector<double> beta(samples, kInf), gamma(samples, kInf);
  std::vector<int> evaluated(samples, 0), discarded(samples, 0);
#pragma omp parallel for schedule(dynamic, 8)
  for (int s = 0; s < samples; ++s) {
    auto rng = stream.child(static_cast<std::uint64_t>(s)).engine();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Point u(n);
    for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    u *= R * std::pow(unif(rng), 1.0 / n) / u.norm();
    // The raw sample and the end of a short descent from it.
    Point ends[2] = {u, gd_descend(inst, descent, u).critical.point};
    for (const Point& p : ends) {
      double away = std::min((p - inst.u_star).lpNorm<1>(), (p + inst.u_star).lpNorm<1>());
      if (away <= eta || !p.allFinite() || p.norm() > R) {
        ++discarded[s];
        continue;
      }
      ++evaluated[s];
      double gi = gradient(inst, p).lpNorm<Eigen::Infinity>();
      double lam = min_eigenvalue(hessian(inst, p));
      if (lam > -options.curvature_small) beta[s] = std::min(beta[s], gi);
      if (gi <= options.grad_small) gamma[s] = std::min(gamma[s], -lam);
    }
  }
  SaddleScan out;
  out.beta_hat = *std::min_element(beta.begin(), beta.end());
  out.gamma_hat = *std::min_element(gamma.begin(), gamma.end());
  for (int s = 0; s < samples; ++s) {
    out.evaluated += evaluated[s];
    out.discarded += discarded[s];
  }
  out.violation = out.beta_hat <= options.grad_small || out.gamma_hat <= options.curvature_small;
  return out;
}

ZeroTruthVerdict classify_zero_truth(const WeightMatrix& C) {
  const int n = static_cast<int>(C.rows());
  ZeroTruthVerdict v;
  for (int i = 0; i < n; ++i)
    if (!(C(i, i) > 0.0)) {
      Point e = Point::Zero(n);
      e[i] = 1.0;
      Instance zero{C, Vector::Zero(n), true};
      if (objective(zero, e) != 0.0) throw std::logic_error("zero-truth witness has nonzero objective");
      v.no_sscp = false;
      v.witness = e;
      return v;
    }
  return v;
}

}  // namespace mcl
