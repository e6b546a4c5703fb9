#include "mcl/instance.hpp"

#include <cmath>
#include <string>

namespace mcl {

namespace {

void check_dims(const Instance& inst, const Point& u) {
  if (u.size() != inst.n())
    throw DimensionError("point has dimension " + std::to_string(u.size()) +
                         ", instance has " + std::to_string(inst.n()));
}

}  // namespace

double l1(const Matrix& m) { return m.cwiseAbs().sum(); }
double l1(const Vector& v) { return v.cwiseAbs().sum(); }

void validate(const Instance& inst) {
  if (inst.C.rows() != inst.C.cols() || inst.C.rows() == 0)
    throw DimensionError("weight matrix must be square and nonempty");
  if (inst.u_star.size() != inst.C.rows())
    throw DimensionError("u_star dimension does not match C");
  if (!inst.C.allFinite() || !inst.u_star.allFinite())
    throw HypothesisError("non-finite entries");
  if ((inst.C.array() < 0.0).any())
    throw HypothesisError("weight matrix has a negative entry");
  if (inst.C != inst.C.transpose())
    throw HypothesisError("weight matrix is not symmetric");
  if (inst.normalized) {
    if (std::abs(l1(inst.C) - 1.0) > kNormalizationTol)
      throw HypothesisError("weight matrix is not normalized");
    if (!inst.zero_truth() && std::abs(l1(inst.u_star) - 1.0) > kNormalizationTol)
      throw HypothesisError("u_star is not normalized");
  }
}

Instance normalize(const Instance& raw) {
  if (raw.C.rows() != raw.C.cols() || raw.C.rows() == 0)
    throw DimensionError("weight matrix must be square and nonempty");
  if (raw.u_star.size() != raw.C.rows())
    throw DimensionError("u_star dimension does not match C");
  if ((raw.C.array() < 0.0).any())
    throw HypothesisError("weight matrix has a negative entry");
  Instance out;
  out.C = 0.5 * (raw.C + raw.C.transpose());
  double c1 = l1(out.C);
  if (!(c1 > 0.0)) throw HypothesisError("weight matrix has zero l1 norm");
  out.C /= c1;
  out.u_star = raw.u_star;
  double u1 = l1(out.u_star);
  if (u1 > 0.0) out.u_star /= u1;
  out.normalized = true;
  return out;
}

Instance make_instance(const Matrix& C, const Vector& u_star) {
  return normalize(Instance{C, u_star, false});
}

double objective(const Instance& inst, const Point& u) {
  check_dims(inst, u);
  const int n = inst.n();
  const auto& C = inst.C;
  const auto& v = inst.u_star;
  double f = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double r = u[i] * u[j] - v[i] * v[j];
      f += C(i, j) * r * r;
    }
  return f;
}

Vector gradient(const Instance& inst, const Point& u) {
  check_dims(inst, u);
  const int n = inst.n();
  const auto& C = inst.C;
  const auto& v = inst.u_star;
  Vector g(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += C(j, k) * u[j] * (u[k] * u[j] - v[k] * v[j]);
    g[k] = 4.0 * s;
  }
  return g;
}

Matrix hessian(const Instance& inst, const Point& u) {
  check_dims(inst, u);
  const int n = inst.n();
  const auto& C = inst.C;
  const auto& v = inst.u_star;
  Matrix H(n, n);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k) {
      if (k == l) {
        double s = C(k, k) * (3.0 * u[k] * u[k] - v[k] * v[k]);
        for (int j = 0; j < n; ++j)
          if (j != k) s += C(k, j) * u[j] * u[j];
        H(k, k) = 4.0 * s;
      } else {
        H(k, l) = 4.0 * C(k, l) * (2.0 * u[k] * u[l] - v[k] * v[l]);
      }
    }
  return H;
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

std::optional<double> rip_constant(const Instance& inst) {
  double lo = inst.C.minCoeff();
  double hi = inst.C.maxCoeff();
  if (!(lo > 0.0)) return std::nullopt;
  return (hi - lo) / (hi + lo);
}

double incoherence(const GroundTruth& u_star) {
  double total = u_star.squaredNorm();
  if (!(total > 0.0)) throw HypothesisError("incoherence of the zero vector");
  return static_cast<double>(u_star.size()) * u_star.cwiseAbs2().maxCoeff() / total;
}

double solution_distance(const Point& u, const GroundTruth& u_star) {
  if (u.size() != u_star.size()) throw DimensionError("dimension mismatch");
  const auto n = u.size();
  double s = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = u[i] * u[j] - u_star[i] * u_star[j];
      s += r * r;
    }
  return std::sqrt(s);
}

}  // namespace mcl
