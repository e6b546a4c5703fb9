#pragma once

#include <optional>

#include <Eigen/Dense>

#include "mcl/errors.hpp"

namespace mcl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using WeightMatrix = Matrix;
using GroundTruth = Vector;
using Point = Vector;

inline constexpr double kNormalizationTol = 1e-12;

struct Instance {
  WeightMatrix C;
  GroundTruth u_star;
  bool normalized = false;

  int n() const { return static_cast<int>(C.rows()); }
  // u* == 0; only landscape::classify_zero_truth accepts these.
  bool zero_truth() const { return u_star.isZero(0.0); }
};

// Checks shapes, symmetry, nonnegativity and (if flagged) unit l1 norms.
void validate(const Instance& inst);

// Symmetrizes C and scales C and u* to unit entrywise l1 norm.
Instance normalize(const Instance& raw);
Instance make_instance(const Matrix& C, const Vector& u_star);

double objective(const Instance& inst, const Point& u);
Vector gradient(const Instance& inst, const Point& u);
Matrix hessian(const Instance& inst, const Point& u);
double min_eigenvalue(const Matrix& symmetric);

// Smallest delta for which the RIP(2,2) ratio condition holds; none if C has a zero.
std::optional<double> rip_constant(const Instance& inst);
double incoherence(const GroundTruth& u_star);
double solution_distance(const Point& u, const GroundTruth& u_star);

double l1(const Matrix& m);
double l1(const Vector& v);

}  // namespace mcl
