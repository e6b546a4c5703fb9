#pragma once

#include <cstdint>
#include <functional>

#include "mcl/graph.hpp"
#include "mcl/instance.hpp"

namespace oracle {

// Every (T, ordered partition, isolated node) with its explicit zero set Z.
struct NaiveMetric {
  double distance;
  mcl::DegeneracyCertificate certificate;
};
NaiveMetric naive_exact_metric(const mcl::Instance& inst, double alpha);

// Grid of starts plus Levenberg-Marquardt on the residuals sqrt(C_ij)(u_i u_j - M_ij).
struct SecondSolution {
  bool found = false;
  mcl::Point u;
};
SecondSolution search_second_solution(const mcl::Instance& inst);

// Projected descent of sum C_ij u_i^2 u_j^2 on the unit sphere from random starts;
// a zero minimum means nonzero global solutions exist when u* = 0.
bool zero_truth_has_nonzero_solution(const mcl::Matrix& C, int starts, std::uint64_t seed);

mcl::Vector fd_gradient(const std::function<double(const mcl::Vector&)>& f, const mcl::Vector& x, double h);
mcl::Matrix fd_jacobian(const std::function<mcl::Vector(const mcl::Vector&)>& g, const mcl::Vector& x, double h);

double rel_err(const mcl::Matrix& a, const mcl::Matrix& b);

}  // namespace oracle
