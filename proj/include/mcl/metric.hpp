#pragma once

#include <optional>

#include "mcl/graph.hpp"
#include "mcl/instance.hpp"

namespace mcl {

inline constexpr int kEnumerationLimit = 14;
inline constexpr int kPatternLimit = 6;

struct MetricResult {
  double value = 0.0;     // 1/distance, +inf when distance is 0
  double distance = 0.0;  // alpha*|C - C~|_1 + (1-alpha)*|u* - u~*|_1
  DegeneracyCertificate certificate;
  Instance nearest;
  bool found = true;  // false when no admissible structure exists
};

// Minimum weighted l1 distance to the closure of the degenerate set, by
// enumerating target supports T and the cut / bipartition / isolated-node
// structures on each. Parallel over T; the reduction is schedule independent.
MetricResult exact_metric(const Instance& inst, double alpha, int max_n = kEnumerationLimit);
// Same kernel on one thread.
MetricResult exact_metric_serial(const Instance& inst, double alpha, int max_n = kEnumerationLimit);

// 2*alpha*s + 2*(1-alpha)*t for the certificate's zero mass s and dropped truth mass t.
double certificate_distance(const Instance& inst, const DegeneracyCertificate& cert, double alpha);
// Nearest instance vanishing on the certificate's zero set with truth supported in T.
Instance realize_certificate(const Instance& inst, const DegeneracyCertificate& cert);
double weighted_distance(const Instance& a, const Instance& b, double alpha);

double alpha_star(int n);
double alpha_diamond(int n);
double metric_min(int n, double alpha);
// Closed forms in the three regimes where one is known; nullopt in between.
std::optional<double> metric_min_closed_form(int n, double alpha);

enum class Easiest { Star, Diamond };
bool easiest_instances_check(const Instance& inst, Easiest which);

double metric_one_param(int n, int m, int edge_count, double eps, double alpha);

// Distance to SD_eps (n <= 6): degenerate instances whose G1 splits into
// non-bipartite components, with empty I00 and nonzero magnitudes >= eps.
MetricResult metric_sd_eps(const Instance& inst, double alpha, double eps);

// Inverse of the smallest truth-only distance 2*sum_{i not in T}|u*_i| over
// supports T that make (C, u~*) degenerate with C held fixed.
double metric_fixed_C(const Instance& inst);

// Cheapest l1 move of v (length-k, nonnegative) onto {x >= floor on the
// chosen entries, 0 elsewhere, sum x = 1}; returns +inf if infeasible.
// keep[i] marks the chosen entries; weight[i] is the multiplicity of entry i.
double floor_projection_cost(const Vector& v, const std::vector<char>& keep,
                             const Vector& weight, double floor);
// Realizes the projection above.
Vector floor_projection(const Vector& v, const std::vector<char>& keep,
                        const Vector& weight, double floor);

}  // namespace mcl
