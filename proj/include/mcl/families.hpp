#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "mcl/instance.hpp"

namespace mcl {

// Seeded stream; (seed, stream_id) determines every draw.
struct RandomStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::mt19937_64 engine() const;
  RandomStream child(std::uint64_t id) const;
};

struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, no self-loops

  bool adjacent(int i, int j) const;
  int edge_count() const { return static_cast<int>(edges.size()); }
};

enum class FamilyKind { RipExtremal, Rip3, EasiestStar, EasiestDiamond, OneParam, Bernoulli };

struct FamilySpec {
  FamilyKind kind = FamilyKind::RipExtremal;
  int n = 0;
  int m = 0;
  double delta = 0.0;
  double mu = 1.0;
  double eps = 0.0;
  double p = 1.0;
  std::vector<int> signs;
  std::optional<SimpleGraph> graph;  // OneParam; defaults to split_graph(n, m)
  std::uint64_t seed = 0;
};

Instance generate(const FamilySpec& spec);

Instance rip_extremal_instance(int n, double delta);
Instance rip3_instance(int n, double mu, double delta);
Instance easiest_star(int n, const std::vector<int>& signs = {});
Instance easiest_diamond(int n, const std::vector<int>& signs = {});

SimpleGraph split_graph(int n, int m);
bool is_independent(const SimpleGraph& g, const std::vector<int>& S);
int max_independent_set_size(const SimpleGraph& g);
Instance one_param_instance(const SimpleGraph& g, const std::vector<int>& S, double eps);

// u*_i = 1/k on the first k = ceil(n/mu) entries.
GroundTruth incoherent_truth(int n, double mu);

struct BernoulliSample {
  Instance instance;
  int resamples = 0;
  int nonzero = 0;  // ordered nonzero entries of C
};
BernoulliSample bernoulli_instance(int n, double p, const RandomStream& stream,
                                   const GroundTruth& u_star);

double bound_rip(int n, double alpha, double delta);
double bound_rip_incoh(int n, double alpha, double delta, double mu);
double bound_bernoulli(int n, double alpha, double mu);
double bernoulli_p_threshold(int n, double mu, double eta);
double bernoulli_probability_bound(int n, double eta);
// Literal evaluation of n(1+d)/(4a(1-d)) * min{n mu/(mu l - mu), mu}, l = ceil(n/mu).
double rip3_lower_bound(int n, double alpha, double delta, double mu);

struct OneParamBounds {
  double no_spurious_below;
  double spurious_above;
};
OneParamBounds bounds_one_param(int n, int m, double alpha);

}  // namespace mcl
