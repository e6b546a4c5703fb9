#include "mcl/families.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace mcl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw HypothesisError("alpha must lie in [0, 1]");
}

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw HypothesisError("delta must lie in [0, 1)");
}

std::vector<int> resolve_signs(int n, const std::vector<int>& signs) {
  if (signs.empty()) return std::vector<int>(n, 1);
  if (static_cast<int>(signs.size()) != n) throw HypothesisError("sign vector must have n entries");
  for (int s : signs)
    if (s != 1 && s != -1) throw HypothesisError("signs must be +1 or -1");
  return signs;
}

double safe_div(double num, double den) { return den == 0.0 ? kInf : num / den; }

}  // namespace

std::mt19937_64 RandomStream::engine() const {
  return std::mt19937_64(splitmix(seed ^ splitmix(stream_id + 0x632be59bd9b4e019ULL)));
}

RandomStream RandomStream::child(std::uint64_t id) const {
  return RandomStream{splitmix(seed ^ splitmix(stream_id)), id};
}

bool SimpleGraph::adjacent(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::find(edges.begin(), edges.end(), std::make_pair(i, j)) != edges.end();
}

Instance rip_extremal_instance(int n, double delta) {
  if (n < 2) throw HypothesisError("rip_extremal_instance needs n >= 2");
  check_delta(delta);
  const double den = (1 + delta) * n * n - 2 * delta;
  Matrix C = Matrix::Constant(n, n, (1 + delta) / den);
  C(0, 0) = (1 - delta) / den;
  Vector u = Vector::Zero(n);
  u[0] = 1.0;
  return Instance{C, u, true};
}

GroundTruth incoherent_truth(int n, double mu) {
  if (!(mu >= 1.0 && mu <= n)) throw HypothesisError("mu must lie in [1, n]");
  const int k = static_cast<int>(std::ceil(n / mu - 1e-12));
  Vector u = Vector::Zero(n);
  u.head(k).setConstant(1.0 / k);
  return u;
}

Instance rip3_instance(int n, double mu, double delta) {
  if (n < 4) throw HypothesisError("rip3_instance needs n >= 4");
  if (!(mu >= 1.0 && mu <= n)) throw HypothesisError("mu must lie in [1, n]");
  check_delta(delta);
  if (mu > n / 2.0) return rip_extremal_instance(n, delta);
  const int l = static_cast<int>(std::ceil(n / mu - 1e-12));
  const double den = (1 + delta) * n * n - 4 * delta * (l - 1);
  Matrix C = Matrix::Constant(n, n, (1 + delta) / den);
  for (int i = 1; i < l; ++i) C(0, i) = C(i, 0) = (1 - delta) / den;
  return Instance{C, incoherent_truth(n, mu), true};
}

Instance easiest_star(int n, const std::vector<int>& signs) {
  if (n < 5) throw HypothesisError("easiest_star needs n >= 5");
  auto s = resolve_signs(n, signs);
  Matrix C = Matrix::Constant(n, n, 1.0 / (double(n) * (n - 1)));
  C.diagonal().setZero();
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = s[i] / double(n);
  return Instance{C, u, true};
}

Instance easiest_diamond(int n, const std::vector<int>& signs) {
  if (n < 5) throw HypothesisError("easiest_diamond needs n >= 5");
  auto s = resolve_signs(n, signs);
  Matrix C = Matrix::Constant(n, n, 1.0 / (double(n) * n));
  Vector u(n);
  for (int i = 0; i < n; ++i) u[i] = s[i] / double(n);
  return Instance{C, u, true};
}

SimpleGraph split_graph(int n, int m) {
  if (!(1 <= m && m <= n)) throw HypothesisError("split_graph needs 1 <= m <= n");
  SimpleGraph g{n, {}};
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i + 1, m); j < n; ++j) g.edges.emplace_back(i, j);
  return g;
}

bool is_independent(const SimpleGraph& g, const std::vector<int>& S) {
  for (std::size_t a = 0; a < S.size(); ++a)
    for (std::size_t b = a + 1; b < S.size(); ++b)
      if (S[a] == S[b] || g.adjacent(S[a], S[b])) return false;
  return true;
}

namespace {

int mis(const std::vector<std::uint64_t>& adj, std::uint64_t cand, int size, int best) {
  if (!cand) return std::max(size, best);
  if (size + std::popcount(cand) <= best) return best;
  int v = std::countr_zero(cand);
  // Branch on v: take it, or drop it.
  best = mis(adj, cand & ~(adj[v] | (std::uint64_t{1} << v)), size + 1, best);
  if (adj[v] & cand) best = mis(adj, cand & ~(std::uint64_t{1} << v), size, best);
  return best;
}

}  // namespace

int max_independent_set_size(const SimpleGraph& g) {
  if (g.n > 64) throw HypothesisError("max independent set check supports n <= 64");
  std::vector<std::uint64_t> adj(g.n, 0);
  for (auto [i, j] : g.edges) {
    adj[i] |= std::uint64_t{1} << j;
    adj[j] |= std::uint64_t{1} << i;
  }
  std::uint64_t all = g.n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n) - 1;
  return mis(adj, all, 0, 0);
}

Instance one_param_instance(const SimpleGraph& g, const std::vector<int>& S, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw HypothesisError("eps must lie in [0, 1]");
  const int n = g.n, m = static_cast<int>(S.size());
  for (int s : S)
    if (s < 0 || s >= n) throw HypothesisError("independent set node out of range");
  if (m == 0 || !is_independent(g, S)) throw HypothesisError("S is not an independent set");
  if (m < max_independent_set_size(g)) throw HypothesisError("S is not a maximum independent set");
  const double Z = 2.0 * g.edge_count() + n + double(m) * (m - 1) * eps;
  Matrix C = Matrix::Zero(n, n);
  for (int a : S)
    for (int b : S)
      if (a != b) C(a, b) = eps / Z;
  for (auto [i, j] : g.edges) C(i, j) = C(j, i) = 1.0 / Z;
  for (int i = 0; i < n; ++i) C(i, i) = 1.0 / Z;
  Vector u = Vector::Zero(n);
  for (int s : S) u[s] = 1.0 / m;
  if (std::abs(l1(C) - 1.0) > kNormalizationTol) throw std::logic_error("one_param normalization");
  return Instance{C, u, true};
}

BernoulliSample bernoulli_instance(int n, double p, const RandomStream& stream,
                                   const GroundTruth& u_star) {
  if (!(p > 0.0 && p <= 1.0)) throw HypothesisError("p must lie in (0, 1]");
  if (u_star.size() != n) throw DimensionError("u_star dimension does not match n");
  auto rng = stream.engine();
  std::bernoulli_distribution coin(p);
  BernoulliSample out;
  Matrix mask(n, n);
  while (true) {
    mask.setZero();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        if (coin(rng)) mask(i, j) = mask(j, i) = 1.0;
    if (mask.sum() > 0.0) break;
    ++out.resamples;
  }
  out.nonzero = static_cast<int>(mask.sum());
  Vector u = u_star;
  double u1 = l1(u);
  if (u1 > 0.0) u /= u1;
  out.instance = Instance{mask / mask.sum(), u, true};
  return out;
}

Instance generate(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::RipExtremal: return rip_extremal_instance(spec.n, spec.delta);
    case FamilyKind::Rip3: return rip3_instance(spec.n, spec.mu, spec.delta);
    case FamilyKind::EasiestStar: return easiest_star(spec.n, spec.signs);
    case FamilyKind::EasiestDiamond: return easiest_diamond(spec.n, spec.signs);
    case FamilyKind::OneParam: {
      SimpleGraph g = spec.graph ? *spec.graph : split_graph(spec.n, spec.m);
      std::vector<int> S(spec.m);
      for (int i = 0; i < spec.m; ++i) S[i] = i;
      return one_param_instance(g, S, spec.eps);
    }
    case FamilyKind::Bernoulli:
      return bernoulli_instance(spec.n, spec.p, RandomStream{spec.seed, 0}, incoherent_truth(spec.n, spec.mu))
          .instance;
  }
  throw std::logic_error("unknown family");
}

double bound_rip(int n, double alpha, double delta) {
  check_alpha(alpha);
  check_delta(delta);
  return safe_div(double(n) * n * (1 + delta) - 2 * delta, 2 * alpha * (1 - delta));
}

double bound_rip_incoh(int n, double alpha, double delta, double mu) {
  check_alpha(alpha);
  check_delta(delta);
  if (!(mu >= 1.0 && mu <= n)) throw HypothesisError("mu must lie in [1, n]");
  double a = std::max(safe_div(n * (1 + delta), 4 * alpha * (1 - delta)), safe_div(1.0, 2 * (1 - alpha) * mu));
  double b = std::min(safe_div(1.0, 1.0 / mu - 1.0 / n), 3 * mu);
  return a * b;
}

double bound_bernoulli(int n, double alpha, double mu) {
  check_alpha(alpha);
  if (!(mu >= 1.0 && mu <= n)) throw HypothesisError("mu must lie in [1, n]");
  double a = std::max(safe_div(3.0 * n, 4 * alpha), safe_div(1.0, 2 * (1 - alpha) * mu));
  return a * safe_div(1.0, 1.0 / mu - 1.0 / n);
}

double bernoulli_p_threshold(int n, double mu, double eta) {
  if (!(eta > 2.0)) throw HypothesisError("eta must exceed 2");
  if (n < 2) throw HypothesisError("n must be at least 2");
  return std::min(1.0, (16.0 * (1 + eta * mu) * std::log(double(n)) + 16.0) / n);
}

double bernoulli_probability_bound(int n, double eta) {
  if (!(eta > 2.0)) throw HypothesisError("eta must exceed 2");
  return 1.0 - 3.0 * std::pow(double(n), -eta / 2.0 + 1.0);
}

double rip3_lower_bound(int n, double alpha, double delta, double mu) {
  check_alpha(alpha);
  check_delta(delta);
  if (!(mu >= 1.0 && mu <= n)) throw HypothesisError("mu must lie in [1, n]");
  const double l = std::ceil(n / mu - 1e-12);
  double lead = safe_div(n * (1 + delta), 4 * alpha * (1 - delta));
  return lead * std::min(safe_div(n * mu, mu * l - mu), mu);
}

OneParamBounds bounds_one_param(int n, int m, double alpha) {
  if (!(n >= m && m >= 36)) throw HypothesisError("bounds_one_param needs n >= m >= 36");
  check_alpha(alpha);
  const double nn = double(n) * n;
  OneParamBounds b;
  b.no_spurious_below = 1.0 / (36 * alpha / nn + std::min(72 * alpha * m / nn, 2 * (1 - alpha)));
  b.spurious_above = 18.0 / 17.0 * std::max(safe_div(13 * nn, 2 * alpha), safe_div(1.0, 2 * (1 - alpha)));
  return b;
}

}  // namespace mcl
