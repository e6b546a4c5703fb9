#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mcl/errors.hpp"
#include "mcl/families.hpp"
#include "mcl/graph.hpp"
#include "mcl/metric.hpp"
#include "oracles/oracles.hpp"

using namespace mcl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instance random_instance(int n, std::mt19937_64& rng, double zero_prob) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> g;
  Matrix C(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) C(i, j) = C(j, i) = u01(rng) < zero_prob ? 0.0 : 0.05 + u01(rng);
  if (C.isZero(0.0)) C(0, 0) = 1.0;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u01(rng) < zero_prob ? 0.0 : g(rng);
  if (v.isZero(0.0)) v[0] = 1.0;
  return make_instance(C, v);
}

}  // namespace

TEST(ExactMetric, RipExtremalExamples) {
  for (double a : {0.2, 0.5, 0.9}) {
    MetricResult r = exact_metric(rip_extremal_instance(5, 0.0), a);
    EXPECT_NEAR(r.value, 25.0 / (2 * a), 1e-12 * r.value);
    EXPECT_EQ(r.certificate.kind, CertificateKind::Bipartite);
    EXPECT_EQ(r.certificate.zero_set(5), (std::vector<std::pair<int, int>>{{0, 0}}));
  }
  MetricResult r = exact_metric(rip_extremal_instance(5, 0.5), 0.5);
  EXPECT_NEAR(r.value, 73.0, 1e-12 * 73);
}

TEST(ExactMetric, InfiniteIffClosure) {
  std::mt19937_64 rng(13);
  int closure = 0;
  for (int rep = 0; rep < 600; ++rep) {
    Instance inst = random_instance(3 + rep % 5, rng, 0.4);
    MetricResult r = exact_metric(inst, 0.5);
    EXPECT_EQ(r.value == kInf, in_closure(inst)) << rep;
    EXPECT_EQ(r.value == kInf, r.distance == 0.0);
    closure += in_closure(inst);
  }
  EXPECT_GT(closure, 50);
  EXPECT_LT(closure, 550);
}

TEST(ExactMetric, ResultInvariants) {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 200; ++rep) {
    Instance inst = random_instance(3 + rep % 5, rng, rep % 2 ? 0.2 : 0.0);
    const double a = 0.1 + 0.8 * (rep % 9) / 8.0;
    MetricResult r = exact_metric(inst, a);
    EXPECT_TRUE(in_closure(r.nearest));
    EXPECT_NEAR(weighted_distance(inst, r.nearest, a), r.distance, 1e-12);
    EXPECT_NEAR(certificate_distance(inst, r.certificate, a), r.distance, 1e-12);
    if (r.distance > 0) EXPECT_DOUBLE_EQ(r.value, 1.0 / r.distance);
  }
}

TEST(ExactMetric, MatchesNaiveEnumeration) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + rep % 6;
    Instance inst = random_instance(n, rng, rep % 3 == 0 ? 0.3 : 0.0);
    const double a = std::uniform_real_distribution<double>(0, 1)(rng);
    MetricResult fast = exact_metric(inst, a);
    oracle::NaiveMetric slow = oracle::naive_exact_metric(inst, a);
    EXPECT_NEAR(fast.distance, slow.distance, 1e-12) << rep;
  }
}

TEST(ExactMetric, SerialAndParallelAgree) {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 20; ++rep) {
    Instance inst = random_instance(9, rng, 0.1);
    MetricResult a = exact_metric(inst, 0.6), b = exact_metric_serial(inst, 0.6);
    EXPECT_EQ(a.distance, b.distance);
    EXPECT_TRUE(a.certificate == b.certificate);
  }
}

TEST(ExactMetric, Sandwich) {
  // Any realized degenerate instance is at least as far as the optimum.
  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 3 + rep % 4;
    Instance inst = random_instance(n, rng, 0.0);
    const double a = 0.3 + 0.3 * (rep % 3);
    MetricResult best = exact_metric(inst, a);
    DegeneracyCertificate cert;
    for (int i = 0; i < n; ++i)
      if (rng() % 2) cert.support.push_back(i);
    if (cert.support.empty()) cert.support.push_back(static_cast<int>(rng() % n));
    cert.kind = CertificateKind::Bipartite;
    for (int i : cert.support) (rng() % 2 ? cert.I : cert.J).push_back(i);
    if (static_cast<int>(cert.zero_set(n).size()) == n * n) continue;
    Instance near = realize_certificate(inst, cert);
    ASSERT_TRUE(in_closure(near));
    EXPECT_GE(weighted_distance(inst, near, a), best.distance - 1e-15);
  }
}

TEST(ExactMetric, Rejects) {
  Instance z = make_instance(Matrix::Ones(3, 3), Vector::Zero(3));
  EXPECT_THROW(exact_metric(z, 0.5), HypothesisError);
  EXPECT_THROW(exact_metric(make_instance(Matrix::Ones(15, 15), Vector::Ones(15)), 0.5), HypothesisError);
  EXPECT_THROW(exact_metric(make_instance(Matrix::Ones(3, 3), Vector::Ones(3)), 1.5), HypothesisError);
}

TEST(MetricMin, Examples) {
  EXPECT_NEAR(metric_min(5, 0.5), 2.5, 1e-12);
  EXPECT_NEAR(metric_min(5, 5.0 / 7.0), 2.1875, 1e-12);
  EXPECT_NEAR(metric_min(5, 1.0), 7.5, 1e-12);
  EXPECT_EQ(alpha_star(5), 0.5);
  EXPECT_NEAR(alpha_diamond(5), 5.0 / 7.0, 1e-16);
  EXPECT_NEAR(alpha_star(20), 304.0 / 338.0, 1e-16);
  double prev = 0;
  for (int n = 5; n < 200; ++n) {
    EXPECT_GT(alpha_star(n), prev);
    EXPECT_LT(alpha_star(n), 1.0);
    prev = alpha_star(n);
  }
  EXPECT_THROW(metric_min(4, 0.5), HypothesisError);
}

TEST(MetricMin, ClosedFormsInTheirRegimes) {
  for (int n = 5; n <= 12; ++n) {
    const double x = n;
    const double as = alpha_star(n), ad = alpha_diamond(n), top = x / (x + 1);
    for (int k = 0; k < 50; ++k) {
      const double a = 0.01 + 0.98 * k / 49.0;
      double want;
      if (a <= as)
        want = x / (4 * a);
      else if (a >= top)
        want = x * (x + 1) / (2 * (1 - a) * (x - 2) * (x + 1) + 4);
      else if (a >= ad)
        want = x * x / (2 * (1 - a) * (x - 2) * x + 4 * a);
      else
        continue;
      EXPECT_NEAR(metric_min(n, a), want, 1e-10 * want) << n << " " << a;
      EXPECT_NEAR(*metric_min_closed_form(n, a), want, 1e-10 * want);
    }
  }
}

TEST(Easiest, Checks) {
  for (int n : {5, 6, 8}) {
    Instance star = easiest_star(n);
    EXPECT_TRUE(easiest_instances_check(star, Easiest::Star));
    std::vector<int> signs(n, 1);
    signs[1] = -1;
    EXPECT_TRUE(easiest_instances_check(easiest_star(n, signs), Easiest::Star));
    EXPECT_FALSE(easiest_instances_check(star, Easiest::Diamond));
    EXPECT_NEAR(exact_metric(star, alpha_star(n)).value, metric_min(n, alpha_star(n)), 1e-10);

    Instance diamond = easiest_diamond(n);
    EXPECT_TRUE(easiest_instances_check(diamond, Easiest::Diamond));
    EXPECT_NEAR(exact_metric(diamond, alpha_diamond(n)).value, metric_min(n, alpha_diamond(n)), 1e-10);
  }
  // Uniform weights with a non-flat truth match neither shape.
  Vector v(5);
  v << 1, 2, 1, 1, 1;
  Instance u = make_instance(Matrix::Ones(5, 5), v);
  EXPECT_FALSE(easiest_instances_check(u, Easiest::Star));
  EXPECT_FALSE(easiest_instances_check(u, Easiest::Diamond));
}

TEST(OneParam, ClosedForm) {
  EXPECT_NEAR(metric_one_param(5, 5, 0, 0.5, 0.5), 3.75, 1e-12);
  EXPECT_EQ(metric_one_param(5, 5, 0, 0.0, 0.5), kInf);
  for (int m = 5; m <= 8; ++m) {
    SimpleGraph g = split_graph(m, m);
    std::vector<int> S(m);
    for (int i = 0; i < m; ++i) S[i] = i;
    for (double eps : {0.05, 0.25, 0.5}) {
      Instance inst = one_param_instance(g, S, eps);
      for (double a : {0.3, 0.9}) {
        double want = metric_one_param(m, m, 0, eps, a);
        EXPECT_NEAR(exact_metric(inst, a).value, want, 1e-10 * want);
      }
    }
    double prev = kInf;
    for (int k = 1; k <= 50; ++k) {
      double v = metric_one_param(m, m, 0, 0.01 * k, alpha_star(m));
      EXPECT_LT(v, prev);
      prev = v;
    }
  }
}

TEST(FloorProjection, MatchesGridSearch) {
  // Weighted entries (multiplicities 1 and 2) with unit total mass.
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vector w(4);
  w << 1, 2, 1, 2;
  for (int rep = 0; rep < 12; ++rep) {
    Vector v(4);
    for (int i = 0; i < 4; ++i) v[i] = u01(rng);
    v /= w.dot(v);
    std::vector<char> keep{1, 1, 1, 0};
    if (rep % 3 == 0) keep = {1, 0, 1, 1};
    const double floor = 0.02 + 0.12 * u01(rng);
    const double cost = floor_projection_cost(v, keep, w, floor);
    Vector x = floor_projection(v, keep, w, floor);
    EXPECT_NEAR(w.dot(x), 1.0, 1e-12);
    EXPECT_NEAR(w.dot((x - v).cwiseAbs()), cost, 1e-12);
    for (int i = 0; i < 4; ++i) EXPECT_GE(x[i], keep[i] ? floor - 1e-15 : 0.0);

    std::vector<int> idx;
    for (int i = 0; i < 4; ++i)
      if (keep[i]) idx.push_back(i);
    double grid = kInf;
    const double h = 1e-3;
    for (double a = floor; a <= 1.0; a += h)
      for (double b = floor; b <= 1.0; b += h) {
        double c = (1.0 - w[idx[0]] * a - w[idx[1]] * b) / w[idx[2]];
        if (c < floor) break;
        Vector y = Vector::Zero(4);
        y[idx[0]] = a;
        y[idx[1]] = b;
        y[idx[2]] = c;
        grid = std::min(grid, w.dot((y - v).cwiseAbs()));
      }
    EXPECT_LE(cost, grid + 1e-12);
    EXPECT_NEAR(cost, grid, 2e-3);
  }
}

TEST(SdEps, Examples) {
  Matrix C = Matrix::Zero(5, 5);
  C.block(0, 0, 2, 2).setOnes();
  C.block(2, 2, 2, 2).setOnes();
  C(4, 0) = C(0, 4) = 1;
  Instance sd = make_instance(C, Vector::Ones(5) - Vector::Unit(5, 4));
  EXPECT_EQ(metric_sd_eps(sd, 0.5, 0.01).value, kInf);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u01(0.9, 1.1);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 4 + rep % 2;
    Matrix P(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) P(i, j) = P(j, i) = u01(rng);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = u01(rng);
    Instance inst = make_instance(P, v);
    MetricResult r = metric_sd_eps(inst, 0.5, 1e-4);
    ASSERT_TRUE(r.found);
    EXPECT_LE(r.value, exact_metric(inst, 0.5).value * (1 + 1e-12));
    EXPECT_TRUE(in_sd_eps(r.nearest, 1e-4 * (1 - 1e-9)));
    EXPECT_NEAR(weighted_distance(inst, r.nearest, 0.5), r.distance, 1e-12);
  }
}

TEST(FixedC, Examples) {
  EXPECT_EQ(metric_fixed_C(make_instance(Matrix::Ones(4, 4), Vector::Ones(4))), 0.0);
  Matrix bip = Matrix::Zero(4, 4);
  bip.block(0, 2, 2, 2).setOnes();
  bip.block(2, 0, 2, 2).setOnes();
  EXPECT_EQ(metric_fixed_C(make_instance(bip, Vector::Ones(4))), kInf);

  // Path 0-1-2-3 with self-loops at the ends; u* = (1,2,3,4)/10.
  Matrix path = Matrix::Zero(4, 4);
  for (int i = 0; i < 3; ++i) path(i, i + 1) = path(i + 1, i) = 1;
  path(0, 0) = path(3, 3) = 1;
  Vector v(4);
  v << 1, 2, 3, 4;
  Instance inst = make_instance(path, v);
  // Exhaustive oracle over T.
  double best = kInf;
  for (int T = 1; T < 16; ++T) {
    NodeSet nodes;
    for (int i = 0; i < 4; ++i)
      if (T >> i & 1) nodes.push_back(i);
    InstanceGraph g = build_graph(inst);
    bool ok = components(g, nodes).size() > 1 || is_bipartite(g, nodes).bipartite;
    for (int i = 0; i < 4 && !ok; ++i) {
      if (T >> i & 1) continue;
      bool touches = false;
      for (int j : nodes) touches |= g.edge(i, j);
      ok = !touches;
    }
    if (!ok) continue;
    double t = 0;
    for (int i = 0; i < 4; ++i)
      if (!(T >> i & 1)) t += std::abs(inst.u_star[i]);
    best = std::min(best, 2 * t);
  }
  EXPECT_TRUE(std::isfinite(best));
  EXPECT_NEAR(metric_fixed_C(inst), 1.0 / best, 1e-12);
}
