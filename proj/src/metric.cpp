#include "mcl/metric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "bitgraph.hpp"

namespace mcl {

using bits::Mask;
using bits::low;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_metric_input(const Instance& inst, double alpha, int max_n) {
  if (!inst.normalized) throw HypothesisError("instance is not normalized");
  if (inst.zero_truth()) throw HypothesisError("u_star is zero; use classify_zero_truth");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw HypothesisError("alpha must lie in [0, 1]");
  if (inst.n() > max_n)
    throw HypothesisError("n = " + std::to_string(inst.n()) + " exceeds the enumeration limit " +
                          std::to_string(max_n));
}

struct Candidate {
  double d = kInf;
  int kind = 3;
  Mask T = 0, I = 0, J = 0;
  int node = -1;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.d != b.d) return a.d < b.d;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.T != b.T) return bits::lex_less(a.T, b.T);
  if (a.I != b.I) return bits::lex_less(a.I, b.I);
  if (a.J != b.J) return bits::lex_less(a.J, b.J);
  return a.node < b.node;
}

// row[i*M + S] = sum_{j in S} C_ij, within[S] = sum_{i,j in S} C_ij.
struct Tables {
  int n;
  Mask full;
  std::vector<double> row, within, absu;

  explicit Tables(const Instance& inst) : n(inst.n()), full((Mask{1} << n) - 1) {
    const std::size_t M = std::size_t{1} << n;
    row.assign(n * M, 0.0);
    within.assign(M, 0.0);
    for (int i = 0; i < n; ++i) {
      double* r = row.data() + i * M;
      for (std::size_t S = 1; S < M; ++S) r[S] = r[S & (S - 1)] + inst.C(i, low(static_cast<Mask>(S)));
    }
    for (std::size_t S = 1; S < M; ++S) {
      double w = 0.0;
      for (Mask m = static_cast<Mask>(S); m; m &= m - 1) w += row[low(m) * M + S];
      within[S] = w;
    }
    absu.resize(n);
    for (int i = 0; i < n; ++i) absu[i] = std::abs(inst.u_star[i]);
  }

  double r(int i, Mask S) const { return row[(std::size_t(i) << n) + S]; }
};

Candidate best_for_support(const Tables& tb, Mask T, double alpha) {
  Candidate best;
  auto offer = [&](const Candidate& c) {
    if (better(c, best)) best = c;
  };
  double t = 0.0;
  for (int i = 0; i < tb.n; ++i)
    if (!(T >> i & 1)) t += tb.absu[i];
  const double ut = 2.0 * (1.0 - alpha) * t;

  const Mask b = T & (~T + 1);
  const Mask rest = T ^ b;
  Mask sub = rest;
  while (true) {
    const Mask I = b | sub, J = rest ^ sub;
    if (J) {
      double cross = 0.0;
      for (Mask m = I; m; m &= m - 1) cross += tb.r(low(m), J);
      offer({2.0 * alpha * (2.0 * cross) + ut, 0, T, I, J, -1});
    }
    if (!(T == tb.full && J == 0)) offer({2.0 * alpha * (tb.within[I] + tb.within[J]) + ut, 1, T, I, J, -1});
    if (sub == 0) break;
    sub = (sub - 1) & rest;
  }
  for (int i = 0; i < tb.n; ++i)
    if (!(T >> i & 1)) offer({2.0 * alpha * (2.0 * tb.r(i, T)) + ut, 2, T, 0, 0, i});
  return best;
}

MetricResult finish(const Instance& inst, const Candidate& c) {
  MetricResult out;
  out.distance = c.d;
  out.value = c.d == 0.0 ? kInf : 1.0 / c.d;
  out.certificate.kind = static_cast<CertificateKind>(c.kind);
  out.certificate.support = bits::to_nodes(c.T);
  out.certificate.I = bits::to_nodes(c.I);
  out.certificate.J = bits::to_nodes(c.J);
  out.certificate.node = c.node;
  out.nearest = realize_certificate(inst, out.certificate);
  return out;
}

MetricResult run_exact(const Instance& inst, double alpha, int max_n, bool parallel) {
  require_metric_input(inst, alpha, max_n);
  if (inst.n() > 30) throw HypothesisError("n too large for mask enumeration");
  const Tables tb(inst);
  const long M = long{1} << inst.n();
  Candidate best;
  if (parallel) {
#pragma omp parallel
    {
      Candidate local;
#pragma omp for schedule(dynamic, 16) nowait
      for (long T = 1; T < M; ++T) {
        Candidate c = best_for_support(tb, static_cast<Mask>(T), alpha);
        if (better(c, local)) local = c;
      }
#pragma omp critical(mcl_exact_metric)
      if (better(local, best)) best = local;
    }
  } else {
    for (long T = 1; T < M; ++T) {
      Candidate c = best_for_support(tb, static_cast<Mask>(T), alpha);
      if (better(c, best)) best = c;
    }
  }
  return finish(inst, best);
}

Mask to_mask(const NodeSet& s) {
  Mask m = 0;
  for (int i : s) m |= Mask{1} << i;
  return m;
}

}  // namespace

MetricResult exact_metric(const Instance& inst, double alpha, int max_n) {
  return run_exact(inst, alpha, max_n, true);
}

MetricResult exact_metric_serial(const Instance& inst, double alpha, int max_n) {
  return run_exact(inst, alpha, max_n, false);
}

double certificate_distance(const Instance& inst, const DegeneracyCertificate& cert, double alpha) {
  double s = 0.0;
  for (auto [i, j] : cert.zero_set(inst.n())) s += inst.C(i, j);
  const Mask T = to_mask(cert.support);
  double t = 0.0;
  for (int i = 0; i < inst.n(); ++i)
    if (!(T >> i & 1)) t += std::abs(inst.u_star[i]);
  return 2.0 * alpha * s + 2.0 * (1.0 - alpha) * t;
}

Instance realize_certificate(const Instance& inst, const DegeneracyCertificate& cert) {
  const int n = inst.n();
  Matrix C = inst.C;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> zero = decltype(zero)::Constant(n, n, false);
  for (auto [i, j] : cert.zero_set(n)) {
    zero(i, j) = true;
    C(i, j) = 0.0;
  }
  const double rest = C.sum();
  if (rest > 0.0) {
    C /= rest;
  } else {
    // All remaining mass sat on Z: put unit mass on a free entry, diagonal first.
    bool placed = false;
    for (int i = 0; i < n && !placed; ++i)
      if (!zero(i, i)) {
        C(i, i) = 1.0;
        placed = true;
      }
    for (int i = 0; i < n && !placed; ++i)
      for (int j = i + 1; j < n && !placed; ++j)
        if (!zero(i, j)) {
          C(i, j) = C(j, i) = 0.5;
          placed = true;
        }
    if (!placed) throw std::logic_error("certificate zeroes every entry");
  }

  const Mask T = to_mask(cert.support);
  Vector u = Vector::Zero(n);
  double t = 0.0;
  int top = -1;
  for (int i = 0; i < n; ++i) {
    if (T >> i & 1) {
      u[i] = inst.u_star[i];
      if (top < 0 || std::abs(u[i]) > std::abs(u[top])) top = i;
    } else {
      t += std::abs(inst.u_star[i]);
    }
  }
  u[top] += (u[top] < 0.0 ? -t : t);
  return Instance{C, u, true};
}

double weighted_distance(const Instance& a, const Instance& b, double alpha) {
  return alpha * l1(Matrix(a.C - b.C)) + (1.0 - alpha) * l1(Vector(a.u_star - b.u_star));
}

double alpha_star(int n) {
  if (n < 5) throw HypothesisError("alpha_star needs n >= 5");
  const double x = n;
  return (x * x - 5 * x + 4) / (x * x - 3 * x - 2);
}

double alpha_diamond(int n) {
  if (n < 5) throw HypothesisError("alpha_diamond needs n >= 5");
  return double(n) / double(n + 2);
}

double metric_min(int n, double alpha) {
  if (n < 5) throw HypothesisError("metric_min needs n >= 5");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw HypothesisError("alpha must lie in [0, 1]");
  const double x = n, a = alpha, q = 2.0 * (1.0 - a);
  // g(alpha, c) is the minimum of these lines a_k + b_k c over c in [0, 1/(n(n-1))].
  const std::array<std::array<double, 2>, 6> lines{{
      {q * (x - 2) / x, 4 * a},
      {0.0, 4 * a * (x - 1)},
      {q * (x - 4) / x + 8 * a / x, -8 * a * (x - 2)},
      {q * (x - 3) / x + 6 * a / x, -2 * a * (3 * x - 5)},
      {q * (x - 2) / x + 4 * a / x, -4 * a * (x - 1)},
      {q * (x - 1) / x + 2 * a / x, -2 * a * (x - 1)},
  }};
  const double cmax = 1.0 / (x * (x - 1));
  auto g = [&](double c) {
    double v = kInf;
    for (auto& l : lines) v = std::min(v, l[0] + l[1] * c);
    return v;
  };
  double best = std::max(g(0.0), g(cmax));
  for (std::size_t k = 0; k < lines.size(); ++k)
    for (std::size_t l = k + 1; l < lines.size(); ++l) {
      double db = lines[l][1] - lines[k][1];
      if (db == 0.0) continue;
      double c = (lines[k][0] - lines[l][0]) / db;
      if (c >= 0.0 && c <= cmax) best = std::max(best, g(c));
    }
  return best > 0.0 ? 1.0 / best : kInf;
}

std::optional<double> metric_min_closed_form(int n, double alpha) {
  const double x = n, a = alpha;
  if (a <= alpha_star(n)) return x / (4 * a);
  if (a >= x / (x + 1)) return x * (x + 1) / (2 * (1 - a) * (x - 2) * (x + 1) + 4);
  if (a >= alpha_diamond(n)) return x * x / (2 * (1 - a) * (x - 2) * x + 4 * a);
  return std::nullopt;
}

bool easiest_instances_check(const Instance& inst, Easiest which) {
  const int n = inst.n();
  if (n < 5) throw HypothesisError("easiest instances need n >= 5");
  const double tol = 1e-12;
  for (int i = 0; i < n; ++i)
    if (std::abs(std::abs(inst.u_star[i]) - 1.0 / n) > tol) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double want = which == Easiest::Diamond ? 1.0 / (double(n) * n)
                    : i == j                  ? 0.0
                                              : 1.0 / (double(n) * (n - 1));
      if (std::abs(inst.C(i, j) - want) > tol) return false;
    }
  return true;
}

double metric_one_param(int n, int m, int edge_count, double eps, double alpha) {
  if (m < 5 || n < m) throw HypothesisError("metric_one_param needs n >= m >= 5");
  if (edge_count < 0) throw HypothesisError("edge count must be nonnegative");
  if (!(eps >= 0.0 && eps <= 1.0)) throw HypothesisError("eps must lie in [0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw HypothesisError("alpha must lie in [0, 1]");
  const double Z = 2.0 * edge_count + n + double(m) * (m - 1) * eps;
  const double q = 2.0 * (1.0 - alpha);
  double d = std::min({2 * alpha / Z + q * (m - 1) / m, 4 * alpha * eps / Z + q * (m - 2) / m,
                       4 * alpha * (m - 1) * eps / Z});
  return d > 0.0 ? 1.0 / d : kInf;
}

double floor_projection_cost(const Vector& v, const std::vector<char>& keep, const Vector& weight,
                             double floor) {
  double A = 0.0, B = 0.0, count = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (keep[i]) {
      B += weight[i] * std::max(floor - v[i], 0.0);
      count += weight[i];
    } else {
      A += weight[i] * v[i];
    }
  }
  if (count == 0.0 || floor * count > 1.0) return kInf;
  return 2.0 * std::max(A, B);
}

Vector floor_projection(const Vector& v, const std::vector<char>& keep, const Vector& weight,
                        double floor) {
  const auto k = v.size();
  Vector x = Vector::Zero(k);
  double total = 0.0, count = 0.0;
  for (Eigen::Index i = 0; i < k; ++i)
    if (keep[i]) {
      x[i] = std::max(v[i], floor);
      total += weight[i] * x[i];
      count += weight[i];
    }
  if (count == 0.0 || floor * count > 1.0) throw HypothesisError("infeasible floor pattern");
  if (total < 1.0) {
    for (Eigen::Index i = 0; i < k; ++i)
      if (keep[i]) x[i] += (1.0 - total) / count;
  } else if (total > 1.0) {
    // Lower the largest entries to a common level L >= floor.
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < k; ++i)
      if (keep[i]) idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] > x[b]; });
    double above_w = 0.0, above_sum = 0.0, below_sum = total;
    double level = floor;
    for (std::size_t p = 0; p < idx.size(); ++p) {
      above_w += weight[idx[p]];
      above_sum += weight[idx[p]] * x[idx[p]];
      below_sum -= weight[idx[p]] * x[idx[p]];
      double L = (1.0 - below_sum) / above_w;
      double next = p + 1 < idx.size() ? x[idx[p + 1]] : floor;
      if (L >= next) {
        level = L;
        break;
      }
    }
    for (auto i : idx) x[i] = std::min(x[i], level);
  }
  return x;
}

namespace {

struct Pattern {
  double A, B, count;
  std::uint64_t bits;
};

}  // namespace

MetricResult metric_sd_eps(const Instance& inst, double alpha, double eps) {
  require_metric_input(inst, alpha, kPatternLimit);
  if (!(eps > 0.0)) throw HypothesisError("eps must be positive");
  const int n = inst.n();
  const Mask full = (Mask{1} << n) - 1;

  // Symmetric positions (i <= j) with multiplicity 1 on the diagonal, 2 off it.
  std::vector<std::pair<int, int>> pos;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pos.emplace_back(i, j);
  auto mult = [&](int p) { return pos[p].first == pos[p].second ? 1.0 : 2.0; };
  auto include = [&](Pattern& pt, int p) {
    double c = inst.C(pos[p].first, pos[p].second);
    pt.B += mult(p) * std::max(eps - c, 0.0);
    pt.count += mult(p);
    pt.bits |= std::uint64_t{1} << p;
  };
  auto exclude = [&](Pattern& pt, int p) { pt.A += mult(p) * inst.C(pos[p].first, pos[p].second); };

  struct Best {
    double d = kInf;
    Mask T = 0;
    std::uint64_t bits = 0;
  };
  auto better_sd = [](const Best& a, const Best& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.T != b.T) return bits::lex_less(a.T, b.T);
    return a.bits < b.bits;
  };

  Best best;
  const long M = long{1} << n;
#pragma omp parallel
  {
    Best local;
#pragma omp for schedule(dynamic, 1) nowait
    for (long Tl = 1; Tl < M; ++Tl) {
      const Mask T = static_cast<Mask>(Tl);
      const Mask O = full & ~T;
      double Au = 0.0, Bu = 0.0, cu = 0.0;
      for (int i = 0; i < n; ++i) {
        double a = std::abs(inst.u_star[i]);
        if (T >> i & 1) {
          Bu += std::max(eps - a, 0.0);
          cu += 1.0;
        } else {
          Au += a;
        }
      }
      if (eps * cu > 1.0) continue;
      const double cost_u = 2.0 * std::max(Au, Bu);

      std::vector<int> inner, outer;
      for (int p = 0; p < int(pos.size()); ++p) {
        bool a = T >> pos[p].first & 1, b = T >> pos[p].second & 1;
        if (a && b) inner.push_back(p);
        else if (!a && !b) outer.push_back(p);
      }
      // Within T: G1 must split into at least two non-bipartite components.
      std::vector<Pattern> L1;
      std::vector<Mask> adj(n, 0);
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << inner.size()); ++s) {
        std::fill(adj.begin(), adj.end(), 0);
        for (std::size_t q = 0; q < inner.size(); ++q)
          if (s >> q & 1) {
            auto [i, j] = pos[inner[q]];
            adj[i] |= Mask{1} << j;
            adj[j] |= Mask{1} << i;
          }
        if (bits::connected(adj, T)) continue;
        bool ok = true;
        for (Mask left = T; left && ok;) {
          Mask comp = bits::component_of(adj, T, low(left));
          ok = !bits::bipartite(adj, comp);
          left &= ~comp;
        }
        if (!ok) continue;
        Pattern pt{0, 0, 0, 0};
        for (std::size_t q = 0; q < inner.size(); ++q)
          (s >> q & 1) ? include(pt, inner[q]) : exclude(pt, inner[q]);
        L1.push_back(pt);
      }
      if (L1.empty()) continue;
      // Outside T: each zero node needs at least one edge into T; the rest is free.
      std::vector<Pattern> L2{{0, 0, 0, 0}};
      for (Mask m = O; m; m &= m - 1) {
        const int o = low(m);
        std::vector<int> cross;
        for (Mask t = T; t; t &= t - 1) {
          int j = low(t);
          int a = std::min(o, j), b = std::max(o, j);
          for (int p = 0; p < int(pos.size()); ++p)
            if (pos[p] == std::make_pair(a, b)) cross.push_back(p);
        }
        std::vector<Pattern> next;
        for (const auto& base : L2)
          for (std::uint64_t s = 1; s < (std::uint64_t{1} << cross.size()); ++s) {
            Pattern pt = base;
            for (std::size_t q = 0; q < cross.size(); ++q)
              (s >> q & 1) ? include(pt, cross[q]) : exclude(pt, cross[q]);
            next.push_back(pt);
          }
        L2.swap(next);
      }
      for (int p : outer) {
        std::vector<Pattern> next;
        next.reserve(2 * L2.size());
        for (const auto& base : L2) {
          Pattern off = base, on = base;
          exclude(off, p);
          include(on, p);
          next.push_back(off);
          next.push_back(on);
        }
        L2.swap(next);
      }
      for (const auto& a : L1)
        for (const auto& b : L2) {
          if (eps * (a.count + b.count) > 1.0) continue;
          double cost_c = 2.0 * std::max(a.A + b.A, a.B + b.B);
          Best cand{alpha * cost_c + (1.0 - alpha) * cost_u, T, a.bits | b.bits};
          if (better_sd(cand, local)) local = cand;
        }
    }
#pragma omp critical(mcl_sd_eps)
    if (better_sd(local, best)) best = local;
  }

  MetricResult out;
  if (best.d == kInf) {
    out.found = false;
    out.distance = kInf;
    out.value = 0.0;
    return out;
  }
  out.distance = best.d;
  out.value = best.d == 0.0 ? kInf : 1.0 / best.d;

  std::vector<Mask> adj(n, 0);
  const int nn = n * n;
  Vector cv(nn), w = Vector::Ones(nn);
  std::vector<char> keep(nn, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cv[j * n + i] = inst.C(i, j);
  for (int p = 0; p < int(pos.size()); ++p)
    if (best.bits >> p & 1) {
      auto [i, j] = pos[p];
      keep[j * n + i] = keep[i * n + j] = 1;
      adj[i] |= Mask{1} << j;
      adj[j] |= Mask{1} << i;
    }
  Vector cx = floor_projection(cv, keep, w, eps);
  Matrix Ct(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) Ct(i, j) = cx[j * n + i];
  Ct = 0.5 * (Ct + Ct.transpose());

  Vector ua = inst.u_star.cwiseAbs();
  std::vector<char> ukeep(n, 0);
  for (int i = 0; i < n; ++i) ukeep[i] = best.T >> i & 1;
  Vector ux = floor_projection(ua, ukeep, Vector::Ones(n), eps);
  for (int i = 0; i < n; ++i)
    if (inst.u_star[i] < 0.0) ux[i] = -ux[i];
  out.nearest = Instance{Ct, ux, true};

  const Mask I = bits::component_of(adj, best.T, low(best.T));
  out.certificate.kind = CertificateKind::Disconnect;
  out.certificate.support = bits::to_nodes(best.T);
  out.certificate.I = bits::to_nodes(I);
  out.certificate.J = bits::to_nodes(best.T & ~I);
  return out;
}

double metric_fixed_C(const Instance& inst) {
  if (inst.zero_truth()) throw HypothesisError("u_star is zero; use classify_zero_truth");
  const int n = inst.n();
  if (n > 24) throw HypothesisError("metric_fixed_C enumerates supports; n must be <= 24");
  std::vector<Mask> adj(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (inst.C(i, j) > 0.0) adj[i] |= Mask{1} << j;
  const Mask full = (Mask{1} << n) - 1;
  double best = kInf;
  for (Mask T = 1; T <= full; ++T) {
    double t = 0.0;
    for (int i = 0; i < n; ++i)
      if (!(T >> i & 1)) t += std::abs(inst.u_star[i]);
    if (2.0 * t >= best) continue;
    bool admissible = !bits::connected(adj, T) || bits::bipartite(adj, T);
    for (Mask m = full & ~T; m && !admissible; m &= m - 1) admissible = (adj[low(m)] & T) == 0;
    if (admissible) best = 2.0 * t;
  }
  if (best == kInf) return 0.0;
  return best == 0.0 ? kInf : 1.0 / best;
}

}  // namespace mcl
