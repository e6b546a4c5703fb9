#include "mcl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mcl/graph.hpp"
#include "mcl/metric.hpp"

namespace mcl {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string header(const std::string& schema, const std::vector<std::pair<std::string, std::string>>& meta,
                   const std::string& columns) {
  std::string out = "# " + std::string(kCsvVersion) + " schema=" + schema + "\n";
  for (auto& [k, v] : meta) out += "# " + k + "=" + v + "\n";
  return out + columns + "\n";
}

std::vector<std::pair<std::string, std::string>> gd_meta(const OptimizerConfig& gd) {
  return {{"gd.max_iters", std::to_string(gd.max_iters)},
          {"gd.step_rule", gd.step_rule == StepRule::Backtracking ? "backtracking" : "fixed"},
          {"gd.step", fmt(gd.step)},
          {"gd.armijo_c", fmt(gd.armijo_c)},
          {"gd.shrink", fmt(gd.shrink)},
          {"gd.grad_tol", fmt(gd.grad_tol)},
          {"gd.success_tol", fmt(gd.success_tol)},
          {"gd.eig_tol", fmt(gd.eig_tol)},
          {"gd.init", gd.init == InitKind::Gaussian ? "gaussian" : "uniform_box"},
          {"gd.init_scale", gd.init_scale > 0 ? fmt(gd.init_scale) : "1/n"}};
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

json nodes(const NodeSet& s) { return json(s); }

json certificate_json(const DegeneracyCertificate& c) {
  json j{{"kind", to_string(c.kind)}, {"support", nodes(c.support)}};
  if (c.kind == CertificateKind::IsolatedZeroNode) {
    j["node"] = c.node;
  } else {
    j["I"] = nodes(c.I);
    j["J"] = nodes(c.J);
  }
  return j;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

}  // namespace

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + s + "' in grid '" + spec + "'");
    }
    if (used != s.size()) throw ParseError("bad number '" + s + "' in grid '" + spec + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ParseError("grid '" + spec + "' must be a:b:step");
    double a = number(parts[0]), b = number(parts[1]), h = number(parts[2]);
    if (!(h > 0) || b < a) throw ParseError("grid '" + spec + "' needs a <= b and step > 0");
    const long count = std::lround(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(a + i * h);
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  if (out.empty()) throw ParseError("empty grid '" + spec + "'");
  if (!std::is_sorted(out.begin(), out.end())) throw ParseError("grid '" + spec + "' must be sorted");
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(p, &used);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + p + "' in list '" + spec + "'");
    }
    if (used != p.size()) throw ParseError("bad integer '" + p + "' in list '" + spec + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty list '" + spec + "'");
  return out;
}

void ExperimentConfig::validate_grid(const std::vector<double>& g, const char* name) const {
  if (g.empty()) throw HypothesisError(std::string(name) + " grid is empty");
  if (!std::is_sorted(g.begin(), g.end())) throw HypothesisError(std::string(name) + " grid is not sorted");
}

json cmd_analyze(const InstanceFile& file, double alpha) {
  const Instance& inst = file.instance;
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw HypothesisError("alpha must lie in [0, 1]");
  json r;
  r["n"] = inst.n();
  r["normalized"] = inst.normalized;
  r["alpha"] = alpha;
  if (!file.meta.empty()) r["meta"] = file.meta;
  if (!inst.normalized) throw HypothesisError("instance is not normalized (loaded with --raw)");
  auto delta = rip_constant(inst);
  r["rip_delta"] = delta ? json(*delta) : json(nullptr);
  if (inst.zero_truth()) {
    auto v = classify_zero_truth(inst.C);
    r["zero_truth"] = true;
    r["zero_truth_verdict"] = v.no_sscp ? "NoSSCP" : "MultipleGlobalSolutions";
    if (v.witness) r["witness"] = vector_json(*v.witness);
    return r;
  }
  const double mu = incoherence(inst.u_star);
  r["mu"] = mu;
  auto deg = is_degenerate(inst);
  r["degenerate"] = deg.degenerate;
  if (deg.degenerate) {
    r["degenerate_reason"] = deg.reason;
    r["witness"] = vector_json(*deg.witness);
  }
  r["in_closure"] = in_closure(inst);
  r["in_sd"] = in_sd(inst);
  r["metric_fixed_C"] = num(metric_fixed_C(inst));

  std::optional<double> value;
  if (inst.n() <= kEnumerationLimit) {
    auto res = exact_metric(inst, alpha);
    value = res.value;
    r["metric"] = {{"value", num(res.value)},
                   {"distance", res.distance},
                   {"certificate", certificate_json(res.certificate)},
                   {"nearest", {{"C", matrix_json(res.nearest.C)}, {"u_star", vector_json(res.nearest.u_star)}}}};
  } else {
    r["metric"] = "skipped: n exceeds the enumeration limit, bounds only";
  }
  json bounds = json::array();
  auto add = [&](const char* name, double b) {
    json e{{"name", name}, {"value", num(b)}};
    if (value) {
      e["holds"] = *value <= b * (1 + 1e-12);
      e["tight"] = std::isfinite(b) && std::abs(*value - b) <= 1e-9 * b;
    }
    bounds.push_back(e);
  };
  if (delta && alpha > 0.0) {
    add("rip", bound_rip(inst.n(), alpha, *delta));
    add("rip_incoherence", bound_rip_incoh(inst.n(), alpha, *delta, mu));
  }
  r["bounds"] = bounds;
  return r;
}

std::string cmd_min_curve(const ExperimentConfig& cfg) {
  if (cfg.n_list.empty()) throw HypothesisError("n list is empty");
  cfg.validate_grid(cfg.alpha_grid, "alpha");
  for (int n : cfg.n_list)
    if (n < 5) throw HypothesisError("min-curve needs n >= 5");
  std::string out = header("min_curve", {{"scaled", cfg.scaled ? "true" : "false"}},
                           "n,alpha,value,metric_min,metric_min_over_n,alpha_star,alpha_diamond,marker");
  for (int n : cfg.n_list) {
    const double as = alpha_star(n), ad = alpha_diamond(n);
    std::vector<std::pair<double, std::string>> pts;
    for (double a : cfg.alpha_grid) pts.emplace_back(a, "");
    for (auto [a, tag] : {std::pair{as, "alpha_star"}, std::pair{ad, "alpha_diamond"}}) {
      if (a < cfg.alpha_grid.front() || a > cfg.alpha_grid.back()) continue;
      auto hit = std::find_if(pts.begin(), pts.end(), [&](auto& p) { return p.first == a; });
      if (hit != pts.end())
        hit->second = hit->second.empty() ? tag : hit->second + "|" + tag;
      else
        pts.emplace_back(a, tag);
    }
    std::stable_sort(pts.begin(), pts.end(), [](auto& x, auto& y) { return x.first < y.first; });
    for (auto& [a, tag] : pts) {
      double v = metric_min(n, a);
      out += join({std::to_string(n), fmt(a), fmt(cfg.scaled ? v / n : v), fmt(v), fmt(v / n), fmt(as), fmt(ad), tag});
    }
  }
  return out;
}

TransitionResult run_transition(int n, const std::vector<double>& eta_grid, int trials, std::uint64_t seed,
                                const OptimizerConfig& gd) {
  if (n < 2) throw HypothesisError("transition needs n >= 2");
  if (trials < 1) throw HypothesisError("trials must be >= 1");
  TransitionResult res;
  res.n = n;
  res.eta_grid = eta_grid;
  const SimpleGraph g = split_graph(n, n);
  std::vector<int> S(n);
  for (int i = 0; i < n; ++i) S[i] = i;
  for (double eta : eta_grid)
    if (!(eta >= 0.0 && eta <= n + 1.0)) throw HypothesisError("eta must lie in [0, n+1]");

  // Runs every (grid point, trial) task; outcome codes by task index.
  auto sweep = [&](const std::vector<double>& etas, std::uint64_t tag) {
    std::vector<Instance> insts;
    for (double eta : etas) insts.push_back(one_param_instance(g, S, eta / (n + 1)));
    const long tasks = long(etas.size()) * trials;
    std::vector<int> code(tasks);
    const RandomStream base{seed, static_cast<std::uint64_t>(n)};
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < tasks; ++k) {
      const long e = k / trials, t = k % trials;
      RandomStream rs = base.child(tag + static_cast<std::uint64_t>(e)).child(static_cast<std::uint64_t>(t));
      code[k] = static_cast<int>(gd_run(insts[e], gd, rs).classification);
    }
    return code;
  };
  auto code = sweep(eta_grid, 0);
  for (std::size_t e = 0; e < eta_grid.size(); ++e) {
    int ok = 0, sp = 0, sa = 0, un = 0;
    for (int t = 0; t < trials; ++t) {
      auto c = static_cast<Classification>(code[e * trials + t]);
      ok += c == Classification::GlobalMin;
      sp += c == Classification::SpuriousSOSP;
      sa += c == Classification::StrictSaddle;
      un += c == Classification::Unconverged;
    }
    res.success_rates.push_back(double(ok) / trials);
    res.spurious.push_back(sp);
    res.saddles.push_back(sa);
    res.unconverged.push_back(un);
  }
  std::size_t first = eta_grid.size();
  while (first > 0 && res.success_rates[first - 1] == 1.0) --first;
  if (first < eta_grid.size()) {
    res.threshold = eta_grid[first];
    res.refined = res.threshold;
    if (first > 0) {
      double mid = 0.5 * (eta_grid[first - 1] + eta_grid[first]);
      auto mc = sweep({mid}, 1u << 20);
      double rate = double(std::count(mc.begin(), mc.end(), int(Classification::GlobalMin))) / trials;
      res.midpoint = mid;
      res.midpoint_rate = rate;
      if (rate == 1.0) res.refined = mid;
    }
  }
  return res;
}

std::string cmd_transition(const ExperimentConfig& cfg, std::vector<TransitionResult>* results) {
  if (cfg.n_list.empty()) throw HypothesisError("n list is empty");
  cfg.validate_grid(cfg.eta_grid, "eta");
  auto meta = gd_meta(cfg.gd);
  meta.insert(meta.begin(), {{"seed", std::to_string(cfg.seed)}, {"trials", std::to_string(cfg.trials)}});
  std::string out = header("transition", meta,
                           "record,n,eta,eps,trials,success_rate,spurious,strict_saddle,unconverged");
  for (int n : cfg.n_list) {
    auto r = run_transition(n, cfg.eta_grid, cfg.trials, cfg.seed, cfg.gd);
    for (std::size_t e = 0; e < r.eta_grid.size(); ++e)
      out += join({"rate", std::to_string(n), fmt(r.eta_grid[e]), fmt(r.eta_grid[e] / (n + 1)),
                   std::to_string(cfg.trials), fmt(r.success_rates[e]), std::to_string(r.spurious[e]),
                   std::to_string(r.saddles[e]), std::to_string(r.unconverged[e])});
    out += join({"threshold", std::to_string(n), r.threshold ? fmt(*r.threshold) : "none",
                 r.threshold ? fmt(*r.threshold / (n + 1)) : "none", std::to_string(cfg.trials), "", "", "", ""});
    if (r.midpoint)
      out += join({"midpoint", std::to_string(n), fmt(*r.midpoint), fmt(*r.midpoint / (n + 1)),
                   std::to_string(cfg.trials), fmt(*r.midpoint_rate), "", "", ""});
    out += join({"refined", std::to_string(n), r.refined ? fmt(*r.refined) : "none",
                 r.refined ? fmt(*r.refined / (n + 1)) : "none", std::to_string(cfg.trials), "", "", "", ""});
    if (results) results->push_back(std::move(r));
  }
  return out;
}

BernoulliStudy run_bernoulli(int n, double mu, double eta, int trials, std::uint64_t seed, double alpha) {
  if (trials < 1) throw HypothesisError("trials must be >= 1");
  if (n > kEnumerationLimit) throw HypothesisError("bernoulli study computes the exact metric; n must be <= 14");
  BernoulliStudy st;
  st.n = n;
  st.alpha = alpha;
  st.p = bernoulli_p_threshold(n, mu, eta);
  st.bound = bound_bernoulli(n, alpha, mu);
  st.probability = bernoulli_probability_bound(n, eta);
  st.vacuous = st.probability <= 0.0 || st.probability < 0.9;
  const GroundTruth u = incoherent_truth(n, mu);
  st.metric.resize(trials);
  st.nonzero.resize(trials);
  st.resamples.resize(trials);
  const RandomStream base{seed, 0};
  for (int t = 0; t < trials; ++t) {
    auto s = bernoulli_instance(n, st.p, base.child(static_cast<std::uint64_t>(t)), u);
    st.nonzero[t] = s.nonzero;
    st.resamples[t] = s.resamples;
    st.metric[t] = exact_metric(s.instance, alpha).value;
  }
  int ok = 0, band = 0;
  const double lo = n * n * st.p / 2, hi = 1.5 * n * n * st.p;
  for (int t = 0; t < trials; ++t) {
    ok += st.metric[t] <= st.bound;
    band += st.nonzero[t] >= lo && st.nonzero[t] <= hi;
  }
  st.fraction = double(ok) / trials;
  st.band_fraction = double(band) / trials;
  return st;
}

std::string cmd_bernoulli_study(const ExperimentConfig& cfg, BernoulliStudy* result) {
  const double alpha = cfg.alpha >= 0 ? cfg.alpha : alpha_star(cfg.n);
  auto st = run_bernoulli(cfg.n, cfg.mu, cfg.eta, cfg.trials, cfg.seed, alpha);
  std::string out = header("bernoulli",
                           {{"seed", std::to_string(cfg.seed)},
                            {"n", std::to_string(cfg.n)},
                            {"mu", fmt(cfg.mu)},
                            {"eta", fmt(cfg.eta)},
                            {"alpha", fmt(alpha)},
                            {"p", fmt(st.p)},
                            {"bound", fmt(st.bound)},
                            {"probability_bound", fmt(st.probability)},
                            {"probability_vacuous", st.vacuous ? "true" : "false"},
                            {"fraction_within_bound", fmt(st.fraction)},
                            {"fraction_nonzero_in_band", fmt(st.band_fraction)}},
                           "sample,resamples,nonzero,nonzero_in_band,metric,bound,holds");
  const double lo = cfg.n * cfg.n * st.p / 2, hi = 1.5 * cfg.n * cfg.n * st.p;
  for (int t = 0; t < cfg.trials; ++t)
    out += join({std::to_string(t), std::to_string(st.resamples[t]), std::to_string(st.nonzero[t]),
                 st.nonzero[t] >= lo && st.nonzero[t] <= hi ? "1" : "0", fmt(st.metric[t]), fmt(st.bound),
                 st.metric[t] <= st.bound ? "1" : "0"});
  if (result) *result = std::move(st);
  return out;
}

std::string cmd_rip_study(const ExperimentConfig& cfg) {
  cfg.validate_grid(cfg.alpha_grid, "alpha");
  cfg.validate_grid(cfg.delta_grid, "delta");
  const int n = cfg.n;
  if (n < 4 || n > kEnumerationLimit) throw HypothesisError("rip study needs 4 <= n <= 14");
  std::string out = header("rip", {{"n", std::to_string(n)}},
                           "family,n,alpha,delta,mu,exact,bound_rip,bound_rip_incoh,rip3_lower,ratio_exact_over_bound,"
                           "lower_holds");
  for (double a : cfg.alpha_grid)
    for (double d : cfg.delta_grid) {
      auto inst = rip_extremal_instance(n, d);
      double v = exact_metric(inst, a).value;
      double b = bound_rip(n, a, d);
      out += join({"rip_extremal", std::to_string(n), fmt(a), fmt(d), fmt(double(n)), fmt(v), fmt(b),
                   fmt(bound_rip_incoh(n, a, d, n)), "", fmt(v / b), ""});
      for (double mu : cfg.mu_list) {
        auto r3 = rip3_instance(n, mu, d);
        double v3 = exact_metric(r3, a).value;
        double lower = rip3_lower_bound(n, a, d, mu);
        double muu = incoherence(r3.u_star);
        out += join({"rip3", std::to_string(n), fmt(a), fmt(d), fmt(mu), fmt(v3), fmt(bound_rip(n, a, d)),
                     fmt(bound_rip_incoh(n, a, d, muu)), fmt(lower), fmt(v3 / bound_rip(n, a, d)),
                     v3 >= lower * (1 - 1e-12) ? "1" : "0"});
      }
    }
  return out;
}

std::string cmd_reduced_landscape(const ExperimentConfig& cfg) {
  cfg.validate_grid(cfg.eps_grid, "eps");
  const int m = cfg.m;
  if (m < 1 || m > 12) throw HypothesisError("reduced landscape needs 1 <= m <= 12");
  if (cfg.starts < 1) throw HypothesisError("starts must be >= 1");
  std::string out = header("reduced",
                           {{"seed", std::to_string(cfg.seed)},
                            {"m", std::to_string(m)},
                            {"starts", std::to_string(cfg.starts)},
                            {"threshold_odd", fmt(1.0 / (13.0 * (m + 1)))},
                            {"threshold_even", fmt(1.0 / (m + 1.0))},
                            {"threshold_upper", fmt(18.0 / m)}},
                           "m,eps,distinct_critical,sosp,spurious,min_spurious_eig,dropped,regime");
  for (std::size_t e = 0; e < cfg.eps_grid.size(); ++e) {
    const double eps = cfg.eps_grid[e];
    auto scan = find_critical_points_reduced({m, eps}, cfg.starts, RandomStream{cfg.seed, e});
    int sosp = 0, spur = 0;
    double min_eig = kInf;
    for (auto& cp : scan.points) {
      if (cp.classification == Classification::GlobalMin || cp.classification == Classification::SpuriousSOSP) ++sosp;
      if (cp.classification == Classification::SpuriousSOSP) {
        ++spur;
        min_eig = std::min(min_eig, cp.min_hessian_eig);
      }
    }
    const char* regime = eps > 18.0 / m                  ? "no_spurious"
                         : eps < 1.0 / (13.0 * (m + 1)) ? "spurious_all_m"
                         : (eps < 1.0 / (m + 1.0) && m % 2 == 0) ? "spurious_even"
                                                                 : "open";
    out += join({std::to_string(m), fmt(eps), std::to_string(scan.points.size()), std::to_string(sosp),
                 std::to_string(spur), spur ? fmt(min_eig) : "", std::to_string(scan.dropped), regime});
  }
  return out;
}

}  // namespace mcl
