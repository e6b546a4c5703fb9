#include "mcl/graph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace mcl {

namespace {

void require_truth(const Instance& inst) {
  if (inst.zero_truth())
    throw HypothesisError("u_star is zero; use classify_zero_truth");
}

}  // namespace

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::Disconnect: return "Disconnect";
    case CertificateKind::Bipartite: return "Bipartite";
    case CertificateKind::IsolatedZeroNode: return "IsolatedZeroNode";
  }
  return "?";
}

std::vector<std::pair<int, int>> InstanceGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (edge(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<int, int>> DegeneracyCertificate::zero_set(int n) const {
  std::vector<std::pair<int, int>> z;
  auto cross = [&](const NodeSet& a, const NodeSet& b) {
    for (int i : a)
      for (int j : b) {
        z.emplace_back(i, j);
        z.emplace_back(j, i);
      }
  };
  auto within = [&](const NodeSet& a) {
    for (int i : a)
      for (int j : a) z.emplace_back(i, j);
  };
  switch (kind) {
    case CertificateKind::Disconnect: cross(I, J); break;
    case CertificateKind::Bipartite:
      within(I);
      within(J);
      break;
    case CertificateKind::IsolatedZeroNode: cross(NodeSet{node}, support); break;
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  (void)n;
  return z;
}

bool operator==(const DegeneracyCertificate& a, const DegeneracyCertificate& b) {
  return a.kind == b.kind && a.support == b.support && a.I == b.I && a.J == b.J && a.node == b.node;
}

bool certificate_less(const DegeneracyCertificate& a, const DegeneracyCertificate& b) {
  return std::tie(a.kind, a.support, a.I, a.J, a.node) < std::tie(b.kind, b.support, b.I, b.J, b.node);
}

InstanceGraph build_graph(const Instance& inst) { return InstanceGraph{inst.n(), inst.C}; }

SupportPartition support_partition(const Instance& inst) {
  SupportPartition p;
  const int n = inst.n();
  for (int i = 0; i < n; ++i) (inst.u_star[i] != 0.0 ? p.I1 : p.I0).push_back(i);
  for (int i : p.I0) {
    bool linked = false;
    for (int j : p.I1) linked = linked || inst.C(i, j) > 0.0;
    if (!linked) p.I00.push_back(i);
  }
  return p;
}

std::vector<NodeSet> components(const InstanceGraph& g, const NodeSet& nodes) {
  std::vector<char> in(g.n, 0), seen(g.n, 0);
  for (int v : nodes) in[v] = 1;
  NodeSet sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  std::vector<NodeSet> out;
  for (int s : sorted) {
    if (seen[s]) continue;
    NodeSet comp;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      comp.push_back(v);
      for (int w = 0; w < g.n; ++w)
        if (in[w] && !seen[w] && g.edge(v, w)) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<NodeSet> g1_subgraph_components(const Instance& inst) {
  return components(build_graph(inst), support_partition(inst).I1);
}

BipartiteResult is_bipartite(const InstanceGraph& g, const NodeSet& nodes) {
  BipartiteResult r;
  r.color.assign(g.n, -1);
  std::vector<char> in(g.n, 0);
  for (int v : nodes) in[v] = 1;
  for (int v : nodes)
    if (g.self_loop(v)) {
      r.bipartite = false;
      r.odd_cycle = {v};
      return r;
    }
  std::vector<int> parent(g.n, -1), depth(g.n, 0);
  NodeSet sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  for (int s : sorted) {
    if (r.color[s] >= 0) continue;
    r.color[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int w = 0; w < g.n; ++w) {
        if (!in[w] || !g.edge(v, w)) continue;
        if (r.color[w] < 0) {
          r.color[w] = 1 - r.color[v];
          parent[w] = v;
          depth[w] = depth[v] + 1;
          q.push_back(w);
        } else if (r.color[w] == r.color[v]) {
          // Walk both BFS branches up to their common ancestor.
          NodeSet left, right;
          int a = v, b = w;
          while (depth[a] > depth[b]) { left.push_back(a); a = parent[a]; }
          while (depth[b] > depth[a]) { right.push_back(b); b = parent[b]; }
          while (a != b) {
            left.push_back(a);
            right.push_back(b);
            a = parent[a];
            b = parent[b];
          }
          left.push_back(a);
          r.odd_cycle = left;
          r.odd_cycle.insert(r.odd_cycle.end(), right.rbegin(), right.rend());
          r.bipartite = false;
          return r;
        }
      }
    }
  }
  return r;
}

DegeneracyResult is_degenerate(const Instance& inst) {
  require_truth(inst);
  const auto g = build_graph(inst);
  const auto part = support_partition(inst);
  const auto& u = inst.u_star;
  DegeneracyResult r;
  auto comps = components(g, part.I1);
  if (comps.size() > 1) {
    Point w = Point::Zero(inst.n());
    for (int i : part.I1) w[i] = -u[i];
    for (int i : comps.front()) w[i] = u[i];
    r = {true, w, "disconnected"};
    return r;
  }
  auto bip = is_bipartite(g, part.I1);
  if (bip.bipartite) {
    Point w = Point::Zero(inst.n());
    for (int i : part.I1) w[i] = bip.color[i] == 0 ? u[i] / 2.0 : 2.0 * u[i];
    r = {true, w, "bipartite"};
    return r;
  }
  for (int i : part.I00)
    if (!g.self_loop(i)) {
      Point w = u;
      w[i] = 1.0;
      r = {true, w, "isolated_zero_node"};
      return r;
    }
  return r;
}

bool in_closure(const Instance& inst) {
  require_truth(inst);
  const auto g = build_graph(inst);
  const auto part = support_partition(inst);
  if (!part.I00.empty()) return true;
  if (components(g, part.I1).size() > 1) return true;
  return is_bipartite(g, part.I1).bipartite;
}

bool in_sd(const Instance& inst) {
  if (inst.zero_truth()) return false;
  const auto g = build_graph(inst);
  const auto part = support_partition(inst);
  if (!part.I00.empty()) return false;
  auto comps = components(g, part.I1);
  if (comps.size() < 2) return false;
  for (const auto& c : comps)
    if (is_bipartite(g, c).bipartite) return false;
  return true;
}

bool in_sd_eps(const Instance& inst, double eps) {
  if (!in_sd(inst)) return false;
  const int n = inst.n();
  for (int i = 0; i < n; ++i) {
    double ui = std::abs(inst.u_star[i]);
    if (ui != 0.0 && ui < eps) return false;
    for (int j = 0; j < n; ++j)
      if (inst.C(i, j) != 0.0 && inst.C(i, j) < eps) return false;
  }
  return true;
}

}  // namespace mcl
