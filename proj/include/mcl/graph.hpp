#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcl/instance.hpp"

namespace mcl {

using NodeSet = std::vector<int>;

// Weighted graph of an instance: {i,j} is an edge iff C_ij > 0. Self-loops allowed.
struct InstanceGraph {
  int n = 0;
  Matrix weights;

  bool edge(int i, int j) const { return weights(i, j) > 0.0; }
  bool self_loop(int i) const { return weights(i, i) > 0.0; }
  // Unordered edges (i <= j) in row-major order.
  std::vector<std::pair<int, int>> edges() const;
};

struct SupportPartition {
  NodeSet I1;   // u*_i != 0
  NodeSet I0;   // u*_i == 0
  NodeSet I00;  // zero nodes with no edge into I1
};

enum class CertificateKind { Disconnect = 0, Bipartite = 1, IsolatedZeroNode = 2 };
const char* to_string(CertificateKind kind);

struct DegeneracyCertificate {
  CertificateKind kind = CertificateKind::Disconnect;
  NodeSet support;  // T
  NodeSet I, J;     // partition of T (Disconnect, Bipartite)
  int node = -1;    // IsolatedZeroNode
  // Ordered entries (i,j) of C forced to zero, sorted.
  std::vector<std::pair<int, int>> zero_set(int n) const;
};

bool operator==(const DegeneracyCertificate& a, const DegeneracyCertificate& b);
// Kind first, then T, I, J, node compared as sorted node lists.
bool certificate_less(const DegeneracyCertificate& a, const DegeneracyCertificate& b);

struct BipartiteResult {
  bool bipartite = true;
  std::vector<int> color;  // 0/1 per node of the queried set, -1 outside it
  NodeSet odd_cycle;       // closed walk v0 v1 ... vk (v0 adjacent to vk); {i} for a self-loop
};

struct DegeneracyResult {
  bool degenerate = false;
  std::optional<Point> witness;  // second global solution
  std::string reason;            // "disconnected", "bipartite", "isolated_zero_node"
};

InstanceGraph build_graph(const Instance& inst);
SupportPartition support_partition(const Instance& inst);
// Components of the subgraph induced by nodes, each sorted, ordered by smallest node.
std::vector<NodeSet> components(const InstanceGraph& g, const NodeSet& nodes);
std::vector<NodeSet> g1_subgraph_components(const Instance& inst);
BipartiteResult is_bipartite(const InstanceGraph& g, const NodeSet& nodes);

// Uniqueness fails: G1 disconnected, G1 bipartite, or an I00 node without a self-loop.
DegeneracyResult is_degenerate(const Instance& inst);
// Closure of the degenerate set. Unlike is_degenerate, any nonempty I00 suffices,
// so the two predicates differ on instances whose I00 nodes all carry self-loops.
bool in_closure(const Instance& inst);
bool in_sd(const Instance& inst);
bool in_sd_eps(const Instance& inst, double eps);

}  // namespace mcl
