#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace mcl::bits {

using Mask = std::uint32_t;

inline int low(Mask m) { return std::countr_zero(m); }

// Nodes reachable from start inside `nodes`. adj[i] has bit j set iff edge {i,j}.
inline Mask component_of(const std::vector<Mask>& adj, Mask nodes, int start) {
  Mask comp = Mask{1} << start, frontier = comp;
  while (frontier) {
    int v = low(frontier);
    frontier &= frontier - 1;
    Mask next = adj[v] & nodes & ~comp;
    comp |= next;
    frontier |= next;
  }
  return comp;
}

inline bool connected(const std::vector<Mask>& adj, Mask nodes) {
  return nodes == 0 || component_of(adj, nodes, low(nodes)) == nodes;
}

// Self-loops count as odd cycles.
inline bool bipartite(const std::vector<Mask>& adj, Mask nodes) {
  Mask left = 0, right = 0, rest = nodes;
  for (Mask m = nodes; m; m &= m - 1)
    if (adj[low(m)] >> low(m) & 1) return false;
  while (rest) {
    int s = low(rest);
    Mask frontier = Mask{1} << s;
    left |= frontier;
    rest &= ~frontier;
    while (frontier) {
      int v = low(frontier);
      frontier &= frontier - 1;
      bool on_left = left >> v & 1;
      Mask nb = adj[v] & nodes;
      if (nb & (on_left ? left : right)) return false;
      Mask fresh = nb & rest;
      (on_left ? right : left) |= fresh;
      rest &= ~fresh;
      frontier |= fresh;
    }
  }
  return true;
}

// Lexicographic order of the ascending index lists of two masks.
inline bool lex_less(Mask a, Mask b) {
  while (a && b) {
    int x = low(a), y = low(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

inline std::vector<int> to_nodes(Mask m) {
  std::vector<int> out;
  for (; m; m &= m - 1) out.push_back(low(m));
  return out;
}

}  // namespace mcl::bits
