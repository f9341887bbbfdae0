#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlo/rng.hpp"

namespace qlo {

// Simple undirected graph on vertices 0..n-1, adjacency kept as n bitsets.
class Graph {
 public:
  explicit Graph(int n = 0)
      : n_(n), words_((n + 63) / 64), adj_(static_cast<std::size_t>(n) * words_, 0) {}

  static Graph complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
  }
  static Graph cycle(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
    return g;
  }
  static Graph path(int n) {
    Graph g(n);
    for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1);
    return g;
  }
  // G(n, 1/2)
  static Graph random(int n, Rng& rng) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.coin()) g.add_edge(u, v);
    return g;
  }

  int n() const { return n_; }
  int words() const { return words_; }

  void add_edge(int u, int v) {
    if (u == v) return;  // irreflexive
    set_bit(u, v);
    set_bit(v, u);
  }
  bool edge(int u, int v) const {
    if (u == v) return false;
    return (adj_[static_cast<std::size_t>(u) * words_ + v / 64] >> (v % 64)) & 1;
  }
  // e(u, v) as a 0/1 integer
  int e(int u, int v) const { return edge(u, v) ? 1 : 0; }

  long edge_count() const {
    long total = 0;
    for (int u = 0; u < n_; ++u) total += degree(u);
    return total / 2;
  }
  int degree(int u) const {
    int d = 0;
    for (int w = 0; w < words_; ++w)
      d += __builtin_popcountll(adj_[static_cast<std::size_t>(u) * words_ + w]);
    return d;
  }

  Graph complement() const {
    Graph g(n_);
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (!edge(u, v)) g.add_edge(u, v);
    return g;
  }

  const std::uint64_t* row(int u) const {
    return adj_.data() + static_cast<std::size_t>(u) * words_;
  }

  // number of edges inside the subset given as a bitmask of `words()` words
  long edges_inside(const std::vector<std::uint64_t>& mask) const {
    long twice = 0;
    for (int u = 0; u < n_; ++u) {
      if (!((mask[u / 64] >> (u % 64)) & 1)) continue;
      const std::uint64_t* r = row(u);
      for (int w = 0; w < words_; ++w) twice += __builtin_popcountll(r[w] & mask[w]);
    }
    return twice / 2;
  }
  long edges_inside(const std::vector<int>& vertices) const {
    std::vector<std::uint64_t> mask(words_, 0);
    for (int v : vertices) mask[v / 64] |= std::uint64_t{1} << (v % 64);
    return edges_inside(mask);
  }

 private:
  void set_bit(int u, int v) {
    adj_[static_cast<std::size_t>(u) * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }
  int n_, words_;
  std::vector<std::uint64_t> adj_;
};

struct HomogeneityResult {
  int clique = 0;
  int independent = 0;
  int homogeneity = 0;  // max of the two
  bool exact = true;    // false above the branch-and-bound cap
};

inline constexpr int kExactHomogeneityCap = 64;

// Largest clique via bitset branch-and-bound with a greedy colouring bound;
// exact up to the cap, greedy lower bound beyond it.
int max_clique(const Graph& g);

HomogeneityResult homogeneity(const Graph& g);

// hom(G) < C log2 n
bool is_c_ramsey(const Graph& g, double c);

}  // namespace qlo
