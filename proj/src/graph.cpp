#include "qlo/graph.hpp"

#include <algorithm>
#include <cmath>

namespace qlo {

namespace {

// Tomita-style max clique on word-parallel candidate sets.
class CliqueSearch {
 public:
  explicit CliqueSearch(const Graph& g) : g_(g), n_(g.n()), words_(g.words()) {}

  int run() {
    std::vector<std::uint64_t> cand(words_, 0);
    for (int v = 0; v < n_; ++v) cand[v / 64] |= std::uint64_t{1} << (v % 64);
    best_ = 0;
    expand(cand, 0);
    return best_;
  }

 private:
  static int popcount(const std::vector<std::uint64_t>& s) {
    int c = 0;
    for (auto w : s) c += __builtin_popcountll(w);
    return c;
  }

  // greedy colouring upper bound; vertices ordered by colour for branching
  int colour_order(const std::vector<std::uint64_t>& cand, std::vector<int>& order,
                   std::vector<int>& bound) {
    order.clear();
    bound.clear();
    std::vector<std::uint64_t> uncoloured = cand;
    int colour = 0;
    while (popcount(uncoloured) > 0) {
      ++colour;
      std::vector<std::uint64_t> available = uncoloured;
      for (;;) {
        int v = -1;
        for (int w = 0; w < words_ && v < 0; ++w)
          if (available[w]) v = w * 64 + __builtin_ctzll(available[w]);
        if (v < 0) break;
        available[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        uncoloured[v / 64] &= ~(std::uint64_t{1} << (v % 64));
        const std::uint64_t* adj = g_.row(v);
        for (int w = 0; w < words_; ++w) available[w] &= ~adj[w];
        order.push_back(v);
        bound.push_back(colour);
      }
    }
    return colour;
  }

  void expand(const std::vector<std::uint64_t>& cand, int depth) {
    std::vector<int> order, bound;
    colour_order(cand, order, bound);
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (depth + bound[idx] <= best_) return;  // colour bound prunes the rest
      const int v = order[idx];
      std::vector<std::uint64_t> next(words_);
      const std::uint64_t* adj = g_.row(v);
      bool any = false;
      for (int w = 0; w < words_; ++w) {
        std::uint64_t m = cand[w] & adj[w];
        // only candidates earlier in the order remain relevant, but keeping
        // the full intersection is correct and simpler
        next[w] = m;
        any |= m != 0;
      }
      // remove v and later-processed vertices from the candidate copy
      for (int j = idx; j < static_cast<int>(order.size()); ++j)
        next[order[j] / 64] &= ~(std::uint64_t{1} << (order[j] % 64));
      if (depth + 1 > best_) best_ = depth + 1;
      if (any) expand(next, depth + 1);
    }
  }

  const Graph& g_;
  int n_, words_;
  int best_ = 0;
};

int greedy_clique_lower_bound(const Graph& g, int restarts) {
  Rng rng(12345);
  int best = g.n() > 0 ? 1 : 0;
  for (int t = 0; t < restarts; ++t) {
    auto order = rng.random_permutation(g.n());
    std::vector<int> clique;
    for (int v : order) {
      bool ok = true;
      for (int u : clique)
        if (!g.edge(u, v)) {
          ok = false;
          break;
        }
      if (ok) clique.push_back(v);
    }
    best = std::max(best, static_cast<int>(clique.size()));
  }
  return best;
}

}  // namespace

int max_clique(const Graph& g) {
  if (g.n() == 0) return 0;
  if (g.n() > kExactHomogeneityCap) return greedy_clique_lower_bound(g, 64);
  CliqueSearch search(g);
  return search.run();
}

HomogeneityResult homogeneity(const Graph& g) {
  HomogeneityResult r;
  r.clique = max_clique(g);
  r.independent = max_clique(g.complement());
  r.homogeneity = std::max(r.clique, r.independent);
  r.exact = g.n() <= kExactHomogeneityCap;
  return r;
}

bool is_c_ramsey(const Graph& g, double c) {
  if (g.n() < 2) return false;
  return homogeneity(g).homogeneity < c * std::log2(static_cast<double>(g.n()));
}

}  // namespace qlo
