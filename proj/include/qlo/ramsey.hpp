#pragma once

#include <tuple>

#include "qlo/graph.hpp"
#include "qlo/poly.hpp"

namespace qlo {

// Edge count of a uniformly random k-subset, rewritten as a quadratic
// polynomial of m = min(k, n-k) signs through a random permutation.
struct CouplingInstance {
  std::vector<int> pi;  // permutation of 0..n-1
  int n = 0, k = 0, m = 0;
  QuadraticPoly<Rational> f;  // m variables, deg-2 coefficients in quarters
};

// U_{pi,xi}: the k-subset selected by the permutation and the signs
std::vector<int> coupled_subset(const CouplingInstance& inst, const std::vector<int>& xi);

// Degree-2 coefficients from the four-edge formula; linear and constant parts
// fitted against m+1 exact edge counts, then spot-checked on random signs.
CouplingInstance coefficient_poly(const Graph& g, const std::vector<int>& pi, int k);

struct SampledCoupling {
  CouplingInstance instance;
  std::vector<int> xi;
  std::vector<int> subset;  // U_{pi,xi}
};
SampledCoupling sample_coupling(const Graph& g, int k, std::uint64_t seed);

// just U_{pi,xi} for a fresh (pi, xi); no polynomial construction
std::vector<int> sample_coupled_subset(int n, int k, Rng& rng);

// e(U_{pi,xi}) == f(xi), exhaustively over all 2^m signs or on sampled signs
bool verify_coupling_identity(const Graph& g, const CouplingInstance& inst,
                              bool exhaustive, int samples = 100,
                              std::uint64_t seed = 0);

struct StrongTupleReport {
  int r = 0;
  bool exhaustive = true;
  double count = 0.0;    // exact count or estimate
  double density = 0.0;  // count / C(m, 2r)
  double ci_halfwidth = 0.0;
  std::uint64_t samples = 0;  // candidate subsets examined
};

// (i_1<...<i_r<j_1<...<j_r) with a_{i_l j_l} = 1/2 and a_{i_l j_q} = 0 (l != q)
StrongTupleReport count_strong_tuples(const CouplingInstance& inst, int r,
                                      std::uint64_t budget, std::uint64_t seed);
bool is_strong_tuple(const CouplingInstance& inst, const std::vector<int>& tuple);

struct CountEstimate {
  bool exhaustive = true;
  double count = 0.0;
  double density = 0.0;
  double ci_halfwidth = 0.0;
  std::uint64_t samples = 0;
};

// full-rank r x r submatrices over all (row set, column set) pairs
CountEstimate count_full_rank_submatrices(const Matrix<Rational>& m, int r,
                                          std::uint64_t budget, std::uint64_t seed);

using MatrixEdit = std::tuple<int, int, Rational>;
int rank_after_edits(Matrix<Rational> m, const std::vector<MatrixEdit>& edits);

// ordered sequences of distinct vertices inducing a copy of h
CountEstimate count_induced_copies(const Graph& g, const Graph& h, std::uint64_t budget,
                                   std::uint64_t seed);

enum class DistributionMode { Exact, MonteCarlo };

inline constexpr long kSubsetEnumerationCap = 10'000'000;

// distribution of X = e(random k-subset); exact subset enumeration requires
// C(n,k) within the cap
PointMass<Rational> edge_statistic_distribution(const Graph& g, int k,
                                                DistributionMode mode,
                                                std::uint64_t samples = 0,
                                                std::uint64_t seed = 0);

double distribution_variance(const PointMass<Rational>& d);

}  // namespace qlo
