#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qlo/robust_linalg.hpp"

namespace qlo {

// ---------------------------------------------------------------------------
// Pipeline thresholds. from_asymptotic() fills them with the formula schedule
// tied to (alpha, r); at small n those exponent ladders collapse (the first
// basis level is alpha^{(6r)^{1-r}} ~ 1, the column cut alpha_tilde^{3r} ~ 0),
// so every threshold is an explicit knob and every stage claim gets
// re-verified from the stored matrices instead of trusted.
template <class F>
struct PipelineParams {
  int r = 2;
  Mag<F> tuple_alpha{};             // independence level for the r-tuple sweep
  Mag<F> delta{};                   // hypothesis bound: fewer than delta*n tuples
  std::vector<Mag<F>> basis_levels; // certification level per basis size
  Mag<F> column_cut{};              // zero columns with ||col(A*)-col(B*)||_1 >= cut*n
  Mag<F> graph_cut{};               // |a'_ij - b'_ij| >= cut makes a discrepancy edge
  Mag<F> minor_floor{};             // index-set pivot requirement per step
  long tuple_budget = 200000;       // candidate tuples examined in the sweep
  MinorSearchOptions minors;

  static PipelineParams from_asymptotic(double alpha, int r);
};

template <class F>
struct TupleCollection {
  int r = 0;
  std::vector<std::vector<int>> tuples;  // disjoint certified r-tuples of rows
  Mag<F> alpha{};
  double empirical_delta = 0.0;  // tuples.size() / n
  long candidates_examined = 0;
  bool budget_exhausted = false;
};

// Greedy maximal family of disjoint certified alpha-independent r-tuples of
// rows, scanned in lexicographic row order.
template <class F>
TupleCollection<F> disjoint_independent_tuples(const Matrix<F>& a, int r,
                                               const Mag<F>& alpha, long budget,
                                               const MinorSearchOptions& minors = {});

// Exact finite-coefficient-set closure: T_q solves Mv=z over the set,
// tau_q collects the dot products, sigma unions them, S' = sigma^3.
struct CoefficientSetClosure {
  std::vector<Rational> base;  // S with 0 inserted, sorted
  int r = 0;
  std::vector<std::size_t> t_sizes;            // |T_q| for q = 1..r-1
  std::vector<std::vector<Rational>> tau;      // tau_q(S) for q = 1..r-1
  std::vector<Rational> sigma;                 // sigma_r(S)
  std::vector<Rational> s_prime;               // sigma_r(sigma_r(sigma_r(S)))

  bool sigma_contains(const Rational& x) const {
    return std::binary_search(sigma.begin(), sigma.end(), x);
  }
  bool s_prime_contains(const Rational& x) const {
    return std::binary_search(s_prime.begin(), s_prime.end(), x);
  }
};

CoefficientSetClosure coefficient_set_closure(std::vector<Rational> s, int r,
                                              long enumeration_cap = 10'000'000);

// one application of sigma_r
std::vector<Rational> sigma_step(const std::vector<Rational>& s, int r,
                                 long enumeration_cap,
                                 std::vector<std::size_t>* t_sizes = nullptr,
                                 std::vector<std::vector<Rational>>* tau_out = nullptr);

// ---------------------------------------------------------------------------
// Stage records: everything needed to re-verify the claims later.

template <class F>
struct PipelineTrace {
  Matrix<F> A;
  PipelineParams<F> params;

  TupleCollection<F> tuples;
  bool hypothesis_holds = false;  // tuples < delta * n

  Matrix<F> A_star;
  std::vector<int> J1;              // zeroed rows/columns
  Mag<F> dist_A_Astar{};            // claimed <= 2 |J1| n
  bool A_star_tuple_free = false;   // re-sweep found nothing

  int q = 0;
  std::vector<int> basis_rows;            // row indices into A_star
  std::vector<std::vector<F>> w;          // the basis vectors themselves
  std::vector<Mag<F>> basis_levels_used;  // certification level at each size
  Matrix<F> B_star;
  std::vector<Mag<F>> row_residuals;      // ||row_i(A*) - row_i(B*)||_1
  Mag<F> alpha_tilde_used{};              // actual level of the selected basis
  double alpha_tilde_formula = 0.0;       // alpha^{(6r)^{q-r}} for reference

  std::vector<int> J2;
  Matrix<F> A_prime, B_prime;
  std::vector<std::vector<F>> w_prime;
  Mag<F> column_cut_abs{};       // cut * n actually applied
  bool w_prime_recertified = false;
  Mag<F> w_prime_level{};        // level the zeroed basis was re-checked at

  std::vector<int> I;
  F det_MI{};
  bool index_set_found = false;
  std::vector<int> best_partial_I;  // on failure: the furthest candidate

  Matrix<F> H;
  Mag<F> distance{};  // ||A - H||_1

  bool set_mode = false;
  std::vector<Rational> closure_sigma;    // sigma_r(S)
  std::vector<Rational> closure_s_prime;  // S'
};

template <class F>
struct LowRankResult {
  bool success = false;
  std::string failure_stage;  // "hypothesis" | "basis" | "index-set" | ""
  Matrix<F> H;
  int q = 0;
  Mag<F> distance{};
  PipelineTrace<F> trace;
  bool set_mode_ok = false;  // entries of H verified inside S'
};

// ---------------------------------------------------------------------------
// Stages

template <class F>
struct AStarStage {
  Matrix<F> A_star;
  std::vector<int> J1;
  Mag<F> distance{};
};

template <class F>
AStarStage<F> build_A_star(const Matrix<F>& a, const TupleCollection<F>& tuples);

template <class F>
struct BStarStage {
  int q = 0;
  std::vector<int> basis_rows;
  std::vector<std::vector<F>> w;
  std::vector<Mag<F>> levels;
  Matrix<F> B_star;
  std::vector<Mag<F>> residuals;
  bool hypothesis_failed = false;
  std::optional<IndependenceCertificate<F>> failure_certificate;
};

template <class F>
BStarStage<F> build_B_star(const Matrix<F>& a_star, int r,
                           const std::vector<Mag<F>>& levels,
                           const MinorSearchOptions& minors = {});

template <class F>
struct ZeroColumnsStage {
  std::vector<int> J2;
  Matrix<F> A_prime, B_prime;
  std::vector<std::vector<F>> w_prime;
  Mag<F> cut_abs{};
  bool w_prime_recertified = false;
  Mag<F> recertify_level{};
};

template <class F>
ZeroColumnsStage<F> zero_bad_columns(const Matrix<F>& a_star, const Matrix<F>& b_star,
                                     const std::vector<std::vector<F>>& w,
                                     const Mag<F>& column_cut,
                                     const Mag<F>& recertify_level,
                                     const MinorSearchOptions& minors = {});

template <class F>
struct IndexSetStage {
  bool found = false;
  std::vector<int> I;
  F det{};
  std::vector<int> best_partial;
};

// Greedy realisation of the independent-set-with-large-minor search on the
// discrepancy graph of (A', B').
template <class F>
IndexSetStage<F> select_index_set(const Matrix<F>& a_prime, const Matrix<F>& b_prime,
                                  const std::vector<std::vector<F>>& w_prime,
                                  const Mag<F>& graph_cut, const Mag<F>& minor_floor);

// Symmetric extension: h_ii = b'_ii, h_ij = a'_ij on I, rows interpolated in
// span(w'); symmetry of the result is asserted, not assumed.
template <class F>
Matrix<F> build_H(const Matrix<F>& a_prime, const Matrix<F>& b_prime,
                  const std::vector<std::vector<F>>& w_prime, const std::vector<int>& I);

// Full composition. When set_closure is provided, membership of every H entry
// in S' is verified exactly and reported in the result.
template <class F>
LowRankResult<F> symmetric_low_rank_approx(const Matrix<F>& a,
                                           const PipelineParams<F>& params,
                                           const CoefficientSetClosure* set_closure = nullptr);

// Corollary-style wrapper: A is within alpha*n^2 of some rank-<r matrix, run
// with the sqrt(alpha) parameter transfer.
template <class F>
LowRankResult<F> symmetric_close_approx(const Matrix<F>& a, int r, double alpha);

// Re-verify every stage claim of a trace from its stored matrices.
template <class F>
bool verify_trace(const PipelineTrace<F>& trace, std::string* why = nullptr);

}  // namespace qlo
