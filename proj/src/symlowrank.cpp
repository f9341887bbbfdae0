#include "qlo/symlowrank.hpp"

#include <algorithm>
#include <cmath>

#include "qlo/combinatorics.hpp"
#include "qlo/exceptions.hpp"

namespace qlo {

namespace {

template <class F>
Mag<F> approx_mag(double x) {
  if constexpr (std::is_same_v<F, Rational>) {
    Rational q(static_cast<long>(std::llround(x * 1e9)), 1000000000L);
    q.canonicalize();
    return q;
  } else {
    return x;
  }
}

template <class F>
std::vector<std::vector<F>> matrix_rows(const Matrix<F>& m) {
  std::vector<std::vector<F>> rows(m.rows());
  for (int i = 0; i < m.rows(); ++i) rows[i] = m.row(i);
  return rows;
}

template <class F>
Matrix<F> zero_rows_cols(const Matrix<F>& m, const std::vector<int>& idx) {
  Matrix<F> out = m;
  for (int v : idx) {
    for (int j = 0; j < out.cols(); ++j) out(v, j) = F{};
    for (int i = 0; i < out.rows(); ++i) out(i, v) = F{};
  }
  return out;
}

template <class F>
bool row_in_span(const std::vector<std::vector<F>>& w, const std::vector<F>& v) {
  if (vec_l1(v) == Mag<F>{}) return true;
  Matrix<F> stacked(static_cast<int>(w.size()) + 1, static_cast<int>(v.size()));
  for (std::size_t i = 0; i < w.size(); ++i) stacked.set_row(static_cast<int>(i), w[i]);
  stacked.set_row(static_cast<int>(w.size()), v);
  return rank(stacked) <= static_cast<int>(w.size());
}

}  // namespace

template <class F>
PipelineParams<F> PipelineParams<F>::from_asymptotic(double alpha, int r) {
  PipelineParams<F> p;
  p.r = r;
  p.tuple_alpha = approx_mag<F>(alpha);
  p.delta = approx_mag<F>(alpha);
  const double eps = std::pow(alpha, std::pow(6.0 * r, -r));
  for (int k = 1; k <= r; ++k)
    p.basis_levels.push_back(approx_mag<F>(std::pow(eps, std::pow(6.0 * r, k))));
  const double alpha_tilde = std::pow(alpha, std::pow(6.0 * r, -1));  // worst case q=r-1
  p.column_cut = approx_mag<F>(std::pow(alpha_tilde, 3.0 * r));
  p.graph_cut = approx_mag<F>(std::pow(alpha_tilde, 2.0 * r));
  p.minor_floor = approx_mag<F>(alpha_tilde / 4.0);
  return p;
}

template struct PipelineParams<Rational>;
template struct PipelineParams<double>;

template <class F>
TupleCollection<F> disjoint_independent_tuples(const Matrix<F>& a, int r,
                                               const Mag<F>& alpha, long budget,
                                               const MinorSearchOptions& minors) {
  const int n = a.rows();
  TupleCollection<F> out;
  out.r = r;
  out.alpha = alpha;
  std::vector<char> used(n, 0);
  long examined = 0;
  bool stopped = false;
  // lexicographic sweep; rows of a taken tuple leave the pool
  std::vector<int> idx(r);
  std::vector<std::vector<F>> cand(r);
  for_each_combination(n, r, [&](const std::vector<int>& rows) {
    if (stopped) return;
    for (int v : rows)
      if (used[v]) return;
    if (examined >= budget) {
      stopped = true;
      return;
    }
    ++examined;
    for (int i = 0; i < r; ++i) cand[i] = a.row(rows[i]);
    auto verdict = check_eps_independence(VectorList<F>(cand), alpha, minors);
    if (verdict.kind == IndependenceVerdict<F>::Kind::CertifiedIndependent) {
      out.tuples.push_back(rows);
      for (int v : rows) used[v] = 1;
    }
  });
  out.candidates_examined = examined;
  out.budget_exhausted = stopped;
  out.empirical_delta =
      n > 0 ? static_cast<double>(out.tuples.size()) / static_cast<double>(n) : 0.0;
  return out;
}

template TupleCollection<Rational> disjoint_independent_tuples(const Matrix<Rational>&, int,
                                                               const Rational&, long,
                                                               const MinorSearchOptions&);
template TupleCollection<double> disjoint_independent_tuples(const Matrix<double>&, int,
                                                             const double&, long,
                                                             const MinorSearchOptions&);

template <class F>
AStarStage<F> build_A_star(const Matrix<F>& a, const TupleCollection<F>& tuples) {
  AStarStage<F> st;
  for (const auto& t : tuples.tuples)
    for (int v : t) st.J1.push_back(v);
  std::sort(st.J1.begin(), st.J1.end());
  st.A_star = zero_rows_cols(a, st.J1);
  st.distance = a.l1_distance(st.A_star);
  return st;
}

template AStarStage<Rational> build_A_star(const Matrix<Rational>&,
                                           const TupleCollection<Rational>&);
template AStarStage<double> build_A_star(const Matrix<double>&,
                                         const TupleCollection<double>&);

template <class F>
BStarStage<F> build_B_star(const Matrix<F>& a_star, int r,
                           const std::vector<Mag<F>>& levels,
                           const MinorSearchOptions& minors) {
  BStarStage<F> st;
  SelectBasisOptions opt;
  opt.minors = minors;
  auto sel = select_basis_rows_with_levels(matrix_rows(a_star), levels, r, opt);
  st.q = sel.q;
  st.basis_rows = sel.chosen;
  st.w = sel.basis;
  st.levels = sel.levels;
  if (sel.hypothesis_failed) {
    st.hypothesis_failed = true;
    st.failure_certificate = sel.r_certificate;
    return st;
  }
  st.B_star = Matrix<F>(a_star.rows(), a_star.cols());
  for (int i = 0; i < a_star.rows(); ++i) st.B_star.set_row(i, sel.approximations[i]);
  st.residuals = sel.residuals;
  return st;
}

template BStarStage<Rational> build_B_star(const Matrix<Rational>&, int,
                                           const std::vector<Rational>&,
                                           const MinorSearchOptions&);
template BStarStage<double> build_B_star(const Matrix<double>&, int,
                                         const std::vector<double>&,
                                         const MinorSearchOptions&);

template <class F>
ZeroColumnsStage<F> zero_bad_columns(const Matrix<F>& a_star, const Matrix<F>& b_star,
                                     const std::vector<std::vector<F>>& w,
                                     const Mag<F>& column_cut,
                                     const Mag<F>& recertify_level,
                                     const MinorSearchOptions& minors) {
  const int n = a_star.cols();
  ZeroColumnsStage<F> st;
  st.cut_abs = column_cut * Mag<F>(n);
  for (int j = 0; j < n; ++j) {
    Mag<F> dist{};
    for (int i = 0; i < n; ++i) dist += FieldTraits<F>::abs(a_star(i, j) - b_star(i, j));
    if (!(dist < st.cut_abs)) st.J2.push_back(j);
  }
  st.A_prime = zero_rows_cols(a_star, st.J2);
  st.B_prime = zero_rows_cols(b_star, st.J2);
  st.w_prime = w;
  for (auto& row : st.w_prime)
    for (int j : st.J2) row[j] = F{};
  st.recertify_level = recertify_level;
  if (st.w_prime.empty()) {
    st.w_prime_recertified = true;
  } else {
    auto verdict = check_eps_independence(VectorList<F>(st.w_prime), recertify_level, minors);
    st.w_prime_recertified =
        verdict.kind == IndependenceVerdict<F>::Kind::CertifiedIndependent;
  }
  return st;
}

template ZeroColumnsStage<Rational> zero_bad_columns(const Matrix<Rational>&,
                                                     const Matrix<Rational>&,
                                                     const std::vector<std::vector<Rational>>&,
                                                     const Rational&, const Rational&,
                                                     const MinorSearchOptions&);
template ZeroColumnsStage<double> zero_bad_columns(const Matrix<double>&,
                                                   const Matrix<double>&,
                                                   const std::vector<std::vector<double>>&,
                                                   const double&, const double&,
                                                   const MinorSearchOptions&);

template <class F>
IndexSetStage<F> select_index_set(const Matrix<F>& a_prime, const Matrix<F>& b_prime,
                                  const std::vector<std::vector<F>>& w_prime,
                                  const Mag<F>& graph_cut, const Mag<F>& minor_floor) {
  const int q = static_cast<int>(w_prime.size());
  const int n = a_prime.cols();
  IndexSetStage<F> st;
  if (q == 0) {
    st.found = true;
    st.det = F{1};
    return st;
  }
  auto discrepant = [&](int i, int j) {
    return !(FieldTraits<F>::abs(a_prime(i, j) - b_prime(i, j)) < graph_cut) ||
           !(FieldTraits<F>::abs(a_prime(j, i) - b_prime(j, i)) < graph_cut);
  };
  std::vector<int> chosen;
  Mag<F> floor_pow{1};
  for (int step = 1; step <= q; ++step) {
    floor_pow *= minor_floor;
    int best_col = -1;
    F best_det{};
    Mag<F> best_mag{};
    for (int j = 0; j < n; ++j) {
      bool blocked = false;
      for (int i : chosen)
        if (i == j || discrepant(i, j)) {
          blocked = true;
          break;
        }
      if (blocked) continue;
      std::vector<int> cols = chosen;
      cols.push_back(j);
      std::vector<int> rows(step);
      for (int i = 0; i < step; ++i) rows[i] = i;
      Matrix<F> sub(step, step);
      for (int i = 0; i < step; ++i)
        for (int c = 0; c < step; ++c) sub(i, c) = w_prime[i][cols[c]];
      F d = determinant(sub);
      auto mag = FieldTraits<F>::abs(d);
      if (best_col < 0 || best_mag < mag) {
        best_col = j;
        best_det = d;
        best_mag = mag;
      }
    }
    if (best_col < 0 || best_mag < floor_pow) {
      st.found = false;
      st.best_partial = chosen;
      if (best_col >= 0) st.best_partial.push_back(best_col);
      return st;
    }
    chosen.push_back(best_col);
    st.det = best_det;
  }
  std::sort(chosen.begin(), chosen.end());
  // determinant of the sorted column set (sign may flip, magnitude equal)
  Matrix<F> final_sub(q, q);
  for (int i = 0; i < q; ++i)
    for (int c = 0; c < q; ++c) final_sub(i, c) = w_prime[i][chosen[c]];
  st.det = determinant(final_sub);
  st.I = chosen;
  st.found = true;
  return st;
}

template IndexSetStage<Rational> select_index_set(const Matrix<Rational>&,
                                                  const Matrix<Rational>&,
                                                  const std::vector<std::vector<Rational>>&,
                                                  const Rational&, const Rational&);
template IndexSetStage<double> select_index_set(const Matrix<double>&, const Matrix<double>&,
                                                const std::vector<std::vector<double>>&,
                                                const double&, const double&);

template <class F>
Matrix<F> build_H(const Matrix<F>& a_prime, const Matrix<F>& b_prime,
                  const std::vector<std::vector<F>>& w_prime, const std::vector<int>& I) {
  const int n = a_prime.cols();
  const int q = static_cast<int>(I.size());
  Matrix<F> h(n, n);
  if (q == 0) return h;
  if (static_cast<int>(w_prime.size()) != q)
    throw DimensionError("build_H: |I| must match the basis size");

  std::vector<F> prescribed(q);
  for (int ii = 0; ii < q; ++ii) {
    const int i = I[ii];
    for (int jj = 0; jj < q; ++jj) {
      const int j = I[jj];
      prescribed[jj] = (i == j) ? b_prime(i, i) : a_prime(i, j);
    }
    h.set_row(i, extend_in_span(w_prime, I, prescribed));
  }
  std::vector<char> in_I(n, 0);
  for (int i : I) in_I[i] = 1;
  for (int i = 0; i < n; ++i) {
    if (in_I[i]) continue;
    for (int jj = 0; jj < q; ++jj) prescribed[jj] = h(I[jj], i);  // mirror
    h.set_row(i, extend_in_span(w_prime, I, prescribed));
  }
  if constexpr (FieldTraits<F>::exact) {
    if (!h.is_symmetric()) throw InvariantError("build_H: extension is not symmetric");
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (mag_to_double(FieldTraits<F>::abs(h(i, j) - h(j, i))) > 1e-9)
          throw InvariantError("build_H: extension is not symmetric");
  }
  return h;
}

template Matrix<Rational> build_H(const Matrix<Rational>&, const Matrix<Rational>&,
                                  const std::vector<std::vector<Rational>>&,
                                  const std::vector<int>&);
template Matrix<double> build_H(const Matrix<double>&, const Matrix<double>&,
                                const std::vector<std::vector<double>>&,
                                const std::vector<int>&);

namespace {

bool entries_in(const Matrix<Rational>& m, const std::vector<Rational>& sorted_set) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!std::binary_search(sorted_set.begin(), sorted_set.end(), m(i, j))) return false;
  return true;
}

template <class F>
bool set_membership_ok(const PipelineTrace<F>&, const CoefficientSetClosure*) {
  return false;  // set mode is exact-arithmetic only
}

template <>
bool set_membership_ok<Rational>(const PipelineTrace<Rational>& trace,
                                 const CoefficientSetClosure* closure) {
  if (!closure) return false;
  // B* entries live in tau_q(S) (subset of sigma_r), H entries in S'
  std::vector<Rational> tau_set;
  if (trace.q == 0) {
    tau_set.push_back(Rational(0));
  } else {
    tau_set = closure->tau[trace.q - 1];
  }
  std::vector<Rational> tau_sorted = tau_set;
  std::sort(tau_sorted.begin(), tau_sorted.end());
  if (!entries_in(trace.B_star, tau_sorted)) return false;
  return entries_in(trace.H, closure->s_prime);
}

}  // namespace

template <class F>
LowRankResult<F> symmetric_low_rank_approx(const Matrix<F>& a,
                                           const PipelineParams<F>& params,
                                           const CoefficientSetClosure* set_closure) {
  if (a.rows() != a.cols())
    throw DimensionError("symmetric_low_rank_approx: square matrix expected");
  if constexpr (FieldTraits<F>::exact) {
    if (!a.is_symmetric())
      throw DimensionError("symmetric_low_rank_approx: symmetric matrix expected");
  }
  if (!set_closure && Mag<F>{1} < a.linf_norm())
    throw DimensionError("symmetric_low_rank_approx: ||A||_inf <= 1 required");
  if (static_cast<int>(params.basis_levels.size()) < params.r)
    throw ConfigError("symmetric_low_rank_approx: need r basis levels");

  const int n = a.rows();
  LowRankResult<F> res;
  auto& tr = res.trace;
  tr.A = a;
  tr.params = params;
  tr.set_mode = set_closure != nullptr;
  if (set_closure) {
    tr.closure_sigma = set_closure->sigma;
    tr.closure_s_prime = set_closure->s_prime;
  }

  tr.tuples = disjoint_independent_tuples(a, params.r, params.tuple_alpha,
                                          params.tuple_budget, params.minors);
  tr.hypothesis_holds =
      Mag<F>(static_cast<int>(tr.tuples.tuples.size())) < params.delta * Mag<F>(n);
  if (!tr.hypothesis_holds) {
    res.failure_stage = "hypothesis";
    return res;
  }

  auto a_stage = build_A_star(a, tr.tuples);
  tr.A_star = a_stage.A_star;
  tr.J1 = a_stage.J1;
  tr.dist_A_Astar = a_stage.distance;
  tr.A_star_tuple_free = disjoint_independent_tuples(tr.A_star, params.r,
                                                     params.tuple_alpha,
                                                     params.tuple_budget, params.minors)
                             .tuples.empty();

  auto b_stage = build_B_star(tr.A_star, params.r, params.basis_levels, params.minors);
  if (b_stage.hypothesis_failed) {
    res.failure_stage = "basis";
    tr.q = b_stage.q;
    tr.basis_rows = b_stage.basis_rows;
    return res;
  }
  tr.q = b_stage.q;
  tr.basis_rows = b_stage.basis_rows;
  tr.w = b_stage.w;
  tr.basis_levels_used = b_stage.levels;
  tr.B_star = b_stage.B_star;
  tr.row_residuals = b_stage.residuals;
  tr.alpha_tilde_used = tr.q > 0 ? b_stage.levels.back() : Mag<F>{1};
  tr.alpha_tilde_formula = std::pow(
      mag_to_double(params.tuple_alpha),
      std::pow(6.0 * params.r, static_cast<double>(tr.q - params.r)));

  auto z_stage = zero_bad_columns(tr.A_star, tr.B_star, tr.w, params.column_cut,
                                  tr.alpha_tilde_used / Mag<F>(2), params.minors);
  tr.J2 = z_stage.J2;
  tr.A_prime = z_stage.A_prime;
  tr.B_prime = z_stage.B_prime;
  tr.w_prime = z_stage.w_prime;
  tr.column_cut_abs = z_stage.cut_abs;
  tr.w_prime_recertified = z_stage.w_prime_recertified;
  tr.w_prime_level = z_stage.recertify_level;

  auto i_stage = select_index_set(tr.A_prime, tr.B_prime, tr.w_prime, params.graph_cut,
                                  params.minor_floor);
  tr.index_set_found = i_stage.found;
  if (!i_stage.found) {
    res.failure_stage = "index-set";
    tr.best_partial_I = i_stage.best_partial;
    return res;
  }
  tr.I = i_stage.I;
  tr.det_MI = i_stage.det;

  tr.H = build_H(tr.A_prime, tr.B_prime, tr.w_prime, tr.I);
  if (rank(tr.H) > tr.q)
    throw InvariantError("symmetric_low_rank_approx: rank(H) exceeds q");
  tr.distance = a.l1_distance(tr.H);

  res.success = true;
  res.H = tr.H;
  res.q = tr.q;
  res.distance = tr.distance;
  res.set_mode_ok = set_closure ? set_membership_ok<F>(tr, set_closure) : false;
  return res;
}

template LowRankResult<Rational> symmetric_low_rank_approx(
    const Matrix<Rational>&, const PipelineParams<Rational>&, const CoefficientSetClosure*);
template LowRankResult<double> symmetric_low_rank_approx(const Matrix<double>&,
                                                         const PipelineParams<double>&,
                                                         const CoefficientSetClosure*);

template <class F>
LowRankResult<F> symmetric_close_approx(const Matrix<F>& a, int r, double alpha) {
  auto params = PipelineParams<F>::from_asymptotic(std::sqrt(alpha), r);
  return symmetric_low_rank_approx(a, params);
}

template LowRankResult<Rational> symmetric_close_approx(const Matrix<Rational>&, int, double);
template LowRankResult<double> symmetric_close_approx(const Matrix<double>&, int, double);

// ---------------------------------------------------------------------------

template <class F>
bool verify_trace(const PipelineTrace<F>& trace, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int n = trace.A.rows();
  const auto& p = trace.params;

  // stage 1: A* is A with the tuple rows/columns zeroed, distance <= 2|J1|n
  for (const auto& t : trace.tuples.tuples) {
    std::vector<std::vector<F>> rows;
    for (int v : t) rows.push_back(trace.A.row(v));
    auto verdict = check_eps_independence(VectorList<F>(rows), p.tuple_alpha, p.minors);
    if (verdict.kind != IndependenceVerdict<F>::Kind::CertifiedIndependent)
      return fail("a stored tuple no longer certifies");
  }
  if (trace.A_star.rows() == n) {
    std::vector<int> expect_j1;
    for (const auto& t : trace.tuples.tuples)
      for (int v : t) expect_j1.push_back(v);
    std::sort(expect_j1.begin(), expect_j1.end());
    if (expect_j1 != trace.J1) return fail("J1 mismatch");
    Matrix<F> rebuilt = zero_rows_cols(trace.A, trace.J1);
    if (!(rebuilt == trace.A_star)) return fail("A* rebuild mismatch");
    Mag<F> dist = trace.A.l1_distance(trace.A_star);
    if (!(dist == trace.dist_A_Astar)) {
      if (FieldTraits<F>::exact) return fail("A* distance mismatch");
      if (mag_to_double(FieldTraits<F>::abs(dist - trace.dist_A_Astar)) > 1e-9)
        return fail("A* distance mismatch");
    }
    Mag<F> bound = Mag<F>(2 * static_cast<int>(trace.J1.size())) * Mag<F>(n);
    if (bound < dist) return fail("A* distance exceeds 2|J1|n");
  }

  // stage 2: basis rows certified, B* rows in span(w), residuals honest
  if (trace.B_star.rows() != n) return true;  // trace ends at an earlier stage
  if (static_cast<int>(trace.basis_rows.size()) != trace.q) return fail("q mismatch");
  for (int k = 1; k <= trace.q; ++k) {
    std::vector<std::vector<F>> head(trace.w.begin(), trace.w.begin() + k);
    auto verdict = check_eps_independence(VectorList<F>(head),
                                          trace.basis_levels_used[k - 1], p.minors);
    if (verdict.kind != IndependenceVerdict<F>::Kind::CertifiedIndependent)
      return fail("basis prefix no longer certifies");
  }
  for (int k = 0; k < trace.q; ++k)
    if (trace.w[k] != trace.A_star.row(trace.basis_rows[k]))
      return fail("basis vector is not the stated row of A*");
  for (int i = 0; i < n; ++i) {
    if (!row_in_span(trace.w, trace.B_star.row(i))) return fail("B* row left the span");
    Mag<F> res = vec_l1_distance(trace.A_star.row(i), trace.B_star.row(i));
    if (!(res == trace.row_residuals[i])) {
      if (FieldTraits<F>::exact) return fail("row residual mismatch");
      if (mag_to_double(FieldTraits<F>::abs(res - trace.row_residuals[i])) > 1e-9)
        return fail("row residual mismatch");
    }
  }

  // stage 3: J2 is exactly the over-threshold column set; zeroing consistent
  if (trace.A_prime.rows() == n) {
    if (!(trace.column_cut_abs == p.column_cut * Mag<F>(n)))
      return fail("column cut mismatch");
    std::vector<int> expect_j2;
    for (int j = 0; j < n; ++j) {
      Mag<F> dist{};
      for (int i = 0; i < n; ++i)
        dist += FieldTraits<F>::abs(trace.A_star(i, j) - trace.B_star(i, j));
      if (!(dist < trace.column_cut_abs)) expect_j2.push_back(j);
    }
    if (expect_j2 != trace.J2) return fail("J2 mismatch");
    if (!(zero_rows_cols(trace.A_star, trace.J2) == trace.A_prime))
      return fail("A' rebuild mismatch");
    if (!(zero_rows_cols(trace.B_star, trace.J2) == trace.B_prime))
      return fail("B' rebuild mismatch");
    auto wp = trace.w;
    for (auto& row : wp)
      for (int j : trace.J2) row[j] = F{};
    if (wp != trace.w_prime) return fail("w' rebuild mismatch");
    if (trace.w_prime_recertified && trace.q > 0) {
      auto verdict = check_eps_independence(VectorList<F>(trace.w_prime),
                                            trace.w_prime_level, p.minors);
      if (verdict.kind != IndependenceVerdict<F>::Kind::CertifiedIndependent)
        return fail("w' recertification claim does not replay");
    }
    for (int j = 0; j < n; ++j) {
      Mag<F> dist{};
      for (int i = 0; i < n; ++i)
        dist += FieldTraits<F>::abs(trace.A_prime(i, j) - trace.B_prime(i, j));
      if (!(dist < trace.column_cut_abs) && dist != Mag<F>{})
        return fail("a surviving column still exceeds the cut");
    }
  }

  // stage 4: I is discrepancy-independent with the floored minor
  if (trace.index_set_found) {
    if (static_cast<int>(trace.I.size()) != trace.q) return fail("|I| != q");
    for (std::size_t a_i = 0; a_i < trace.I.size(); ++a_i)
      for (std::size_t b_i = a_i + 1; b_i < trace.I.size(); ++b_i) {
        const int i = trace.I[a_i], j = trace.I[b_i];
        if (!(FieldTraits<F>::abs(trace.A_prime(i, j) - trace.B_prime(i, j)) <
              p.graph_cut) ||
            !(FieldTraits<F>::abs(trace.A_prime(j, i) - trace.B_prime(j, i)) <
              p.graph_cut))
          return fail("I contains a discrepant pair");
      }
    Matrix<F> sub(trace.q, trace.q);
    for (int i = 0; i < trace.q; ++i)
      for (int c = 0; c < trace.q; ++c) sub(i, c) = trace.w_prime[i][trace.I[c]];
    F det = determinant(sub);
    if (!(det == trace.det_MI)) {
      if (FieldTraits<F>::exact) return fail("det M_I mismatch");
      if (mag_to_double(FieldTraits<F>::abs(det - trace.det_MI)) > 1e-9)
        return fail("det M_I mismatch");
    }
    Mag<F> floor_pow{1};
    for (int t = 0; t < trace.q; ++t) floor_pow *= p.minor_floor;
    if (FieldTraits<F>::abs(det) < floor_pow) return fail("det M_I below the floor");
  }

  // stage 5: H agrees with the prescriptions, lives in the span, symmetric,
  // rank <= q, and the stored distance replays
  if (trace.index_set_found) {
    for (std::size_t a_i = 0; a_i < trace.I.size(); ++a_i) {
      const int i = trace.I[a_i];
      if (!(trace.H(i, i) == trace.B_prime(i, i))) return fail("h_ii != b'_ii");
      for (std::size_t b_i = 0; b_i < trace.I.size(); ++b_i) {
        const int j = trace.I[b_i];
        if (i != j && !(trace.H(i, j) == trace.A_prime(i, j)))
          return fail("h_ij != a'_ij on I");
      }
    }
    for (int i = 0; i < n; ++i)
      if (!row_in_span(trace.w_prime, trace.H.row(i))) return fail("H row left the span");
    if (!trace.H.is_symmetric()) return fail("H is not symmetric");
    if (rank(trace.H) > trace.q) return fail("rank(H) exceeds q");
    if (trace.q >= trace.params.r) return fail("q did not stay below r");
    Mag<F> dist = trace.A.l1_distance(trace.H);
    if (!(dist == trace.distance)) {
      if (FieldTraits<F>::exact) return fail("H distance mismatch");
      if (mag_to_double(FieldTraits<F>::abs(dist - trace.distance)) > 1e-9)
        return fail("H distance mismatch");
    }
  }

  // set mode: exact membership
  if (trace.set_mode) {
    if constexpr (std::is_same_v<F, Rational>) {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!std::binary_search(trace.closure_s_prime.begin(),
                                  trace.closure_s_prime.end(), trace.H(i, j)))
            return fail("an H entry escapes S'");
    } else {
      return fail("set mode requires the exact backend");
    }
  }
  return true;
}

template bool verify_trace(const PipelineTrace<Rational>&, std::string*);
template bool verify_trace(const PipelineTrace<double>&, std::string*);

// ---------------------------------------------------------------------------
// coefficient set closure

std::vector<Rational> sigma_step(const std::vector<Rational>& s_in, int r,
                                 long enumeration_cap,
                                 std::vector<std::size_t>* t_sizes,
                                 std::vector<std::vector<Rational>>* tau_out) {
  std::vector<Rational> s = s_in;
  s.push_back(Rational(0));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const long base = static_cast<long>(s.size());

  std::set<Rational> sigma(s.begin(), s.end());
  for (int q = 1; q <= r - 1; ++q) {
    double work = 1.0;
    for (int t = 0; t < q * q + q; ++t) work *= static_cast<double>(base);
    if (work > static_cast<double>(enumeration_cap))
      throw CapExceededError("coefficient_set_closure: |S|^(q^2+q) over the cap");

    // all invertible q x q matrices over s
    std::set<std::vector<Rational>> t_q;
    const long cells = static_cast<long>(q) * q;
    std::vector<int> odo(cells, 0);
    Matrix<Rational> m(q, q);
    for (;;) {
      for (long c = 0; c < cells; ++c) m(static_cast<int>(c / q), static_cast<int>(c % q)) = s[odo[c]];
      if (!FieldTraits<Rational>::is_zero(determinant(m))) {
        // all right-hand sides over s
        std::vector<int> zodo(q, 0);
        std::vector<Rational> z(q);
        for (;;) {
          for (int i = 0; i < q; ++i) z[i] = s[zodo[i]];
          // solve M v = z  <=>  v^T M^T = z^T
          t_q.insert(solve_row_system(m.transposed(), z));
          int d = q - 1;
          while (d >= 0 && zodo[d] == base - 1) --d;
          if (d < 0) break;
          ++zodo[d];
          for (int d2 = d + 1; d2 < q; ++d2) zodo[d2] = 0;
        }
      }
      long d = cells - 1;
      while (d >= 0 && odo[d] == base - 1) --d;
      if (d < 0) break;
      ++odo[d];
      for (long d2 = d + 1; d2 < cells; ++d2) odo[d2] = 0;
    }
    if (t_sizes) t_sizes->push_back(t_q.size());

    std::set<Rational> tau;
    std::vector<int> wodo(q, 0);
    std::vector<Rational> wvec(q);
    for (const auto& v : t_q) {
      std::fill(wodo.begin(), wodo.end(), 0);
      for (;;) {
        Rational dot(0);
        for (int i = 0; i < q; ++i) dot += v[i] * s[wodo[i]];
        tau.insert(dot);
        int d = q - 1;
        while (d >= 0 && wodo[d] == base - 1) --d;
        if (d < 0) break;
        ++wodo[d];
        for (int d2 = d + 1; d2 < q; ++d2) wodo[d2] = 0;
      }
    }
    if (tau_out) tau_out->push_back(std::vector<Rational>(tau.begin(), tau.end()));
    sigma.insert(tau.begin(), tau.end());
  }
  return std::vector<Rational>(sigma.begin(), sigma.end());
}

CoefficientSetClosure coefficient_set_closure(std::vector<Rational> s, int r,
                                              long enumeration_cap) {
  CoefficientSetClosure out;
  out.r = r;
  s.push_back(Rational(0));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  out.base = s;
  out.sigma = sigma_step(s, r, enumeration_cap, &out.t_sizes, &out.tau);
  auto sigma2 = sigma_step(out.sigma, r, enumeration_cap);
  out.s_prime = sigma_step(sigma2, r, enumeration_cap);
  return out;
}

}  // namespace qlo
