#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qlo/combinatorics.hpp"
#include "qlo/exceptions.hpp"
#include "qlo/matrix.hpp"
#include "qlo/rng.hpp"

namespace qlo {

// ---------------------------------------------------------------------------
// Conjugation-aware inner product (plain for rational/real)

template <class F>
inline F conjugate(const F& x) { return x; }
template <>
inline Complex conjugate<Complex>(const Complex& x) { return std::conj(x); }

template <class F>
F inner(const std::vector<F>& a, const std::vector<F>& b) {
  F s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * conjugate(b[i]);
  return s;
}

// ---------------------------------------------------------------------------
// Vector lists

template <class F>
struct VectorList {
  std::vector<std::vector<F>> vecs;
  int n = 0;
  Mag<F> entry_bound{};  // max |entry|, computed eagerly

  VectorList() = default;
  explicit VectorList(std::vector<std::vector<F>> v) : vecs(std::move(v)) {
    if (!vecs.empty()) n = static_cast<int>(vecs.front().size());
    for (const auto& row : vecs) {
      if (static_cast<int>(row.size()) != n)
        throw DimensionError("VectorList: rows of unequal length");
      auto b = vec_linf(row);
      if (entry_bound < b) entry_bound = b;
    }
  }
  int count() const { return static_cast<int>(vecs.size()); }
  Matrix<F> matrix() const {
    Matrix<F> m(count(), n);
    for (int i = 0; i < count(); ++i) m.set_row(i, vecs[i]);
    return m;
  }
};

// ---------------------------------------------------------------------------
// Minor search

struct MinorSearchOptions {
  int exhaustive_q_cap = 6;
  long exhaustive_combo_cap = 10'000'000;
};

template <class F>
struct MinorResult {
  std::vector<int> columns;
  F det{};
  Mag<F> abs_det{};
  bool exhaustive = true;  // false: greedy + local search, value is a lower bound
};

// Max-|det| q-column minor of a q x n matrix. Exhaustive within the caps,
// greedy column pivoting plus 2-swap local search beyond them.
template <class F>
MinorResult<F> best_minor(const Matrix<F>& m, const MinorSearchOptions& opt = {}) {
  const int q = m.rows(), n = m.cols();
  if (q > n) throw DimensionError("best_minor: q > n");
  MinorResult<F> best;
  if (q == 0) {
    best.det = F{1};
    best.abs_det = FieldTraits<F>::abs(best.det);
    return best;  // empty matrix convention
  }
  const bool exhaustive =
      q <= opt.exhaustive_q_cap &&
      combinations_count(n, q) <= opt.exhaustive_combo_cap;
  if (exhaustive) {
    bool first = true;
    for_each_combination(n, q, [&](const std::vector<int>& cols) {
      F d = determinant(m.select_columns(cols));
      auto a = FieldTraits<F>::abs(d);
      if (first || best.abs_det < a) {
        best.columns = cols;
        best.det = d;
        best.abs_det = a;
        first = false;
      }
    });
    best.exhaustive = true;
    return best;
  }
  // greedy: pick the column with the largest pivot in the eliminated residual
  Matrix<F> work = m;
  std::vector<int> chosen;
  std::vector<char> used(n, 0);
  for (int step = 0; step < q; ++step) {
    int best_col = -1;
    Mag<F> best_mag{};
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      auto a = FieldTraits<F>::abs(work(step, c));
      if (best_col < 0 || best_mag < a) {
        best_mag = a;
        best_col = c;
      }
    }
    chosen.push_back(best_col);
    used[best_col] = 1;
    if (!FieldTraits<F>::is_zero(work(step, best_col))) {
      for (int i = step + 1; i < q; ++i) {
        F factor = work(i, best_col) / work(step, best_col);
        for (int c = 0; c < n; ++c) work(i, c) -= factor * work(step, c);
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  F cur_det = determinant(m.select_columns(chosen));
  Mag<F> cur = FieldTraits<F>::abs(cur_det);
  bool improved = true;
  int rounds = 0;
  while (improved && rounds++ < 16) {
    improved = false;
    for (std::size_t a = 0; a < chosen.size() && !improved; ++a) {
      for (int c = 0; c < n && !improved; ++c) {
        if (used[c]) continue;
        std::vector<int> cand = chosen;
        cand[a] = c;
        std::sort(cand.begin(), cand.end());
        F d = determinant(m.select_columns(cand));
        auto mag = FieldTraits<F>::abs(d);
        if (cur < mag) {
          used[chosen[a]] = 0;
          used[c] = 1;
          chosen = cand;
          cur_det = d;
          cur = mag;
          improved = true;
        }
      }
    }
  }
  best.columns = chosen;
  best.det = cur_det;
  best.abs_det = cur;
  best.exhaustive = false;
  return best;
}

// Greedy maximal family of pairwise-disjoint q x q minors with |det| >= d.
template <class F>
std::vector<MinorResult<F>> greedy_disjoint_minors(const Matrix<F>& m, const Mag<F>& d,
                                                   const MinorSearchOptions& opt = {}) {
  const int q = m.rows(), n = m.cols();
  std::vector<MinorResult<F>> out;
  if (q == 0 || q > n) return out;
  std::vector<int> remaining(n);
  for (int c = 0; c < n; ++c) remaining[c] = c;
  while (static_cast<int>(remaining.size()) >= q) {
    Matrix<F> sub = m.select_columns(remaining);
    MinorResult<F> found = best_minor(sub, opt);
    if (found.abs_det < d || FieldTraits<F>::is_zero(found.det)) break;
    MinorResult<F> global = found;
    global.columns.clear();
    for (int c : found.columns) global.columns.push_back(remaining[c]);
    out.push_back(global);
    std::vector<int> next;
    std::size_t k = 0;
    for (int c : remaining) {
      if (k < found.columns.size() && c == remaining[found.columns[k]]) {
        ++k;
        continue;
      }
      next.push_back(c);
    }
    remaining.swap(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// eps-independence: three-way verdict with machine-checkable artifacts

template <class F>
struct DependenceWitness {
  std::vector<std::vector<F>> perturbed;
  Mag<F> cost{};          // sum of L1 changes
  std::vector<F> kernel;  // nonzero c with c * V' = 0
  std::string attack;     // which search produced it
};

template <class F>
struct IndependenceCertificate {
  // "disjoint-minors": margin = sum |det| / kappa over disjoint q x q minors.
  // "pair-exact" (q = 2, real fields): margin is the exact minimum cost over
  // the complete lambda-breakpoint parametrisation of pair dependences.
  std::string method = "disjoint-minors";
  std::vector<std::vector<int>> column_sets;  // pairwise disjoint
  std::vector<F> minor_dets;
  Mag<F> kappa{};   // (q-1)! (q+1)^{q-1}
  Mag<F> margin{};  // lower bound on the L1 cost of any dependence
  bool exhaustive_search = true;
};

template <class F>
struct IndependenceVerdict {
  enum class Kind { CertifiedIndependent, RefutedDependent, Unknown };
  Kind kind = Kind::Unknown;
  Mag<F> epsilon{};  // queried level
  std::optional<Mag<F>> certified_eps;  // margin / n
  std::optional<DependenceWitness<F>> witness;
  std::optional<IndependenceCertificate<F>> certificate;
};

namespace detail {

template <class F>
Mag<F> perturbation_kappa(int q) {
  // max cofactor modulus after clipping entries to q+1
  Mag<F> k{1};
  for (int i = 2; i <= q - 1; ++i) k *= Mag<F>(i);
  for (int i = 0; i < q - 1; ++i) k *= Mag<F>(q + 1);
  return k;
}

// Zero every coordinate where some perturbed entry exceeds q+1 in magnitude.
// Keeps linear dependence and never increases the cost.
template <class F>
void clip_witness(const VectorList<F>& input, DependenceWitness<F>& w) {
  const int q = input.count(), n = input.n;
  const Mag<F> bound{q + 1};
  for (int j = 0; j < n; ++j) {
    bool offending = false;
    for (int i = 0; i < q; ++i)
      if (bound < FieldTraits<F>::abs(w.perturbed[i][j])) {
        offending = true;
        break;
      }
    if (offending)
      for (int i = 0; i < q; ++i) w.perturbed[i][j] = F{};
  }
  Mag<F> cost{};
  for (int i = 0; i < q; ++i) cost += vec_l1_distance(input.vecs[i], w.perturbed[i]);
  w.cost = cost;
}

template <class F>
bool witness_kernel_ok(const DependenceWitness<F>& w) {
  if (w.kernel.empty()) return false;
  bool nonzero = false;
  for (const auto& c : w.kernel)
    if (!FieldTraits<F>::is_zero(c)) nonzero = true;
  if (!nonzero) return false;
  const std::size_t n = w.perturbed.front().size();
  for (std::size_t j = 0; j < n; ++j) {
    F acc{};
    for (std::size_t i = 0; i < w.perturbed.size(); ++i)
      acc += w.kernel[i] * w.perturbed[i][j];
    if (FieldTraits<F>::exact) {
      if (!FieldTraits<F>::is_zero(acc)) return false;
    } else if (mag_to_double(FieldTraits<F>::abs(acc)) > 1e-9) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

template <class F>
bool verify_dependence_witness(const VectorList<F>& input, const DependenceWitness<F>& w,
                               const Mag<F>& eps, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  const int q = input.count();
  if (static_cast<int>(w.perturbed.size()) != q) return fail("wrong vector count");
  Mag<F> cost{};
  for (int i = 0; i < q; ++i) {
    if (static_cast<int>(w.perturbed[i].size()) != input.n) return fail("wrong length");
    cost += vec_l1_distance(input.vecs[i], w.perturbed[i]);
  }
  Mag<F> allowed = eps * Mag<F>(input.n);
  if (allowed < cost) return fail("cost exceeds eps*n");
  const Mag<F> entry_cap{q + 1};
  for (const auto& row : w.perturbed)
    for (const auto& x : row)
      if (entry_cap < FieldTraits<F>::abs(x)) return fail("entry exceeds q+1");
  if (!detail::witness_kernel_ok(w)) return fail("kernel does not annihilate");
  return true;
}

template <class F>
struct PairAnalysis;
template <class F>
PairAnalysis<F> exact_pair_analysis(const VectorList<F>& input);

template <class F>
bool verify_independence_certificate(const VectorList<F>& input,
                                     const IndependenceCertificate<F>& cert,
                                     const Mag<F>& eps, std::string* why = nullptr) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  const int q = input.count();
  if (cert.method == "pair-exact") {
    if constexpr (std::is_same_v<F, Complex>) {
      return fail("pair-exact certificates are for ordered fields");
    } else {
      if (q != 2) return fail("pair-exact certificate with q != 2");
      auto pair = exact_pair_analysis(input);
      if (pair.min_cost < cert.margin) {
        if (FieldTraits<F>::exact) return fail("stored margin too optimistic");
        if (mag_to_double(cert.margin - pair.min_cost) > 1e-9)
          return fail("stored margin too optimistic");
      }
      if (!(eps * Mag<F>(input.n) < cert.margin))
        return fail("margin does not clear eps*n");
      return true;
    }
  }
  if (Mag<F>{1} < input.entry_bound) return fail("entry bound above 1");
  std::vector<char> used(input.n, 0);
  if (cert.column_sets.size() != cert.minor_dets.size()) return fail("shape mismatch");
  Matrix<F> m = input.matrix();
  Mag<F> total{};
  for (std::size_t k = 0; k < cert.column_sets.size(); ++k) {
    const auto& cols = cert.column_sets[k];
    if (static_cast<int>(cols.size()) != q) return fail("minor of wrong size");
    for (int c : cols) {
      if (c < 0 || c >= input.n || used[c]) return fail("column sets not disjoint");
      used[c] = 1;
    }
    F d = determinant(m.select_columns(cols));
    if (!(d == cert.minor_dets[k])) {
      if (FieldTraits<F>::exact) return fail("stored determinant mismatch");
      if (mag_to_double(FieldTraits<F>::abs(d - cert.minor_dets[k])) > 1e-9)
        return fail("stored determinant mismatch");
    }
    total += FieldTraits<F>::abs(d);
  }
  Mag<F> kappa = detail::perturbation_kappa<F>(q);
  Mag<F> margin = total / kappa;
  if (margin < cert.margin) return fail("stored margin too optimistic");
  if (!(eps * Mag<F>(input.n) < cert.margin)) return fail("margin does not clear eps*n");
  return true;
}

// Build the best dependence witness of the form "row `other` becomes
// lambda times row `base`", choosing per coordinate whether to move the base
// or the other entry.
template <class F>
DependenceWitness<F> pair_alignment_witness(const VectorList<F>& input, const F& lambda,
                                            int base, int other) {
  DependenceWitness<F> w;
  w.perturbed = input.vecs;
  const int n = input.n;
  for (int j = 0; j < n; ++j) {
    const F& a = input.vecs[base][j];
    const F& b = input.vecs[other][j];
    if (FieldTraits<F>::is_zero(lambda)) {
      w.perturbed[other][j] = F{};
      continue;
    }
    F anchor = b / lambda;  // keep b, move a onto b/lambda
    if (FieldTraits<F>::abs(b - lambda * a) < FieldTraits<F>::abs(a - anchor)) {
      w.perturbed[other][j] = lambda * a;
    } else {
      w.perturbed[base][j] = anchor;
    }
  }
  w.kernel.assign(2, F{});
  w.kernel[base] = lambda;
  w.kernel[other] = F{-1};
  w.attack = "pair-align";
  Mag<F> cost{};
  for (int i = 0; i < 2; ++i) cost += vec_l1_distance(input.vecs[i], w.perturbed[i]);
  w.cost = cost;
  return w;
}

template <class F>
struct PairAnalysis {
  Mag<F> min_cost{};
  DependenceWitness<F> witness;  // attains min_cost (before clipping)
};

// Exact minimum dependence cost for two vectors over an ordered field. Any
// dependent pair is v2' = lambda v1' (or v1' = 0); for fixed lambda the
// per-coordinate optimum is min(|v2_j - lambda v1_j|, |v1_j - v2_j/lambda|),
// and the global optimum over lambda sits at a ratio breakpoint with
// |lambda| <= 1 (the |lambda| > 1 half is the swapped direction) or at
// lambda in {0, +-1}.
template <class F>
PairAnalysis<F> exact_pair_analysis(const VectorList<F>& input) {
  static_assert(!std::is_same_v<F, Complex>,
                "breakpoint completeness holds for ordered fields only");
  if (input.count() != 2) throw DimensionError("exact_pair_analysis: need q = 2");
  PairAnalysis<F> out;
  bool first = true;
  auto consider = [&](const F& lambda, int base, int other) {
    auto w = pair_alignment_witness(input, lambda, base, other);
    if (first || w.cost < out.min_cost) {
      out.min_cost = w.cost;
      out.witness = std::move(w);
      first = false;
    }
  };
  for (int base = 0; base < 2; ++base) {
    const int other = 1 - base;
    consider(F{}, base, other);
    consider(F{1}, base, other);
    consider(F{-1}, base, other);
    for (int j = 0; j < input.n; ++j) {
      if (FieldTraits<F>::is_zero(input.vecs[base][j])) continue;
      F ratio = input.vecs[other][j] / input.vecs[base][j];
      if (!(Mag<F>{1} < FieldTraits<F>::abs(ratio))) consider(ratio, base, other);
    }
  }
  return out;
}

// Decide eps-independence. Sound in both directions: a refutation carries a
// re-checkable witness, a certification carries either disjoint minors whose
// summed determinants bound the cost of any dependence from below, or the
// exact q=2 breakpoint analysis.
template <class F>
IndependenceVerdict<F> check_eps_independence(const VectorList<F>& input, const Mag<F>& eps,
                                              const MinorSearchOptions& opt = {}) {
  IndependenceVerdict<F> verdict;
  verdict.epsilon = eps;
  const int q = input.count(), n = input.n;
  if (q == 0) {
    // the empty collection is independent at every level
    verdict.kind = IndependenceVerdict<F>::Kind::CertifiedIndependent;
    verdict.certified_eps = Mag<F>{1};
    verdict.certificate = IndependenceCertificate<F>{};
    verdict.certificate->kappa = Mag<F>{1};
    verdict.certificate->margin = Mag<F>(n) + Mag<F>{1};
    return verdict;
  }

  Matrix<F> m = input.matrix();
  std::optional<DependenceWitness<F>> best;

  auto consider = [&](DependenceWitness<F> w) {
    detail::clip_witness(input, w);
    if (!detail::witness_kernel_ok(w)) return;
    if (!best || w.cost < best->cost) best = std::move(w);
  };

  // exact decision for pairs over the ordered fields
  if constexpr (!std::is_same_v<F, Complex>) {
    if (q == 2) {
      auto pair = exact_pair_analysis(input);
      if (!(eps * Mag<F>(n) < pair.min_cost)) {
        consider(std::move(pair.witness));
        verdict.kind = IndependenceVerdict<F>::Kind::RefutedDependent;
        verdict.witness = std::move(best);
        return verdict;
      }
      IndependenceCertificate<F> cert;
      cert.method = "pair-exact";
      cert.kappa = Mag<F>{1};
      cert.margin = pair.min_cost;
      verdict.kind = IndependenceVerdict<F>::Kind::CertifiedIndependent;
      verdict.certified_eps = pair.min_cost / Mag<F>(n);
      verdict.certificate = std::move(cert);
      return verdict;
    }
  }

  const int rank_m = rank(m);

  // already linearly dependent: zero-cost witness
  if (rank_m < q) {
    DependenceWitness<F> w;
    w.perturbed = input.vecs;
    w.kernel = left_kernel_vector(m);
    w.attack = "exact-dependence";
    consider(std::move(w));
  }

  // zero out the cheapest row
  {
    int arg = 0;
    Mag<F> c = vec_l1(input.vecs[0]);
    for (int i = 1; i < q; ++i) {
      auto ci = vec_l1(input.vecs[i]);
      if (ci < c) {
        c = ci;
        arg = i;
      }
    }
    DependenceWitness<F> w;
    w.perturbed = input.vecs;
    w.perturbed[arg].assign(n, F{});
    w.kernel.assign(q, F{});
    w.kernel[arg] = F{1};
    w.attack = "zero-row";
    consider(std::move(w));
  }

  // complex pairs: the alignment attack still refutes, just without the
  // completeness claim
  if constexpr (std::is_same_v<F, Complex>) {
    if (q == 2) {
      for (int base = 0; base < 2; ++base) {
        const int other = 1 - base;
        consider(pair_alignment_witness(input, F{}, base, other));
        consider(pair_alignment_witness(input, F{1}, base, other));
        consider(pair_alignment_witness(input, F{-1}, base, other));
        for (int j = 0; j < n; ++j) {
          if (FieldTraits<F>::is_zero(input.vecs[base][j])) continue;
          F ratio = input.vecs[other][j] / input.vecs[base][j];
          if (!(Mag<F>{1} < FieldTraits<F>::abs(ratio)))
            consider(pair_alignment_witness(input, ratio, base, other));
        }
      }
    }
  }

  // minor-based attack: pin a (q-1)-minor, rewrite the left-out row so every
  // extended minor vanishes
  if (q >= 2 && rank_m == q) {
    for (int leave = 0; leave < q; ++leave) {
      std::vector<int> others;
      for (int i = 0; i < q; ++i)
        if (i != leave) others.push_back(i);
      std::vector<int> all_cols(n);
      for (int c = 0; c < n; ++c) all_cols[c] = c;
      Matrix<F> rest = m.submatrix(others, all_cols);
      MinorResult<F> anchor = best_minor(rest, opt);
      if (FieldTraits<F>::is_zero(anchor.det)) continue;
      DependenceWitness<F> w;
      w.perturbed = input.vecs;
      std::vector<char> in_anchor(n, 0);
      for (int c : anchor.columns) in_anchor[c] = 1;
      std::vector<int> rows_ext = others;
      rows_ext.push_back(leave);
      for (int j = 0; j < n; ++j) {
        if (in_anchor[j]) continue;
        std::vector<int> cols_ext = anchor.columns;
        cols_ext.push_back(j);
        F dj = determinant(m.submatrix(rows_ext, cols_ext));
        w.perturbed[leave][j] -= dj / anchor.det;
      }
      Matrix<F> pm(q, n);
      for (int i = 0; i < q; ++i) pm.set_row(i, w.perturbed[i]);
      w.kernel = left_kernel_vector(pm);
      w.attack = "minor-anchor";
      consider(std::move(w));
    }
  }

  if (best && !(eps * Mag<F>(n) < best->cost)) {
    verdict.kind = IndependenceVerdict<F>::Kind::RefutedDependent;
    verdict.witness = std::move(best);
    return verdict;
  }

  // certification path requires ||.||_inf <= 1
  if (!(Mag<F>{1} < input.entry_bound)) {
    const Mag<F> kappa = detail::perturbation_kappa<F>(q);
    // Hadamard ceiling: disjoint minors can never push the margin above
    // (n/q) q^{q/2} B^q / kappa, so skip the search when that cannot clear
    // eps*n (the double slack only risks a needless search, not soundness)
    const double ceiling = static_cast<double>(n) / q *
                           std::pow(static_cast<double>(q), q / 2.0) *
                           std::pow(mag_to_double(input.entry_bound), q) /
                           mag_to_double(kappa) * 1.0000001;
    if (ceiling <= mag_to_double(eps) * n) {
      verdict.kind = IndependenceVerdict<F>::Kind::Unknown;
      return verdict;
    }
    IndependenceCertificate<F> cert;
    cert.kappa = kappa;

    const bool exhaustive = q <= opt.exhaustive_q_cap &&
                            combinations_count(n, q) <= opt.exhaustive_combo_cap;
    if (exhaustive) {
      // all minors sorted by |det|, then greedy disjoint pick; the best
      // prefix maximises the margin
      std::vector<std::pair<Mag<F>, std::vector<int>>> minors;
      for_each_combination(n, q, [&](const std::vector<int>& cols) {
        F d = determinant(m.select_columns(cols));
        if (FieldTraits<F>::is_zero(d)) return;
        minors.emplace_back(FieldTraits<F>::abs(d), cols);
      });
      std::sort(minors.begin(), minors.end(),
                [](const auto& a, const auto& b) { return b.first < a.first; });
      std::vector<char> used(n, 0);
      Mag<F> total{};
      for (const auto& [mag, cols] : minors) {
        bool clash = false;
        for (int c : cols)
          if (used[c]) {
            clash = true;
            break;
          }
        if (clash) continue;
        for (int c : cols) used[c] = 1;
        cert.column_sets.push_back(cols);
        cert.minor_dets.push_back(determinant(m.select_columns(cols)));
        total += mag;
      }
      cert.margin = total / kappa;
      cert.exhaustive_search = true;
    } else {
      Mag<F> total{};
      for (const auto& found : greedy_disjoint_minors(m, Mag<F>{}, opt)) {
        cert.column_sets.push_back(found.columns);
        cert.minor_dets.push_back(found.det);
        total += found.abs_det;
      }
      cert.margin = total / kappa;
      cert.exhaustive_search = false;
    }

    if (eps * Mag<F>(n) < cert.margin) {
      verdict.kind = IndependenceVerdict<F>::Kind::CertifiedIndependent;
      verdict.certified_eps = cert.margin / Mag<F>(n);
      verdict.certificate = std::move(cert);
      return verdict;
    }
  }

  verdict.kind = IndependenceVerdict<F>::Kind::Unknown;
  return verdict;
}

// Seeded perturbation attacks against a certified verdict; returns true if
// any attack produced a dependence within budget (must never happen).
template <class F>
bool random_attack_breaks(const VectorList<F>& input, const Mag<F>& eps, int attempts,
                          std::uint64_t seed);

// ---------------------------------------------------------------------------
// delta-non-degeneracy via a sphere net

struct NonDegeneracyVerdict {
  enum class Kind { Certified, Refuted };
  Kind kind = Kind::Certified;
  double certified_level = 0.0;            // delta/3 when certified
  std::vector<double> witness_direction;   // refuting unit vector
  long witness_columns = 0;                // columns meeting the refuted level
  double refuted_level = 0.0;
  double net_spacing = 0.0;
  long net_size = 0;
};

// Covering of the unit sphere in R^dim with radius <= eps.
std::vector<std::vector<double>> sphere_net(int dim, double eps);

// delta_refute < 0 means "refute at delta itself"; net_eps < 0 uses the
// delta/(2r) spacing that justifies the delta/3 certificate.
NonDegeneracyVerdict check_non_degenerate(const Matrix<double>& m, double delta,
                                          double delta_refute = -1.0, int r_cap = 4,
                                          double net_eps = -1.0);

// phase-sampled reduction for complex matrices: fraction of sampled phases
// theta whose real projection Re(e^{i theta} M) is certified
struct PhaseNonDegeneracy {
  double success_fraction = 0.0;
  int samples = 0;
  NonDegeneracyVerdict best;
};
PhaseNonDegeneracy check_non_degenerate_phase_sampled(const Matrix<Complex>& m,
                                                      double delta, int samples,
                                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// basis selection and span extension

template <class F>
struct BasisSelection {
  int q = 0;
  std::vector<int> chosen;
  std::vector<std::vector<F>> basis;
  std::vector<Mag<F>> levels;  // independence level certified at each size
  bool hypothesis_failed = false;  // q reached r
  std::optional<IndependenceCertificate<F>> r_certificate;
  std::vector<std::vector<F>> approximations;  // v'_i in span(basis)
  std::vector<Mag<F>> residuals;               // ||v_i - v'_i||_1
};

// Unique v in span(rows of W) with v_I = prescribed; M_I must be invertible.
template <class F>
std::vector<F> extend_in_span(const std::vector<std::vector<F>>& w,
                              const std::vector<int>& I,
                              const std::vector<F>& prescribed) {
  const int q = static_cast<int>(w.size());
  if (static_cast<int>(I.size()) != q || static_cast<int>(prescribed.size()) != q)
    throw DimensionError("extend_in_span: |I| and |prescribed| must equal q");
  if (q == 0) return std::vector<F>{};
  const int n = static_cast<int>(w.front().size());
  Matrix<F> m_i(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m_i(i, j) = w[i][I[j]];
  std::vector<F> lambda = solve_row_system(m_i, prescribed);  // lambda * M_I = prescribed
  std::vector<F> v(n, F{});
  for (int i = 0; i < q; ++i) {
    if (FieldTraits<F>::is_zero(lambda[i])) continue;
    for (int j = 0; j < n; ++j) v[j] += lambda[i] * w[i][j];
  }
  return v;
}

// L2 projection of v onto span(rows of W) through the normal equations;
// exact over the rationals.
template <class F>
std::vector<F> project_onto_span(const std::vector<std::vector<F>>& w,
                                 const std::vector<F>& v) {
  const int q = static_cast<int>(w.size());
  const int n = static_cast<int>(v.size());
  if (q == 0) return std::vector<F>(n, F{});
  Matrix<F> gram(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) gram(i, j) = inner(w[j], w[i]);
  std::vector<F> rhs(q);
  for (int i = 0; i < q; ++i) rhs[i] = inner(v, w[i]);
  std::vector<F> lambda = solve_row_system(gram.transposed(), rhs);
  std::vector<F> out(n, F{});
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < n; ++j) out[j] += lambda[i] * w[i][j];
  return out;
}

struct SelectBasisOptions {
  MinorSearchOptions minors;
  bool build_approximations = true;
};

// Greedy maximal independent sub-list at the given level ladder. levels[k]
// is the certification level required of a subset of size k+1.
template <class F>
BasisSelection<F> select_basis_rows_with_levels(const std::vector<std::vector<F>>& vecs,
                                                const std::vector<Mag<F>>& levels, int r,
                                                const SelectBasisOptions& opt = {});

// Ladder from the asymptotic prescription: level for size k is eps^{(6r)^k}.
template <class F>
std::vector<Mag<F>> independence_ladder(const Mag<F>& eps, int r) {
  std::vector<Mag<F>> levels;
  for (int k = 1; k <= r; ++k) {
    long long e = 1;
    for (int t = 0; t < k; ++t) e *= 6LL * r;
    Mag<F> lv{1};
    for (long long t = 0; t < e; ++t) lv *= eps;
    levels.push_back(lv);
  }
  return levels;
}

template <class F>
BasisSelection<F> select_basis_rows(const std::vector<std::vector<F>>& vecs,
                                    const Mag<F>& eps, int r,
                                    const SelectBasisOptions& opt = {}) {
  return select_basis_rows_with_levels(vecs, independence_ladder<F>(eps, r), r, opt);
}

template <class F>
BasisSelection<F> select_basis_rows_with_levels(const std::vector<std::vector<F>>& vecs,
                                                const std::vector<Mag<F>>& levels, int r,
                                                const SelectBasisOptions& opt) {
  if (static_cast<int>(levels.size()) < r)
    throw DimensionError("select_basis_rows: need a level for each size up to r");
  BasisSelection<F> sel;
  const int k = static_cast<int>(vecs.size());
  for (int i = 0; i < k && sel.q < r; ++i) {
    std::vector<std::vector<F>> cand = sel.basis;
    cand.push_back(vecs[i]);
    auto verdict =
        check_eps_independence(VectorList<F>(cand), levels[sel.q], opt.minors);
    if (verdict.kind == IndependenceVerdict<F>::Kind::CertifiedIndependent) {
      sel.basis = std::move(cand);
      sel.chosen.push_back(i);
      sel.levels.push_back(levels[sel.q]);
      ++sel.q;
      if (sel.q == r) {
        sel.hypothesis_failed = true;
        sel.r_certificate = std::move(verdict.certificate);
        return sel;
      }
    }
  }
  if (!opt.build_approximations) return sel;

  sel.approximations.resize(k);
  sel.residuals.resize(k);
  const int n = k > 0 ? static_cast<int>(vecs.front().size()) : 0;
  const Mag<F> alpha = sel.q > 0 ? sel.levels.back() : Mag<F>{1};
  for (int i = 0; i < k; ++i) {
    if (sel.q == 0) {
      sel.approximations[i].assign(n, F{});
      sel.residuals[i] = vec_l1(vecs[i]);
      continue;
    }
    bool is_basis = false;
    for (int c : sel.chosen)
      if (c == i) is_basis = true;
    if (is_basis) {
      sel.approximations[i] = vecs[i];
      sel.residuals[i] = Mag<F>{};
      continue;
    }
    std::vector<F> proj = project_onto_span(sel.basis, vecs[i]);
    Mag<F> eta_n = vec_l1_distance(vecs[i], proj);  // eta * n
    if (FieldTraits<F>::exact ? eta_n == Mag<F>{} : mag_to_double(eta_n) < 1e-14) {
      sel.approximations[i] = std::move(proj);
      sel.residuals[i] = Mag<F>{};
      continue;
    }
    // re-anchor: drop coordinates where the projection is far off, pick a
    // sturdy minor among the rest, interpolate v there
    Mag<F> threshold = Mag<F>{2 * sel.q} * eta_n / (alpha * Mag<F>(n));
    std::vector<std::vector<F>> masked = sel.basis;
    for (int j = 0; j < n; ++j) {
      if (!(FieldTraits<F>::abs(vecs[i][j] - proj[j]) < threshold))
        for (int b = 0; b < sel.q; ++b) masked[b][j] = F{};
    }
    Matrix<F> masked_m(sel.q, n);
    for (int b = 0; b < sel.q; ++b) masked_m.set_row(b, masked[b]);
    MinorResult<F> anchor = best_minor(masked_m, opt.minors);
    if (FieldTraits<F>::is_zero(anchor.det)) {
      Matrix<F> full_m(sel.q, n);
      for (int b = 0; b < sel.q; ++b) full_m.set_row(b, sel.basis[b]);
      anchor = best_minor(full_m, opt.minors);
    }
    std::vector<F> prescribed(sel.q);
    for (int b = 0; b < sel.q; ++b) prescribed[b] = vecs[i][anchor.columns[b]];
    sel.approximations[i] = extend_in_span(sel.basis, anchor.columns, prescribed);
    sel.residuals[i] = vec_l1_distance(vecs[i], sel.approximations[i]);
  }
  return sel;
}

// ---------------------------------------------------------------------------
// sampled least L1 image with the adjugate lower bound |det B| / q!

struct LeastL1Result {
  double sampled_min = 0.0;
  double lower_bound = 0.0;  // |det B| / q!
  bool violated = false;     // sampled_min < lower_bound (must never fire)
};

template <class F>
LeastL1Result least_l1_image(const Matrix<F>& b, int samples, std::uint64_t seed);

}  // namespace qlo
