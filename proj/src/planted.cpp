#include "qlo/planted.hpp"

#include "qlo/combinatorics.hpp"

namespace qlo {

PlantedInstance planted_low_rank(int n, int rank, double corruption_rate,
                                 std::uint64_t seed) {
  if (rank != 1 && rank != 2) throw ConfigError("planted_low_rank: rank must be 1 or 2");
  Rng rng(seed);
  PlantedInstance inst;
  inst.rank = rank;

  std::vector<int> u(n), block(n, 1);
  for (auto& x : u) x = rng.coin() ? 1 : -1;
  if (rank == 2) {
    // balanced-ish block split keeps the two row directions far apart
    int minority = 0;
    do {
      minority = 0;
      for (auto& b : block) {
        b = rng.coin() ? 1 : -1;
        if (b < 0) ++minority;
      }
    } while (minority < n / 3 || minority > n - n / 3);
  }

  inst.planted = Matrix<Rational>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int sign = u[i] * u[j];
      if (rank == 2 && block[i] < 0 && block[j] < 0) sign = -sign;
      inst.planted(i, j) = Rational(sign);
    }

  inst.A = inst.planted;
  const long pairs = std::lround(corruption_rate * n * n / 2.0);
  long placed = 0;
  while (placed < pairs) {
    const int i = static_cast<int>(rng.below(n));
    const int j = static_cast<int>(rng.below(n));
    if (i == j) continue;
    if (FieldTraits<Rational>::is_zero(inst.A(i, j))) continue;
    inst.A(i, j) = Rational(0);
    inst.A(j, i) = Rational(0);
    ++placed;
  }
  inst.corrupted_pairs = placed;
  inst.corruption_mass = inst.planted.l1_distance(inst.A);
  return inst;
}

PipelineParams<Rational> desk_scale_params(int planted_rank) {
  PipelineParams<Rational> p;
  if (planted_rank == 1) {
    p.r = 2;
    p.tuple_alpha = make_rational(2, 5);
    p.delta = make_rational(1, 10);
    p.basis_levels = {make_rational(7, 10), make_rational(2, 5)};
    p.column_cut = make_rational(1, 5);
    p.graph_cut = make_rational(6, 25);
    p.minor_floor = make_rational(7, 40);
  } else {
    p.r = 3;
    p.tuple_alpha = make_rational(2, 5);
    p.delta = make_rational(1, 10);
    p.basis_levels = {make_rational(7, 10), make_rational(3, 10), make_rational(1, 10)};
    p.column_cut = make_rational(1, 5);
    p.graph_cut = make_rational(3, 10);
    p.minor_floor = make_rational(1, 2);
    p.minors.exhaustive_combo_cap = 400;  // heuristic anchors keep the sweep fast
  }
  return p;
}

}  // namespace qlo
