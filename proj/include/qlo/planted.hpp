#pragma once

#include "qlo/symlowrank.hpp"

namespace qlo {

// Seeded corpus instances: a symmetric +-1 matrix of rank 1 or 2 with a
// fraction of its off-diagonal entries zeroed in symmetric pairs.
struct PlantedInstance {
  Matrix<Rational> A;        // corrupted matrix, entries in {-1, 0, 1}
  Matrix<Rational> planted;  // the clean low-rank matrix
  int rank = 1;
  long corrupted_pairs = 0;
  Rational corruption_mass;  // ||A - planted||_1 = 2 * corrupted_pairs
};

PlantedInstance planted_low_rank(int n, int rank, double corruption_rate,
                                 std::uint64_t seed);

// Stage thresholds that behave at n ~ 30..40 (the asymptotic schedule
// collapses there); chosen from the corpus signal/noise scales.
PipelineParams<Rational> desk_scale_params(int planted_rank);

}  // namespace qlo
