#pragma once

#include <vector>

namespace qlo {

// C(n, q) saturated at one billion; callers only compare against caps
inline long combinations_count(int n, int q) {
  long r = 1;
  for (int i = 1; i <= q; ++i) {
    r = r * (n - q + i) / i;
    if (r < 0 || r > 1'000'000'000L) return 1'000'000'000L;
  }
  return r;
}

// visits q-subsets of {0..n-1} in lexicographic order
template <class Fn>
void for_each_combination(int n, int q, Fn&& fn) {
  if (q < 0 || q > n) return;
  std::vector<int> idx(q);
  for (int i = 0; i < q; ++i) idx[i] = i;
  for (;;) {
    fn(const_cast<const std::vector<int>&>(idx));
    int i = q - 1;
    while (i >= 0 && idx[i] == n - q + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace qlo
