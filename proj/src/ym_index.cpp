#include "rqv/ym_index.hpp"

#include <limits>

namespace rqv {

namespace {

// Floor division for possibly negative numerators.
int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void DestabilizingDatum::validate() const {
  if (n < 2) throw std::invalid_argument("ambient rank must be at least 2");
  if (m < 1 || m >= n) throw std::invalid_argument("subbundle rank must satisfy 1 <= m < n");
  if (g < 2) throw std::invalid_argument("genus must be at least 2");
  if (static_cast<long long>(l) * n <= static_cast<long long>(k) * m)
    throw std::invalid_argument("subbundle must destabilize: l n > k m");
}

int index_value(const DestabilizingDatum& d) {
  d.validate();
  return d.m * (d.n - d.m) * (d.g - 1) + d.l * d.n - d.k * d.m;
}

int min_index(int n, int k, int g) {
  if (n < 2) throw std::invalid_argument("min_index needs rank at least 2");
  if (g < 2) throw std::invalid_argument("min_index needs genus at least 2");
  int best = std::numeric_limits<int>::max();
  for (int m = 1; m < n; ++m) {
    const int l = floor_div(k * m, n) + 1;  // smallest l with l n > k m
    best = std::min(best, index_value({m, l, n, k, g}));
  }
  return best;
}

int morse_iso_range(int n, int g) {
  if (n < 2 || g < 2) throw std::invalid_argument("morse_iso_range needs n, g >= 2");
  return (n - 1) * (g - 1);
}

}  // namespace rqv
