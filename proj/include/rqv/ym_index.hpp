#pragma once

#include <stdexcept>

namespace rqv {

/// Destabilizing subbundle data at a non-minimal critical point: a rank-m
/// degree-l subbundle of slope exceeding that of the ambient (n, k) bundle
/// on a genus-g curve.
struct DestabilizingDatum {
  int m = 1;
  int l = 1;
  int n = 2;
  int k = 0;
  int g = 2;

  void validate() const;
};

/// Riemann-Roch count of negative directions:
/// m(n-m)(g-1) + l n - k m.
int index_value(const DestabilizingDatum& d);

/// Minimum of index_value over all destabilizing (m, l); the index grows by
/// n with each unit of l, so only the smallest admissible l per m matters.
/// Always at least 1 + (n-1)(g-1).
int min_index(int n, int k, int g);

/// Dimension below which the inclusion of the minima induces isomorphisms
/// on homotopy and homology: (n-1)(g-1).
int morse_iso_range(int n, int g);

}  // namespace rqv
