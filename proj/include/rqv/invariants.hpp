#pragma once

#include "rqv/solver.hpp"

#include <optional>

namespace rqv {

/// Discrete classification data of a real or quaternionic bundle.
struct TopologicalClass {
  int n = 1;
  int k = 0;
  std::vector<int> w1;  // one bit per real circle; empty when r = 0
  Structure structure = Structure::Real;
};

/// Whether the class (n, k, w1) occurs on the given curve:
/// real with real points: k = sum(w1) mod 2; real without: k even;
/// quaternionic: even rank when real points exist, and k + n(g-1) even.
bool realizable(const CurveTopology& topology, Structure structure, int n, int k,
                const std::optional<std::vector<int>>& w1 = std::nullopt);

/// Like realizable, but quantified over all admissible w1 vectors (what a
/// solver run can hope for when no w1 is prescribed).
bool realizable_some_w1(const CurveTopology& topology, Structure structure, int n, int k);

/// Name of the violated parity rule, empty when realizable.
std::string obstruction_reason(const CurveTopology& topology, Structure structure, int n, int k,
                               const std::optional<std::vector<int>>& w1 = std::nullopt);

/// First Stiefel-Whitney classes of the fixed real subbundle, one bit per
/// real circle, read off as the determinant signs of the orthogonal
/// boundary holonomies.
std::vector<int> stiefel_whitney(const Representation& rep);

/// Complex dimension of the joint commutant of the even-grade generator
/// images together with the pairwise products of odd-grade ones; 1 exactly
/// when that family is irreducible.
int pi1_commutant_dimension(const Representation& rep, double rel_tol = 1e-8);

/// Real dimension of {X : X commutes with even-grade images and
/// X M = M conj(X) for odd-grade ones}; 1 characterizes irreducibility of
/// the extended representation.
int twisted_commutant_dimension(const Representation& rep, double rel_tol = 1e-8);

struct ExtensionCompatibility {
  Matrix c_matrix;            // quotient of the two extensions on odd words
  bool constant = false;      // independent of the chosen odd-grade word
  bool commutes = false;      // commutes with the even-grade images
  cxd c_cbar = 0.0;           // c * conj(c) for the scalar part of C
  double constancy_defect = 0.0;
  double commutation_defect = 0.0;
};

/// Compares two extensions sharing the even-grade assignment by the ratio
/// C(x) = rho_hat(x)^-1 rho_tilde(x) over the odd generators and a sample of
/// random odd-grade words.
ExtensionCompatibility extension_compatibility(const Representation& rep_hat,
                                               const Representation& rep_tilde,
                                               int sample_words = 10,
                                               std::uint64_t seed = 0x11dULL);

/// Best objective value over `starts` attempts to build a quaternionic
/// extension with the same underlying even-grade representation (matching
/// conjugation action and odd-pair products) as the given real one. Bounded
/// away from zero when the underlying representation is irreducible.
double extension_obstruction(const Representation& real_rep, int starts = 50,
                             std::uint64_t seed = 0x0b57ULL, int max_iters = 1500);

}  // namespace rqv
