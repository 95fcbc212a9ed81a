#pragma once

#include "rqv/presentation.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace rqv {

/// A point of a moduli presentation: one matrix per schema generator.
struct Representation {
  CurveTopology topology;
  Structure structure = Structure::Real;
  int n = 1;
  int k = 0;
  GeneratorSchema schema;
  std::vector<Matrix> matrices;

  const Matrix& matrix(const std::string& label) const;
  Matrix& matrix(const std::string& label);
  /// Membership defect of every generator in its structure group.
  double membership_defect() const;
  void validate(double tol = 1e-8) const;
};

Representation identity_representation(const CurveTopology& topology, Structure structure,
                                       int n, int k);
Representation random_representation(const CurveTopology& topology, Structure structure,
                                     int n, int k, Rng& rng);

/// Per-vertex gauge transformation (one factor per gauge vertex).
struct GaugeElement {
  std::vector<Matrix> factors;
};

GaugeElement identity_gauge(const Representation& rep);
GaugeElement random_gauge(const Representation& rep, Rng& rng);

/// Graded evaluation of the defining relator at this point.
ExtendedUnitaryElement evaluate_relator(const Representation& rep);

/// Squared Frobenius distance between the evaluated relator and the central
/// target exp(i pi k/n) I.
double residual(const Representation& rep);

/// Euclidean gradient of the residual, one matrix per generator.
std::vector<Matrix> euclidean_gradient(const Representation& rep);

/// Projection of the Euclidean gradient onto the product tangent space.
std::vector<Matrix> riemannian_gradient(const Representation& rep);

struct SolveOptions {
  int max_iters = 2000;
  double tol = 1e-10;
  int starts = 10;
  bool polish = true;
  int threads = 0;  // 0 = hardware default
};

struct SolveResult {
  Representation rep;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

/// Multistart Riemannian descent on the relator residual. Deterministic in
/// (seed, options); per-start seeds are seed XOR start index, results merged
/// by lowest residual with ties broken by start index.
SolveResult solve(const CurveTopology& topology, Structure structure, int n, int k,
                  std::uint64_t seed, const SolveOptions& options = {});

/// Single descent from the given point; only generators with free_mask set
/// are moved. Returns the final residual.
double descend(Representation& rep, const std::vector<bool>& free_mask,
               const SolveOptions& options, int* iterations = nullptr,
               std::vector<double>* history = nullptr);

Representation apply_gauge(const GaugeElement& g, const Representation& rep);

struct AlignResult {
  GaugeElement gauge;
  double distance = 0.0;
};

/// Gauge element approximately minimizing the squared distance between
/// g . rep1 and rep2; never worse than the identity gauge.
AlignResult orbit_align(const Representation& rep1, const Representation& rep2,
                        int extra_inits = 6, std::uint64_t seed = 0x5eedULL);

/// Traces of all gauge-closed words of length <= max_len over the schema
/// generators, in a fixed canonical enumeration.
std::vector<cxd> trace_invariants(const Representation& rep, int max_len);

/// Local dimension of the moduli space at a converged point: tangent
/// dimension minus the ranks of the relator and gauge-action differentials.
int estimate_moduli_dimension(const Representation& rep, double rank_rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// Word-residual calculus, shared by the solver and the extension checks.
// A term contributes ||evaluate_word(word) - target||^2.

struct WordResidualTerm {
  TwistedWord word;
  Matrix target;
  double weight = 1.0;
};

struct WordObjective {
  std::vector<int> epsilons;  // grading of the generator list
  Structure structure = Structure::Real;
  int n = 1;
  std::vector<WordResidualTerm> terms;

  double value(const std::vector<Matrix>& mats) const;
  /// Euclidean gradient with respect to every generator matrix.
  std::vector<Matrix> egrad(const std::vector<Matrix>& mats) const;
  /// Directional derivative of one term's word value along V at `generator`.
  Matrix directional(int term, const std::vector<Matrix>& mats, int generator,
                     const Matrix& v) const;
};

struct MinimizeOptions {
  int max_iters = 2000;
  double target = 0.0;       // stop when value <= target
  double grad_tol = 1e-13;
  int stall_window = 30;
};

/// Armijo-backtracking Riemannian gradient descent with a Barzilai-Borwein
/// kick when progress stalls. Matrices move within their group kinds.
double riemannian_minimize(const std::function<double(const std::vector<Matrix>&)>& value,
                           const std::function<std::vector<Matrix>(const std::vector<Matrix>&)>& egrad,
                           const std::vector<GroupKind>& kinds, std::vector<Matrix>& mats,
                           const std::vector<bool>& free_mask, const MinimizeOptions& options,
                           int* iterations = nullptr, std::vector<double>* history = nullptr);

/// Gauss-Newton refinement for a stacked least-squares map; `jacobian`
/// returns the matrix of the differential with respect to the tangent bases
/// of the free generators, in basis order.
double gauss_newton(const std::function<Eigen::VectorXd(const std::vector<Matrix>&)>& residual_vec,
                    const std::function<Eigen::MatrixXd(const std::vector<Matrix>&)>& jacobian,
                    const std::vector<GroupKind>& kinds, std::vector<Matrix>& mats,
                    const std::vector<bool>& free_mask, int max_steps = 25,
                    double target = 1e-28);

/// Gauss-Newton polish of the relator residual at an approximate solution.
double polish(Representation& rep, const std::vector<bool>& free_mask, int max_steps = 25);

/// Orthonormal tangent directions of the masked product manifold, as
/// (generator, direction) pairs in a fixed order.
std::vector<std::pair<int, Matrix>> product_tangent_basis(const std::vector<GroupKind>& kinds,
                                                          const std::vector<Matrix>& mats,
                                                          const std::vector<bool>& mask);

Eigen::VectorXd realify(const Matrix& m);

struct ConnectednessReport {
  int converged_starts = 0;
  int pairs_checked = 0;
  int pairs_joined = 0;
  double worst_path_residual = 0.0;
  std::vector<std::string> flagged;
};

/// Empirical probe: tries to join pairs of converged multistart solutions by
/// residual-bounded paths (geodesic interpolation with on-variety
/// relaxation). A report, not a certificate.
ConnectednessReport connectedness_probe(const CurveTopology& topology, Structure structure,
                                        int n, int k, std::uint64_t seed, int starts = 10,
                                        int waypoints = 9, double bound = 1e-4);

}  // namespace rqv
