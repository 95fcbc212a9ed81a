#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rqv {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Thrown when an operation requires a state the caller has not established
/// (e.g. a converged representation).
struct invalid_state : std::logic_error {
  using std::logic_error::logic_error;
};

/// Deterministic random source. Gaussian deviates come from an explicit
/// Box-Muller transform so that streams are identical across standard
/// libraries and platforms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

enum class GroupFamily { Unitary, Orthogonal, QuaternionicUnitary };

/// One of U(n), O(n) or Sp(n/2) realized as a subgroup of U(n).
struct GroupKind {
  GroupFamily family = GroupFamily::Unitary;
  int n = 1;

  static GroupKind unitary(int n) { return {GroupFamily::Unitary, n}; }
  static GroupKind orthogonal(int n) { return {GroupFamily::Orthogonal, n}; }
  static GroupKind quaternionic(int n);

  /// Real dimension of the tangent space (Lie algebra).
  int tangent_dim() const;
  bool operator==(const GroupKind&) const = default;
};

/// The fixed block matrix [[0, -I], [I, 0]] of size n (n even).
Matrix symplectic_form(int n);

bool all_finite(const Matrix& m);

/// Frobenius-norm defect of group membership: ||M*M - I|| plus, where
/// applicable, the distance to real entries or to the J-compatibility
/// condition conj(M) = J^{-1} M J.
double membership_defect(const GroupKind& kind, const Matrix& m);

/// Exponential of a skew-Hermitian matrix via eigendecomposition.
Matrix expm_skew(const Matrix& x);

/// Principal square root of a unitary matrix. `rotate_branch` moves the
/// branch cut from -1 to +1 (used when -1 is in the spectrum).
Matrix unitary_sqrt(const Matrix& u, bool rotate_branch = false);

/// Haar-distributed sample from the given group.
Matrix haar_sample(const GroupKind& kind, Rng& rng);

/// Orthogonal projection of `ambient` onto the tangent space at `base`,
/// for the real inner product Re tr(X*Y).
Matrix project_tangent(const GroupKind& kind, const Matrix& base, const Matrix& ambient);

/// First-order retraction: thin QR for U(n)/O(n), exponential for Sp(n/2).
Matrix retract(const GroupKind& kind, const Matrix& base, const Matrix& tangent);

/// Orthonormal real basis of the tangent space at `base` (vectors base * Xi).
std::vector<Matrix> tangent_basis(const GroupKind& kind, const Matrix& base);

/// Number of singular values above rel_tol times the largest one.
int numerical_rank(const RealMatrix& m, double rel_tol = 1e-8);

}  // namespace rqv
