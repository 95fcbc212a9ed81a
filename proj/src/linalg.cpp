#include "rqv/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace rqv {

std::uint64_t Rng::next_u64() {
  // splitmix64; stable across platforms and standard libraries.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

GroupKind GroupKind::quaternionic(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("quaternionic unitary group requires even rank");
  return {GroupFamily::QuaternionicUnitary, n};
}

int GroupKind::tangent_dim() const {
  switch (family) {
    case GroupFamily::Unitary: return n * n;
    case GroupFamily::Orthogonal: return n * (n - 1) / 2;
    case GroupFamily::QuaternionicUnitary: {
      const int m = n / 2;
      return m * (2 * m + 1);
    }
  }
  return 0;
}

Matrix symplectic_form(int n) {
  if (n % 2 != 0) throw std::invalid_argument("symplectic form needs even size");
  const int m = n / 2;
  Matrix j = Matrix::Zero(n, n);
  j.topRightCorner(m, m) = -Matrix::Identity(m, m);
  j.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return j;
}

bool all_finite(const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double membership_defect(const GroupKind& kind, const Matrix& m) {
  if (m.rows() != kind.n || m.cols() != kind.n) return std::numeric_limits<double>::infinity();
  const int n = kind.n;
  double d = (m.adjoint() * m - Matrix::Identity(n, n)).norm();
  switch (kind.family) {
    case GroupFamily::Unitary: break;
    case GroupFamily::Orthogonal:
      d += m.imag().norm();
      break;
    case GroupFamily::QuaternionicUnitary: {
      const Matrix j = symplectic_form(n);
      d += (m.conjugate() - j.adjoint() * m * j).norm();
      break;
    }
  }
  return d;
}

Matrix expm_skew(const Matrix& x) {
  // x skew-Hermitian, so -i*x is Hermitian.
  Eigen::SelfAdjointEigenSolver<Matrix> es(cxd(0, -1) * x);
  const Eigen::VectorXd lam = es.eigenvalues();
  Matrix phases = Matrix::Zero(x.rows(), x.rows());
  for (int i = 0; i < lam.size(); ++i) phases(i, i) = std::polar(1.0, lam(i));
  return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

Matrix unitary_sqrt(const Matrix& u, bool rotate_branch) {
  // A unitary matrix is normal; its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Matrix d = Matrix::Zero(u.rows(), u.rows());
  for (int i = 0; i < u.rows(); ++i) {
    double theta = std::arg(t(i, i));  // (-pi, pi]
    if (rotate_branch && theta < 0) theta += 2.0 * M_PI;  // cut at +1 instead
    d(i, i) = std::polar(1.0, theta / 2.0);
  }
  return q * d * q.adjoint();
}

namespace {

Matrix gaussian_complex(int n, Rng& rng) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      z(i, j) = cxd(re, im);
    }
  return z;
}

// Thin QR with the R-diagonal phase fix, so the factor is Haar when the
// input is Ginibre.
Matrix qr_unitary(const Matrix& z) {
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < z.cols(); ++i) {
    const cxd rd = r(i, i);
    const double a = std::abs(rd);
    q.col(i) *= (a > 0) ? rd / a : cxd(1, 0);
  }
  return q;
}

// Unitary polar factor via the inverse square root of Q*Q, with one
// Newton-Schulz step to pin the membership defect near machine precision.
Matrix polar_unitary(const Matrix& z) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(z.adjoint() * z);
  const Eigen::VectorXd lam = es.eigenvalues();
  Matrix isqrt = Matrix::Zero(z.rows(), z.rows());
  for (int i = 0; i < lam.size(); ++i) isqrt(i, i) = 1.0 / std::sqrt(std::max(lam(i), 1e-300));
  Matrix u = z * es.eigenvectors() * isqrt * es.eigenvectors().adjoint();
  u = 0.5 * u * (3.0 * Matrix::Identity(z.rows(), z.rows()) - u.adjoint() * u);
  return u;
}

Matrix quaternionic_average(const Matrix& x, const Matrix& j) {
  return 0.5 * (x + j.adjoint() * x.conjugate() * j);
}

}  // namespace

Matrix haar_sample(const GroupKind& kind, Rng& rng) {
  const int n = kind.n;
  switch (kind.family) {
    case GroupFamily::Unitary:
      return qr_unitary(gaussian_complex(n, rng));
    case GroupFamily::Orthogonal: {
      Matrix z(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = rng.gaussian();
      return qr_unitary(z);
    }
    case GroupFamily::QuaternionicUnitary: {
      if (n % 2 != 0) throw std::invalid_argument("quaternionic sample needs even rank");
      // Project a Ginibre matrix onto the quaternionic structure; the polar
      // factor of the result is Haar on Sp(n/2) and respects J exactly.
      const Matrix j = symplectic_form(n);
      const Matrix g = quaternionic_average(gaussian_complex(n, rng), j);
      return polar_unitary(g);
    }
  }
  throw std::invalid_argument("unknown group kind");
}

Matrix project_tangent(const GroupKind& kind, const Matrix& base, const Matrix& ambient) {
  if (membership_defect(kind, base) > 1e-8)
    throw std::invalid_argument("project_tangent: base point is not in the group");
  const Matrix omega = base.adjoint() * ambient;
  Matrix xi = 0.5 * (omega - omega.adjoint());  // skew-Hermitian part
  switch (kind.family) {
    case GroupFamily::Unitary: break;
    case GroupFamily::Orthogonal:
      xi = xi.real().cast<cxd>();
      break;
    case GroupFamily::QuaternionicUnitary:
      xi = quaternionic_average(xi, symplectic_form(kind.n));
      break;
  }
  return base * xi;
}

Matrix retract(const GroupKind& kind, const Matrix& base, const Matrix& tangent) {
  switch (kind.family) {
    case GroupFamily::Unitary:
      return qr_unitary(base + tangent);
    case GroupFamily::Orthogonal: {
      const Matrix y = base + tangent;
      return qr_unitary(y.real().cast<cxd>());
    }
    case GroupFamily::QuaternionicUnitary: {
      // QR does not preserve the J-condition; use the exponential.
      Matrix xi = base.adjoint() * tangent;
      xi = quaternionic_average(0.5 * (xi - xi.adjoint()), symplectic_form(kind.n));
      return base * expm_skew(xi);
    }
  }
  throw std::invalid_argument("unknown group kind");
}

std::vector<Matrix> tangent_basis(const GroupKind& kind, const Matrix& base) {
  const int n = kind.n;
  std::vector<Matrix> out;
  const double s = 1.0 / std::sqrt(2.0);
  auto push = [&](const Matrix& xi) { out.push_back(base * xi); };

  switch (kind.family) {
    case GroupFamily::Unitary: {
      for (int k = 0; k < n; ++k) {
        Matrix xi = Matrix::Zero(n, n);
        xi(k, k) = cxd(0, 1);
        push(xi);
      }
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          Matrix a = Matrix::Zero(n, n);
          a(k, l) = s;
          a(l, k) = -s;
          push(a);
          Matrix b = Matrix::Zero(n, n);
          b(k, l) = cxd(0, s);
          b(l, k) = cxd(0, s);
          push(b);
        }
      break;
    }
    case GroupFamily::Orthogonal: {
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          Matrix a = Matrix::Zero(n, n);
          a(k, l) = s;
          a(l, k) = -s;
          push(a);
        }
      break;
    }
    case GroupFamily::QuaternionicUnitary: {
      const int m = n / 2;
      // Block form [[A, -conj(B)], [B, conj(A)]], A skew-Hermitian, B symmetric.
      auto push_block = [&](const Matrix& a, const Matrix& b) {
        Matrix xi = Matrix::Zero(n, n);
        xi.topLeftCorner(m, m) = a;
        xi.bottomRightCorner(m, m) = a.conjugate();
        xi.bottomLeftCorner(m, m) = b;
        xi.topRightCorner(m, m) = -b.conjugate();
        push(s * xi);
      };
      const Matrix zero = Matrix::Zero(m, m);
      for (int k = 0; k < m; ++k) {
        Matrix a = zero;
        a(k, k) = cxd(0, 1);
        push_block(a, zero);
      }
      for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
          Matrix a = zero;
          a(k, l) = s;
          a(l, k) = -s;
          push_block(a, zero);
          a = zero;
          a(k, l) = cxd(0, s);
          a(l, k) = cxd(0, s);
          push_block(a, zero);
        }
      for (int k = 0; k < m; ++k) {
        Matrix b = zero;
        b(k, k) = 1;
        push_block(zero, b);
        b(k, k) = cxd(0, 1);
        push_block(zero, b);
      }
      for (int k = 0; k < m; ++k)
        for (int l = k + 1; l < m; ++l) {
          Matrix b = zero;
          b(k, l) = s;
          b(l, k) = s;
          push_block(zero, b);
          b = zero;
          b(k, l) = cxd(0, s);
          b(l, k) = cxd(0, s);
          push_block(zero, b);
        }
      break;
    }
  }
  return out;
}

int numerical_rank(const RealMatrix& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("numerical_rank: rel_tol must lie in (0, 1)");
  Eigen::JacobiSVD<RealMatrix> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_tol * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

}  // namespace rqv
