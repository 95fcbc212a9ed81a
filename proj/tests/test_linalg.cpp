#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rqv/linalg.hpp"

#include <cmath>

using namespace rqv;

namespace {

const std::vector<GroupKind> kAllKinds = {
    GroupKind::unitary(1),    GroupKind::unitary(2), GroupKind::unitary(3),
    GroupKind::orthogonal(2), GroupKind::orthogonal(3),
    GroupKind::quaternionic(2), GroupKind::quaternionic(4)};

Matrix random_ambient(int n, Rng& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cxd(rng.gaussian(), rng.gaussian());
  return m;
}

}  // namespace

TEST_CASE("haar samples live in their groups") {
  Rng rng(7);
  for (const GroupKind& kind : kAllKinds)
    for (int t = 0; t < 25; ++t) CHECK(membership_defect(kind, haar_sample(kind, rng)) < 1e-12);
}

TEST_CASE("haar sample special cases") {
  Rng rng(11);
  const Matrix u1 = haar_sample(GroupKind::unitary(1), rng);
  CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  const Matrix o3 = haar_sample(GroupKind::orthogonal(3), rng);
  CHECK((o3.transpose() * o3 - Matrix::Identity(3, 3)).norm() < 1e-12);
  CHECK(o3.imag().norm() == 0.0);

  CHECK_THROWS_AS(GroupKind::quaternionic(3), std::invalid_argument);
  GroupKind odd{GroupFamily::QuaternionicUnitary, 3};
  CHECK_THROWS_AS(haar_sample(odd, rng), std::invalid_argument);
}

TEST_CASE("haar mean trace of U(2) vanishes within Monte Carlo error") {
  // Independent oracle: the Haar average of tr is 0 with E|tr|^2 = 1, so
  // each real part has standard error sqrt(0.5/N).
  const int samples = 10000;
  Rng rng(2024);
  cxd mean = 0.0;
  for (int i = 0; i < samples; ++i)
    mean += haar_sample(GroupKind::unitary(2), rng).trace();
  mean /= static_cast<double>(samples);
  const double se = std::sqrt(0.5 / samples);
  CHECK(std::abs(mean.real()) < 4 * se);
  CHECK(std::abs(mean.imag()) < 4 * se);
}

TEST_CASE("quaternionic samples satisfy the J-condition and unitarity") {
  Rng rng(3);
  const Matrix j = symplectic_form(4);
  for (int t = 0; t < 10; ++t) {
    const Matrix m = haar_sample(GroupKind::quaternionic(4), rng);
    CHECK((m.conjugate() - j.adjoint() * m * j).norm() < 1e-12);
    CHECK(membership_defect(GroupKind::unitary(4), m) < 1e-12);
  }
}

TEST_CASE("tangent projection at the identity") {
  const int n = 3;
  Rng rng(5);
  const Matrix h0 = random_ambient(n, rng);
  const Matrix h = 0.5 * (h0 + h0.adjoint());  // Hermitian
  CHECK(project_tangent(GroupKind::unitary(n), Matrix::Identity(n, n), h).norm() < 1e-14);

  const Matrix s0 = random_ambient(n, rng);
  const Matrix s = 0.5 * (s0 - s0.adjoint());  // skew-Hermitian
  CHECK((project_tangent(GroupKind::unitary(n), Matrix::Identity(n, n), s) - s).norm() < 1e-14);
}

TEST_CASE("projection is idempotent and self-adjoint") {
  Rng rng(13);
  for (const GroupKind& kind : kAllKinds) {
    for (int t = 0; t < 100; ++t) {
      const Matrix base = haar_sample(kind, rng);
      const Matrix x = random_ambient(kind.n, rng);
      const Matrix px = project_tangent(kind, base, x);
      CHECK((project_tangent(kind, base, px) - px).norm() < 1e-10);
      const Matrix y = random_ambient(kind.n, rng);
      const Matrix py = project_tangent(kind, base, y);
      const double lhs = (px.adjoint() * y).real().trace();
      const double rhs = (x.adjoint() * py).real().trace();
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("projection rejects off-group base points") {
  CHECK_THROWS_AS(project_tangent(GroupKind::unitary(2), 2.0 * Matrix::Identity(2, 2),
                                  Matrix::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("retraction basics") {
  Rng rng(17);
  for (const GroupKind& kind : kAllKinds) {
    const Matrix base = haar_sample(kind, rng);
    const Matrix zero = Matrix::Zero(kind.n, kind.n);
    CHECK((retract(kind, base, zero) - base).norm() < 1e-12);
    const Matrix v = project_tangent(kind, base, random_ambient(kind.n, rng));
    const Matrix unit = v / std::max(v.norm(), 1e-14);
    CHECK(membership_defect(kind, retract(kind, base, unit)) < 1e-12);
  }
}

TEST_CASE("retraction on the circle is the exponential") {
  const GroupKind u1 = GroupKind::unitary(1);
  Matrix base = Matrix::Identity(1, 1);
  Matrix tangent(1, 1);
  // QR retraction is first order; on the circle it matches the exponential
  // to cubic accuracy in the step.
  const double theta = 1e-5;
  tangent(0, 0) = cxd(0, theta);
  const Matrix r = retract(u1, base, tangent);
  CHECK(std::abs(r(0, 0) - std::polar(1.0, theta)) < 1e-12);
}

TEST_CASE("retraction agrees with the step to first order") {
  Rng rng(19);
  const GroupKind kind = GroupKind::unitary(3);
  const Matrix base = Matrix::Identity(3, 3);
  Matrix v = project_tangent(kind, base, random_ambient(3, rng));
  v /= v.norm();
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const Matrix r = retract(kind, base, t * v);
    const double ratio = (r - base - t * v).norm() / (t * t);
    CHECK(ratio < 5.0);
  }
}

TEST_CASE("matrix exponential of skew-Hermitian input") {
  Rng rng(23);
  for (int n : {2, 4}) {
    const Matrix x0 = random_ambient(n, rng);
    Matrix x = 0.5 * (x0 - x0.adjoint());
    x *= 10.0 / x.norm();  // norm 10
    const Matrix e = expm_skew(x);
    CHECK((e.adjoint() * e - Matrix::Identity(n, n)).norm() < 1e-12);
    CHECK((expm_skew(Matrix(-x)) * e - Matrix::Identity(n, n)).norm() < 1e-12);
  }
  // Small-argument comparison with the truncated series.
  const Matrix y0 = random_ambient(2, rng);
  const Matrix y = 0.001 * (y0 - y0.adjoint());
  const Matrix id = Matrix::Identity(2, 2);
  const Matrix series = id + y + 0.5 * y * y + y * y * y / 6.0;
  CHECK((expm_skew(y) - series).norm() < 1e-11);
}

TEST_CASE("numerical rank") {
  CHECK(numerical_rank(RealMatrix::Identity(5, 5), 1e-8) == 5);
  CHECK(numerical_rank(RealMatrix::Zero(4, 4)) == 0);
  CHECK(numerical_rank(RealMatrix(0, 0)) == 0);

  Rng rng(29);
  Eigen::VectorXd u(6), v(6);
  for (int i = 0; i < 6; ++i) {
    u(i) = rng.gaussian();
    v(i) = rng.gaussian();
  }
  const RealMatrix outer = u * v.transpose();
  CHECK(numerical_rank(outer) == 1);
  CHECK_THROWS_AS(numerical_rank(outer, 2.0), std::invalid_argument);
}

TEST_CASE("tangent bases are orthonormal and have the right dimension") {
  Rng rng(31);
  for (const GroupKind& kind : kAllKinds) {
    const Matrix base = haar_sample(kind, rng);
    const auto basis = tangent_basis(kind, base);
    CHECK(static_cast<int>(basis.size()) == kind.tangent_dim());
    for (size_t i = 0; i < basis.size(); ++i) {
      CHECK((project_tangent(kind, base, basis[i]) - basis[i]).norm() < 1e-12);
      for (size_t j = i; j < basis.size(); ++j) {
        const double ip = (basis[i].adjoint() * basis[j]).real().trace();
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("rng streams are deterministic") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.gaussian() == b.gaussian());
}
