#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rqv/presentation.hpp"
#include "rqv/solver.hpp"

#include <cmath>

using namespace rqv;

namespace {

Matrix conj_m(const Matrix& m) { return m.conjugate(); }

std::vector<Matrix> random_assignment(const GeneratorSchema& s, int n, Rng& rng) {
  std::vector<Matrix> mats;
  for (const Generator& g : s.generators) mats.push_back(haar_sample(g.group(n), rng));
  return mats;
}

}  // namespace

TEST_CASE("topology validation") {
  CHECK(CurveTopology{CurveKind::Type0, 2, 0}.valid());
  CHECK_FALSE(CurveTopology{CurveKind::Type0, 2, 1}.valid());
  CHECK(CurveTopology{CurveKind::TypeI, 3, 2}.valid());
  CHECK_FALSE(CurveTopology{CurveKind::TypeI, 3, 1}.valid());   // parity
  CHECK_FALSE(CurveTopology{CurveKind::TypeI, 1, 4}.valid());   // ghat < 0
  CHECK(CurveTopology{CurveKind::TypeII, 2, 2}.valid());
  CHECK_FALSE(CurveTopology{CurveKind::TypeII, 2, 1}.valid());  // parity
  CHECK_FALSE(CurveTopology{CurveKind::TypeII, 2, 4}.valid());  // r > g
  CHECK(CurveTopology{CurveKind::TypeI, 0, 1}.valid());
}

TEST_CASE("generator schema matches the presentations") {
  const GeneratorSchema s0 = generator_schema({CurveKind::Type0, 2, 0}, Structure::Real);
  REQUIRE(s0.generators.size() == 3);
  CHECK(s0.generators[0].label == "A1");
  CHECK(s0.generators[1].label == "B1");
  CHECK(s0.generators[2].label == "C");
  CHECK(s0.generators[2].epsilon == 1);
  CHECK(s0.generators[2].gauge_right_conjugated);
  CHECK(s0.gauge_families == std::vector<GroupFamily>{GroupFamily::Unitary});

  const GeneratorSchema s1 = generator_schema({CurveKind::TypeI, 3, 2}, Structure::Real);
  std::vector<std::string> labels;
  for (const Generator& g : s1.generators) labels.push_back(g.label);
  CHECK(labels == std::vector<std::string>{"A1", "B1", "C1", "C2", "D2"});
  CHECK(s1.gauge_families ==
        std::vector<GroupFamily>(2, GroupFamily::Orthogonal));
  const Generator& d2 = s1.generators[4];
  CHECK(d2.gauge_left == 0);
  CHECK(d2.gauge_right == 1);
  CHECK_FALSE(d2.gauge_right_conjugated);
  for (const Generator& g : s1.generators) CHECK(g.epsilon == 0);

  const GeneratorSchema s2 = generator_schema({CurveKind::TypeII, 2, 2}, Structure::Real);
  labels.clear();
  for (const Generator& g : s2.generators) labels.push_back(g.label);
  CHECK(labels == std::vector<std::string>{"C0", "C1", "C2", "D1", "D2"});  // ghat = 0
  CHECK(s2.gauge_families.size() == 3);
  CHECK(s2.gauge_families[0] == GroupFamily::Unitary);
  CHECK(s2.gauge_families[1] == GroupFamily::Orthogonal);

  const GeneratorSchema s2q = generator_schema({CurveKind::TypeII, 2, 2}, Structure::Quaternionic);
  CHECK(s2q.generators[1].family == GroupFamily::QuaternionicUnitary);

  const GeneratorSchema sodd = generator_schema({CurveKind::Type0, 3, 0}, Structure::Real);
  labels.clear();
  for (const Generator& g : sodd.generators) labels.push_back(g.label);
  CHECK(labels == std::vector<std::string>{"A1", "B1", "C", "D"});
  CHECK(sodd.generators[2].epsilon == 0);
  CHECK(sodd.generators[3].epsilon == 1);
}

TEST_CASE("relator words reproduce the displayed matrix equations") {
  Rng rng(71);
  const int n = 3;

  SUBCASE("type 0, even genus") {
    const CurveTopology t{CurveKind::Type0, 2, 0};
    const GeneratorSchema s = generator_schema(t, Structure::Real);
    const Relator rel = relator(t, Structure::Real);
    CHECK(rel.sign == 1);
    const auto mats = random_assignment(s, n, rng);
    const Matrix expected = mats[0] * mats[1] * mats[0].inverse() * mats[1].inverse() * mats[2] *
                            conj_m(mats[2]);
    const ExtendedUnitaryElement e = evaluate_word(rel.word, mats, s, n);
    CHECK(e.epsilon == 0);
    CHECK((e.matrix - expected).norm() < 1e-12);
  }

  SUBCASE("type 0, odd genus") {
    const CurveTopology t{CurveKind::Type0, 3, 0};
    const GeneratorSchema s = generator_schema(t, Structure::Real);
    const Relator rel = relator(t, Structure::Real);
    CHECK(rel.sign == 1);
    const auto mats = random_assignment(s, n, rng);
    const Matrix expected = mats[0] * mats[1] * mats[0].inverse() * mats[1].inverse() * mats[2] *
                            mats[3] * conj_m(mats[2]) * mats[3].inverse();
    const ExtendedUnitaryElement e = evaluate_word(rel.word, mats, s, n);
    CHECK((e.matrix - expected).norm() < 1e-12);
  }

  SUBCASE("type I") {
    const CurveTopology t{CurveKind::TypeI, 3, 2};
    const GeneratorSchema s = generator_schema(t, Structure::Real);
    const Relator rel = relator(t, Structure::Real);
    const auto mats = random_assignment(s, n, rng);
    // A1 B1 A1^-1 B1^-1 C1 D2 C2 D2^-1
    const Matrix expected = mats[0] * mats[1] * mats[0].inverse() * mats[1].inverse() * mats[2] *
                            mats[4] * mats[3] * mats[4].inverse();
    const ExtendedUnitaryElement e = evaluate_word(rel.word, mats, s, n);
    CHECK((e.matrix - expected).norm() < 1e-12);
  }

  SUBCASE("type II") {
    const CurveTopology t{CurveKind::TypeII, 2, 2};
    const GeneratorSchema s = generator_schema(t, Structure::Real);
    const Relator rel = relator(t, Structure::Real);
    const auto mats = random_assignment(s, n, rng);
    // C0 conj(C0) D1 C1 D1^-1 D2 C2 D2^-1
    const Matrix expected = mats[0] * conj_m(mats[0]) * mats[3] * mats[1] * mats[3].inverse() *
                            mats[4] * mats[2] * mats[4].inverse();
    const ExtendedUnitaryElement e = evaluate_word(rel.word, mats, s, n);
    CHECK((e.matrix - expected).norm() < 1e-12);
  }
}

TEST_CASE("sign calibration against the parity laws") {
  CHECK(calibrate_sign({CurveKind::Type0, 2, 0}) == -1);
  CHECK(calibrate_sign({CurveKind::Type0, 4, 0}) == -1);
  CHECK(calibrate_sign({CurveKind::Type0, 3, 0}) == 1);
  CHECK(calibrate_sign({CurveKind::Type0, 1, 0}) == 1);
  CHECK(calibrate_sign({CurveKind::TypeI, 3, 2}) == 1);
  CHECK(calibrate_sign({CurveKind::TypeII, 2, 2}) == -1);
  CHECK(relator({CurveKind::Type0, 2, 0}, Structure::Real).sign == 1);
  CHECK(relator({CurveKind::Type0, 2, 0}, Structure::Quaternionic).sign == -1);
  CHECK(relator({CurveKind::Type0, 3, 0}, Structure::Quaternionic).sign == 1);
}

TEST_CASE("quaternionic evaluation equals the calibrated sign times the plain product") {
  Rng rng(73);
  for (const CurveTopology& t : {CurveTopology{CurveKind::Type0, 2, 0},
                                 CurveTopology{CurveKind::Type0, 3, 0},
                                 CurveTopology{CurveKind::TypeI, 2, 1},
                                 CurveTopology{CurveKind::TypeII, 3, 1}}) {
    const GeneratorSchema sq = generator_schema(t, Structure::Quaternionic);
    const GeneratorSchema sr = generator_schema(t, Structure::Real);
    const Relator rel = relator(t, Structure::Quaternionic);
    const int n = 2;
    const auto mats = random_assignment(sq, n, rng);
    const Matrix plain = evaluate_word(rel.word, mats, sr, n).matrix;  // real: no signs
    const Matrix graded = evaluate_word(rel.word, mats, sq, n).matrix;
    CHECK((graded - static_cast<double>(rel.sign) * plain).norm() < 1e-12);
  }
}

TEST_CASE("central target") {
  CHECK(std::abs(central_target(1, 0) - cxd(1, 0)) < 1e-15);
  CHECK(std::abs(central_target(2, 1) - cxd(0, 1)) < 1e-15);
  CHECK(std::abs(central_target(1, 1) - cxd(-1, 0)) < 1e-15);
  CHECK_THROWS_AS(central_target(0, 1), std::invalid_argument);
}

TEST_CASE("extended evaluation basics") {
  const int n = 2;
  Rng rng(79);
  const Matrix m = haar_sample(GroupKind::unitary(n), rng);
  const std::vector<Matrix> assignment = {m};
  const std::vector<int> eps = {1};
  const TwistedWord square = {{0, 1, false}, {0, 1, false}};

  const ExtendedUnitaryElement empty =
      evaluate_word({}, assignment, eps, Structure::Real, n);
  CHECK(empty.epsilon == 0);
  CHECK((empty.matrix - Matrix::Identity(n, n)).norm() == 0.0);

  const ExtendedUnitaryElement re = evaluate_word(square, assignment, eps, Structure::Real, n);
  CHECK(re.epsilon == 0);
  CHECK((re.matrix - m * conj_m(m)).norm() < 1e-14);

  const ExtendedUnitaryElement qu =
      evaluate_word(square, assignment, eps, Structure::Quaternionic, n);
  CHECK((qu.matrix + m * conj_m(m)).norm() < 1e-14);
}

TEST_CASE("evaluation is a graded homomorphism") {
  Rng rng(83);
  const CurveTopology t{CurveKind::Type0, 3, 0};
  for (Structure structure : {Structure::Real, Structure::Quaternionic}) {
    const GeneratorSchema s = generator_schema(t, structure);
    const int n = 2;
    const auto mats = random_assignment(s, n, rng);
    std::vector<int> eps;
    for (const Generator& g : s.generators) eps.push_back(g.epsilon);
    auto random_word = [&](int len) {
      TwistedWord w;
      for (int i = 0; i < len; ++i) {
        const int g = static_cast<int>(rng.next_u64() % s.generators.size());
        const bool inv = (rng.next_u64() & 1) != 0;
        w.push_back({g, inv ? -1 : 1, inv && eps[g] == 1});
      }
      return w;
    };
    for (int trial = 0; trial < 40; ++trial) {
      const TwistedWord w1 = random_word(1 + static_cast<int>(rng.next_u64() % 3));
      const TwistedWord w2 = random_word(1 + static_cast<int>(rng.next_u64() % 3));
      TwistedWord w12 = w1;
      w12.insert(w12.end(), w2.begin(), w2.end());
      const ExtendedUnitaryElement e1 = evaluate_word(w1, mats, eps, structure, n);
      const ExtendedUnitaryElement e2 = evaluate_word(w2, mats, eps, structure, n);
      const ExtendedUnitaryElement e12 = evaluate_word(w12, mats, eps, structure, n);
      // (M, e)(N, d) = (M conj^e(N), e xor d), with the structure sign on
      // odd-grade pairs.
      Matrix prod = e1.matrix * (e1.epsilon ? conj_m(e2.matrix) : e2.matrix);
      if (structure == Structure::Quaternionic && e1.epsilon == 1 && e2.epsilon == 1)
        prod = -prod;
      CHECK(e12.epsilon == (e1.epsilon ^ e2.epsilon));
      CHECK((e12.matrix - prod).norm() < 1e-12);
    }
  }
}

TEST_CASE("relator evaluation is gauge covariant") {
  Rng rng(89);
  for (const CurveTopology& t : {CurveTopology{CurveKind::Type0, 2, 0},
                                 CurveTopology{CurveKind::Type0, 3, 0},
                                 CurveTopology{CurveKind::TypeI, 3, 2},
                                 CurveTopology{CurveKind::TypeII, 2, 2}}) {
    for (Structure structure : {Structure::Real, Structure::Quaternionic}) {
      const int n = 2;
      Representation rep = random_representation(t, structure, n, 0, rng);
      const GaugeElement g = random_gauge(rep, rng);
      const Representation moved = apply_gauge(g, rep);
      const Matrix before = evaluate_relator(rep).matrix;
      const Matrix after = evaluate_relator(moved).matrix;
      const Matrix g0 = g.factors[0];
      CHECK((after - g0 * before * g0.inverse()).norm() < 1e-10);
    }
  }
}

TEST_CASE("rank-1 even-genus relator collapses to 1") {
  Rng rng(97);
  const CurveTopology t{CurveKind::Type0, 2, 0};
  const GeneratorSchema s = generator_schema(t, Structure::Real);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mats = random_assignment(s, 1, rng);
    const ExtendedUnitaryElement e = evaluate_word(relator(t, Structure::Real).word, mats, s, 1);
    CHECK(std::abs(e.matrix(0, 0) - cxd(1, 0)) < 1e-12);
  }
}

TEST_CASE("real relator determinants are real signs") {
  // So the central equation can only hold when zeta^n is real: the
  // boundary holonomies contribute determinant +-1, everything else
  // cancels.
  Rng rng(101);
  for (const CurveTopology& t : {CurveTopology{CurveKind::Type0, 2, 0},
                                 CurveTopology{CurveKind::Type0, 3, 0},
                                 CurveTopology{CurveKind::TypeI, 2, 1},
                                 CurveTopology{CurveKind::TypeII, 3, 3}}) {
    const GeneratorSchema s = generator_schema(t, Structure::Real);
    for (int trial = 0; trial < 5; ++trial) {
      const auto mats = random_assignment(s, 2, rng);
      const Matrix v = evaluate_word(relator(t, Structure::Real).word, mats, s, 2).matrix;
      const cxd det = v.determinant();
      CHECK(std::abs(std::abs(det) - 1.0) < 1e-12);
      CHECK(std::abs(det.imag()) < 1e-10);
      if (t.kind == CurveKind::Type0) CHECK(std::abs(det - cxd(1, 0)) < 1e-10);
    }
  }
}

TEST_CASE("abstract presentations") {
  SUBCASE("type 0 in the eta-delta form") {
    const GammaPresentation p = gamma_presentation({CurveKind::Type0, 3, 0}, PresentationStyle::EFG);
    CHECK(p.generators.size() == 4);
    for (const GammaGenerator& g : p.generators) CHECK(g.epsilon == 1);
    REQUIRE(p.relations.size() == 1);
    CHECK(p.relations[0].size() == 8);
  }
  SUBCASE("type I in the eta-delta form") {
    const GammaPresentation p = gamma_presentation({CurveKind::TypeI, 3, 2}, PresentationStyle::EFG);
    // delta_1..delta_3, eta_1..eta_3 with ghat = 1
    CHECK(p.generators.size() == 6);
    CHECK(p.relations.size() == 2 * 2 + 1);
    int path_gens = 0;
    for (const GammaGenerator& g : p.generators) path_gens += g.epsilon;
    CHECK(path_gens == 2);
  }
  SUBCASE("type II trailing squares") {
    const GammaPresentation p =
        gamma_presentation({CurveKind::TypeII, 2, 2}, PresentationStyle::EFG);
    CHECK(p.generators.size() == 2 + 3);  // delta_1, delta_2, eta_1..eta_3
    CHECK(p.relations.size() == 5);
    // the long relation ends with the squared path generator
    const TwistedWord& last = p.relations.back();
    CHECK(last.size() == 2 + 2);  // delta_1 delta_2 eta_3^2
  }
  SUBCASE("standard form") {
    const GammaPresentation p =
        gamma_presentation({CurveKind::Type0, 2, 0}, PresentationStyle::Standard);
    CHECK(p.generators.size() == 5);  // a1 b1 a2 b2 c
    CHECK(p.relations.size() == 2);
    const GammaPresentation podd =
        gamma_presentation({CurveKind::Type0, 3, 0}, PresentationStyle::Standard);
    CHECK(podd.relations[0].size() == 3);  // c c a2^-1
  }
}

TEST_CASE("eta-delta relator at rank 1 reproduces the calibrated sign") {
  Rng rng(103);
  for (int g : {1, 2, 3, 4}) {
    const CurveTopology t{CurveKind::Type0, g, 0};
    const GammaPresentation p = gamma_presentation(t, PresentationStyle::EFG);
    std::vector<int> eps;
    for (const GammaGenerator& gen : p.generators) eps.push_back(gen.epsilon);
    std::vector<Matrix> units;
    for (size_t i = 0; i < p.generators.size(); ++i)
      units.push_back(haar_sample(GroupKind::unitary(1), rng));
    const ExtendedUnitaryElement e =
        evaluate_word(p.relations[0], units, eps, Structure::Quaternionic, 1);
    const double expected = calibrate_sign(t);
    CHECK(std::abs(e.matrix(0, 0) - cxd(expected, 0)) < 1e-12);
  }
}

TEST_CASE("evaluation rejects out-of-range letters and bad shapes") {
  const std::vector<Matrix> one = {Matrix::Identity(2, 2)};
  const std::vector<int> eps = {0};
  CHECK_THROWS_AS(evaluate_word({{1, 1, false}}, one, eps, Structure::Real, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_word({{0, 1, false}}, {Matrix::Identity(3, 3)}, eps,
                                Structure::Real, 2),
                  std::invalid_argument);
}

TEST_CASE("closed words under the gauge chain") {
  const GeneratorSchema s = generator_schema({CurveKind::TypeI, 3, 2}, Structure::Real);
  const int a1 = s.index_of("A1"), c1 = s.index_of("C1"), c2 = s.index_of("C2"),
            d2 = s.index_of("D2");
  CHECK(word_is_closed(s, {{a1, 1, false}}));
  CHECK(word_is_closed(s, {{c1, 1, false}}));
  CHECK_FALSE(word_is_closed(s, {{c2, 1, false}}));  // closed at the wrong vertex
  CHECK(word_is_closed(s, {{d2, 1, false}, {c2, 1, false}, {d2, -1, false}}));
  CHECK_FALSE(word_is_closed(s, {{d2, 1, false}}));
  CHECK(word_is_closed(s, relator({CurveKind::TypeI, 3, 2}, Structure::Real).word));

  const GeneratorSchema s0 = generator_schema({CurveKind::Type0, 2, 0}, Structure::Real);
  const int c = s0.index_of("C");
  CHECK_FALSE(word_is_closed(s0, {{c, 1, false}}));  // odd grade
  CHECK(word_is_closed(s0, {{c, 1, false}, {c, 1, false}}));
}
