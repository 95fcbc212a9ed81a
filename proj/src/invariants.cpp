#include "rqv/invariants.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rqv {

namespace {

int mod2(int x) { return ((x % 2) + 2) % 2; }

void check_w1(const CurveTopology& topology, Structure structure,
              const std::optional<std::vector<int>>& w1) {
  const bool expects = structure == Structure::Real && topology.r >= 1;
  if (expects) {
    if (w1 && static_cast<int>(w1->size()) != topology.r)
      throw std::invalid_argument("w1 must have one entry per real circle");
    if (w1)
      for (int b : *w1)
        if (b != 0 && b != 1) throw std::invalid_argument("w1 entries must be 0 or 1");
  } else if (w1) {
    throw std::invalid_argument("w1 is only meaningful for real structures with real points");
  }
}

}  // namespace

std::string obstruction_reason(const CurveTopology& topology, Structure structure, int n, int k,
                               const std::optional<std::vector<int>>& w1) {
  topology.validate();
  if (n < 1) throw std::invalid_argument("rank must be positive");
  check_w1(topology, structure, w1);
  if (structure == Structure::Real) {
    if (topology.r == 0) {
      if (mod2(k) != 0) return "c1 must be even when the curve has no real points";
      return "";
    }
    if (w1) {
      int sum = 0;
      for (int b : *w1) sum += b;
      if (mod2(k - sum) != 0) return "c1 must equal sum of w1 mod 2";
    }
    return "";
  }
  if (topology.r >= 1 && n % 2 != 0)
    return "quaternionic bundles on curves with real points need even rank";
  if (mod2(k + n * (topology.g - 1)) != 0)
    return "quaternionic degree must satisfy k + n(g-1) even";
  return "";
}

bool realizable(const CurveTopology& topology, Structure structure, int n, int k,
                const std::optional<std::vector<int>>& w1) {
  return obstruction_reason(topology, structure, n, k, w1).empty();
}

bool realizable_some_w1(const CurveTopology& topology, Structure structure, int n, int k) {
  if (structure == Structure::Real && topology.r >= 1) {
    std::vector<int> w1(topology.r, 0);
    w1[0] = mod2(k);
    return realizable(topology, structure, n, k, w1);
  }
  return realizable(topology, structure, n, k);
}

std::vector<int> stiefel_whitney(const Representation& rep) {
  if (rep.structure != Structure::Real)
    throw std::invalid_argument("stiefel_whitney needs a real structure");
  if (rep.topology.r < 1)
    throw std::invalid_argument("stiefel_whitney needs at least one real circle");
  std::vector<int> w1(rep.topology.r);
  for (int j = 1; j <= rep.topology.r; ++j) {
    const Matrix& cj = rep.matrix("C" + std::to_string(j));
    w1[j - 1] = cj.determinant().real() < 0 ? 1 : 0;
  }
  return w1;
}

namespace {

// Realified matrix of X -> XM - MX acting on (Re X, Im X).
void append_commutator_rows(std::vector<Eigen::VectorXd>& rows, const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1;
      const Eigen::VectorXd re = realify(e * m - m * e);
      e(i, j) = cxd(0, 1);
      const Eigen::VectorXd im = realify(e * m - m * e);
      rows.push_back(re);
      rows.push_back(im);
    }
}

// Realified matrix of X -> XM - M conj(X).
void append_twisted_rows(std::vector<Eigen::VectorXd>& rows, const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix e = Matrix::Zero(n, n);
      e(i, j) = 1;
      rows.push_back(realify(e * m - m * e.conjugate()));
      e(i, j) = cxd(0, 1);
      rows.push_back(realify(e * m - m * e.conjugate()));
    }
}

// The rows above are the images of the real basis vectors, i.e. the columns
// of the realified operator; assemble and return its kernel dimension.
int realified_nullity(const std::vector<Eigen::VectorXd>& cols, int n, double rel_tol) {
  const int dim = 2 * n * n;
  if (cols.empty()) return dim;
  // Columns arrive grouped per condition: for condition c and basis vector b
  // the value lives at cols[c * dim + b]. Stack conditions vertically.
  const int ncond = static_cast<int>(cols.size()) / dim;
  Eigen::MatrixXd stacked(ncond * cols[0].size(), dim);
  for (int c = 0; c < ncond; ++c)
    for (int b = 0; b < dim; ++b)
      stacked.block(c * cols[0].size(), b, cols[0].size(), 1) = cols[c * dim + b];
  return dim - numerical_rank(stacked, rel_tol);
}

}  // namespace

int pi1_commutant_dimension(const Representation& rep, double rel_tol) {
  const int n = rep.n;
  std::vector<Matrix> conditions;
  std::vector<int> odd;
  for (size_t i = 0; i < rep.matrices.size(); ++i) {
    if (rep.schema.generators[i].epsilon == 0)
      conditions.push_back(rep.matrices[i]);
    else
      odd.push_back(static_cast<int>(i));
  }
  for (int x : odd)
    for (int y : odd)
      conditions.push_back(rep.matrices[x] * rep.matrices[y].conjugate());

  std::vector<Eigen::VectorXd> cols;
  for (const Matrix& m : conditions) append_commutator_rows(cols, m);
  const int nullity = realified_nullity(cols, n, rel_tol);
  return nullity / 2;  // the kernel is a complex subspace
}

int twisted_commutant_dimension(const Representation& rep, double rel_tol) {
  const int n = rep.n;
  std::vector<Eigen::VectorXd> cols;
  for (size_t i = 0; i < rep.matrices.size(); ++i) {
    if (rep.schema.generators[i].epsilon == 0)
      append_commutator_rows(cols, rep.matrices[i]);
    else
      append_twisted_rows(cols, rep.matrices[i]);
  }
  return realified_nullity(cols, n, rel_tol);
}

namespace {

std::vector<int> odd_generators(const GeneratorSchema& schema) {
  std::vector<int> odd;
  for (size_t i = 0; i < schema.generators.size(); ++i)
    if (schema.generators[i].epsilon == 1) odd.push_back(static_cast<int>(i));
  return odd;
}

}  // namespace

ExtensionCompatibility extension_compatibility(const Representation& rep_hat,
                                               const Representation& rep_tilde,
                                               int sample_words, std::uint64_t seed) {
  if (rep_hat.topology != rep_tilde.topology || rep_hat.n != rep_tilde.n)
    throw std::invalid_argument("extension_compatibility: shape mismatch");
  const GeneratorSchema& schema = rep_hat.schema;
  const int n = rep_hat.n;
  const std::vector<int> odd = odd_generators(schema);
  if (odd.empty())
    throw std::invalid_argument("extension_compatibility needs odd-grade generators");

  std::vector<TwistedWord> words;
  for (int x : odd) words.push_back({{x, 1, false}});
  Rng rng(seed);
  const int ngen = static_cast<int>(schema.generators.size());
  while (static_cast<int>(words.size()) < static_cast<int>(odd.size()) + sample_words) {
    const int len = 1 + static_cast<int>(rng.next_u64() % 4);
    TwistedWord w;
    int grade = 0;
    for (int i = 0; i < len; ++i) {
      const int g = static_cast<int>(rng.next_u64() % ngen);
      const bool inv = (rng.next_u64() & 1) != 0;
      const int eps = schema.generators[g].epsilon;
      w.push_back({g, inv ? -1 : 1, inv && eps == 1});
      grade ^= eps;
    }
    if (grade == 1) words.push_back(std::move(w));
  }

  ExtensionCompatibility out;
  std::vector<Matrix> ratios;
  for (const TwistedWord& w : words) {
    const Matrix mh = evaluate_word(w, rep_hat.matrices, rep_hat.schema, n).matrix;
    const Matrix mt = evaluate_word(w, rep_tilde.matrices, rep_tilde.schema, n).matrix;
    ratios.push_back(mh.inverse() * mt);
  }
  out.c_matrix = ratios.front();
  for (size_t i = 0; i < ratios.size(); ++i)
    for (size_t j = i + 1; j < ratios.size(); ++j)
      out.constancy_defect = std::max(out.constancy_defect, (ratios[i] - ratios[j]).norm());
  out.constant = out.constancy_defect < 1e-8;
  for (size_t i = 0; i < schema.generators.size(); ++i) {
    if (schema.generators[i].epsilon != 0) continue;
    const Matrix& m = rep_hat.matrices[i];
    out.commutation_defect =
        std::max(out.commutation_defect, (out.c_matrix * m - m * out.c_matrix).norm());
  }
  out.commutes = out.commutation_defect < 1e-8;
  const cxd c = out.c_matrix.trace() / static_cast<double>(n);
  out.c_cbar = c * std::conj(c);
  return out;
}

double extension_obstruction(const Representation& real_rep, int starts, std::uint64_t seed,
                             int max_iters) {
  if (real_rep.structure != Structure::Real)
    throw std::invalid_argument("extension_obstruction expects a real representation");
  if (real_rep.topology.kind != CurveKind::Type0)
    throw std::invalid_argument("extension_obstruction is implemented for type 0 curves");
  const int n = real_rep.n;

  Representation quat =
      identity_representation(real_rep.topology, Structure::Quaternionic, n, real_rep.k);
  std::vector<bool> free_mask(quat.matrices.size(), false);
  const std::vector<int> odd = odd_generators(quat.schema);
  for (size_t i = 0; i < quat.matrices.size(); ++i) {
    if (quat.schema.generators[i].epsilon == 0)
      quat.matrices[i] = real_rep.matrices[i];
    else
      free_mask[i] = true;
  }

  WordObjective obj;
  obj.structure = Structure::Quaternionic;
  obj.n = n;
  obj.epsilons.resize(quat.schema.generators.size());
  for (size_t i = 0; i < obj.epsilons.size(); ++i)
    obj.epsilons[i] = quat.schema.generators[i].epsilon;

  // The quaternionic relator itself.
  {
    WordResidualTerm t;
    t.word = relator(quat.topology, Structure::Quaternionic).word;
    t.target = central_target(n, quat.k) * Matrix::Identity(n, n);
    obj.terms.push_back(std::move(t));
  }
  // Matching the conjugation action x m x^-1 of the real extension.
  for (int x : odd)
    for (size_t m = 0; m < quat.schema.generators.size(); ++m) {
      if (quat.schema.generators[m].epsilon != 0) continue;
      WordResidualTerm t;
      t.word = {{x, 1, false}, {static_cast<int>(m), 1, false}, {x, -1, true}};
      t.target =
          evaluate_word(t.word, real_rep.matrices, real_rep.schema, n).matrix;
      obj.terms.push_back(std::move(t));
    }
  // Matching the products of pairs of odd generators.
  for (int x : odd)
    for (int y : odd) {
      WordResidualTerm t;
      t.word = {{x, 1, false}, {y, 1, false}};
      t.target = evaluate_word(t.word, real_rep.matrices, real_rep.schema, n).matrix;
      obj.terms.push_back(std::move(t));
    }

  std::vector<GroupKind> kinds;
  for (const Generator& g : quat.schema.generators) kinds.push_back(g.group(n));

  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Rng rng(seed ^ static_cast<std::uint64_t>(s));
    std::vector<Matrix> mats = quat.matrices;
    for (size_t i = 0; i < mats.size(); ++i)
      if (free_mask[i]) mats[i] = haar_sample(kinds[i], rng);
    MinimizeOptions mopts;
    mopts.max_iters = max_iters;
    mopts.target = 1e-14;
    const double f = riemannian_minimize(
        [&](const std::vector<Matrix>& m) { return obj.value(m); },
        [&](const std::vector<Matrix>& m) { return obj.egrad(m); }, kinds, mats, free_mask,
        mopts);
    best = std::min(best, f);
    if (best <= mopts.target) break;
  }
  return best;
}

}  // namespace rqv
