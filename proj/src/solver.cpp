#include "rqv/solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

namespace rqv {

namespace {

std::vector<GroupKind> generator_kinds(const GeneratorSchema& schema, int n) {
  std::vector<GroupKind> kinds;
  kinds.reserve(schema.generators.size());
  for (const Generator& g : schema.generators) kinds.push_back(g.group(n));
  return kinds;
}

std::vector<GroupKind> gauge_kinds(const GeneratorSchema& schema, int n) {
  std::vector<GroupKind> kinds;
  kinds.reserve(schema.gauge_families.size());
  for (GroupFamily f : schema.gauge_families) kinds.push_back({f, n});
  return kinds;
}

void check_rank_compatibility(const CurveTopology& topology, Structure structure, int n) {
  topology.validate();
  if (n < 1) throw std::invalid_argument("rank must be positive");
  if (structure == Structure::Quaternionic && topology.kind != CurveKind::Type0 && n % 2 != 0)
    throw std::invalid_argument(
        "quaternionic structures on curves with real points require even rank");
}

}  // namespace

const Matrix& Representation::matrix(const std::string& label) const {
  const int i = schema.index_of(label);
  if (i < 0) throw std::invalid_argument("no generator labelled " + label);
  return matrices[i];
}

Matrix& Representation::matrix(const std::string& label) {
  const int i = schema.index_of(label);
  if (i < 0) throw std::invalid_argument("no generator labelled " + label);
  return matrices[i];
}

double Representation::membership_defect() const {
  double d = 0.0;
  for (size_t i = 0; i < matrices.size(); ++i)
    d = std::max(d, rqv::membership_defect(schema.generators[i].group(n), matrices[i]));
  return d;
}

void Representation::validate(double tol) const {
  check_rank_compatibility(topology, structure, n);
  if (matrices.size() != schema.generators.size())
    throw std::invalid_argument("representation is missing generator matrices");
  for (const Matrix& m : matrices)
    if (!all_finite(m)) throw std::invalid_argument("representation has non-finite entries");
  if (membership_defect() > tol)
    throw std::invalid_argument("generator matrix violates its structure group");
}

Representation identity_representation(const CurveTopology& topology, Structure structure,
                                       int n, int k) {
  check_rank_compatibility(topology, structure, n);
  Representation rep;
  rep.topology = topology;
  rep.structure = structure;
  rep.n = n;
  rep.k = k;
  rep.schema = generator_schema(topology, structure);
  rep.matrices.assign(rep.schema.generators.size(), Matrix::Identity(n, n));
  return rep;
}

Representation random_representation(const CurveTopology& topology, Structure structure,
                                     int n, int k, Rng& rng) {
  Representation rep = identity_representation(topology, structure, n, k);
  for (size_t i = 0; i < rep.matrices.size(); ++i)
    rep.matrices[i] = haar_sample(rep.schema.generators[i].group(n), rng);
  return rep;
}

GaugeElement identity_gauge(const Representation& rep) {
  GaugeElement g;
  g.factors.assign(rep.schema.gauge_families.size(), Matrix::Identity(rep.n, rep.n));
  return g;
}

GaugeElement random_gauge(const Representation& rep, Rng& rng) {
  GaugeElement g;
  for (GroupFamily f : rep.schema.gauge_families)
    g.factors.push_back(haar_sample({f, rep.n}, rng));
  return g;
}

// ---------------------------------------------------------------------------
// Word calculus: unrolled factor lists with conjugation/inversion modes.

namespace {

struct Occurrence {
  int gen = 0;
  bool inv = false;
  bool conj = false;  // factor = conj^c(M^{+-1})
};

struct Unrolled {
  std::vector<Occurrence> occ;
  std::vector<Matrix> factors;
  double sign = 1.0;
};

Unrolled unroll(const TwistedWord& word, const std::vector<int>& epsilons, Structure structure,
                const std::vector<Matrix>& mats) {
  Unrolled u;
  u.occ.reserve(word.size());
  u.factors.reserve(word.size());
  int acc_eps = 0;
  const bool quaternionic = structure == Structure::Quaternionic;
  for (const WordLetter& l : word) {
    const int eps = epsilons[l.generator];
    Occurrence o;
    o.gen = l.generator;
    o.inv = l.exponent < 0;
    o.conj = (l.conjugate ? 1 : 0) ^ acc_eps;
    if (quaternionic && eps == 1) {
      if (acc_eps == 1) u.sign = -u.sign;
      if (o.inv) u.sign = -u.sign;
    }
    const Matrix& m = mats[l.generator];
    Matrix f = o.inv ? Matrix(m.inverse()) : m;
    if (o.conj) f = f.conjugate();
    u.occ.push_back(o);
    u.factors.push_back(std::move(f));
    acc_eps ^= eps;
  }
  return u;
}

Matrix word_value(const Unrolled& u, int n) {
  Matrix w = Matrix::Identity(n, n) * u.sign;
  for (const Matrix& f : u.factors) w = w * f;
  return w;
}

}  // namespace

double WordObjective::value(const std::vector<Matrix>& mats) const {
  double total = 0.0;
  for (const WordResidualTerm& t : terms) {
    const Unrolled u = unroll(t.word, epsilons, structure, mats);
    total += t.weight * (word_value(u, n) - t.target).squaredNorm();
  }
  return total;
}

std::vector<Matrix> WordObjective::egrad(const std::vector<Matrix>& mats) const {
  std::vector<Matrix> g(mats.size(), Matrix::Zero(n, n));
  for (const WordResidualTerm& t : terms) {
    const Unrolled u = unroll(t.word, epsilons, structure, mats);
    const size_t m = u.factors.size();
    std::vector<Matrix> prefix(m + 1), suffix(m + 1);
    prefix[0] = Matrix::Identity(n, n) * u.sign;
    for (size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * u.factors[i];
    suffix[m] = Matrix::Identity(n, n);
    for (size_t i = m; i > 0; --i) suffix[i - 1] = u.factors[i - 1] * suffix[i];
    const Matrix r_adj = (prefix[m] - t.target).adjoint();
    for (size_t i = 0; i < m; ++i) {
      // suffix entry i+1 is F_{i+1}...F_{m-1}
      const Matrix k = suffix[i + 1] * r_adj * prefix[i];
      Matrix t_term;
      if (!u.occ[i].inv) {
        t_term = k;
      } else {
        t_term = -(u.factors[i] * k * u.factors[i]);
      }
      if (u.occ[i].conj) t_term = t_term.conjugate();
      g[u.occ[i].gen] += 2.0 * t.weight * t_term.adjoint();
    }
  }
  return g;
}

Matrix WordObjective::directional(int term, const std::vector<Matrix>& mats, int generator,
                                  const Matrix& v) const {
  const WordResidualTerm& t = terms[term];
  const Unrolled u = unroll(t.word, epsilons, structure, mats);
  const size_t m = u.factors.size();
  std::vector<Matrix> prefix(m + 1), suffix(m + 1);
  prefix[0] = Matrix::Identity(n, n) * u.sign;
  for (size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * u.factors[i];
  suffix[m] = Matrix::Identity(n, n);
  for (size_t i = m; i > 0; --i) suffix[i - 1] = u.factors[i - 1] * suffix[i];
  Matrix dw = Matrix::Zero(n, n);
  for (size_t i = 0; i < m; ++i) {
    if (u.occ[i].gen != generator) continue;
    Matrix dphi = u.occ[i].conj ? Matrix(v.conjugate()) : v;
    if (u.occ[i].inv) dphi = -(u.factors[i] * dphi * u.factors[i]);
    dw += prefix[i] * dphi * suffix[i + 1];
  }
  return dw;
}

Eigen::VectorXd realify(const Matrix& m) {
  Eigen::VectorXd v(2 * m.size());
  int p = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      v(p++) = m(i, j).real();
      v(p++) = m(i, j).imag();
    }
  return v;
}

// ---------------------------------------------------------------------------
// Relator residual and its gradients.

namespace {

WordObjective relator_objective(const Representation& rep) {
  WordObjective obj;
  obj.structure = rep.structure;
  obj.n = rep.n;
  obj.epsilons.resize(rep.schema.generators.size());
  for (size_t i = 0; i < obj.epsilons.size(); ++i)
    obj.epsilons[i] = rep.schema.generators[i].epsilon;
  WordResidualTerm term;
  term.word = relator(rep.topology, rep.structure).word;
  term.target = central_target(rep.n, rep.k) * Matrix::Identity(rep.n, rep.n);
  obj.terms.push_back(std::move(term));
  return obj;
}

}  // namespace

ExtendedUnitaryElement evaluate_relator(const Representation& rep) {
  const Relator rel = relator(rep.topology, rep.structure);
  return evaluate_word(rel.word, rep.matrices, rep.schema, rep.n);
}

double residual(const Representation& rep) {
  return relator_objective(rep).value(rep.matrices);
}

std::vector<Matrix> euclidean_gradient(const Representation& rep) {
  return relator_objective(rep).egrad(rep.matrices);
}

std::vector<Matrix> riemannian_gradient(const Representation& rep) {
  std::vector<Matrix> g = euclidean_gradient(rep);
  for (size_t i = 0; i < g.size(); ++i)
    g[i] = project_tangent(rep.schema.generators[i].group(rep.n), rep.matrices[i], g[i]);
  return g;
}

// ---------------------------------------------------------------------------
// Generic Riemannian descent.

namespace {

double flat_dot(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                const std::vector<bool>& mask) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    if (mask[i]) s += (a[i].adjoint() * b[i]).real().trace();
  return s;
}

}  // namespace

double riemannian_minimize(const std::function<double(const std::vector<Matrix>&)>& value,
                           const std::function<std::vector<Matrix>(const std::vector<Matrix>&)>& egrad,
                           const std::vector<GroupKind>& kinds, std::vector<Matrix>& mats,
                           const std::vector<bool>& free_mask, const MinimizeOptions& options,
                           int* iterations, std::vector<double>* history) {
  const size_t ngen = mats.size();
  auto rgrad = [&](const std::vector<Matrix>& x) {
    std::vector<Matrix> g = egrad(x);
    for (size_t i = 0; i < ngen; ++i)
      g[i] = free_mask[i] ? project_tangent(kinds[i], x[i], g[i]) : Matrix::Zero(x[i].rows(), x[i].cols());
    return g;
  };
  auto step = [&](const std::vector<Matrix>& x, const std::vector<Matrix>& dir, double tau) {
    std::vector<Matrix> y = x;
    for (size_t i = 0; i < ngen; ++i)
      if (free_mask[i]) y[i] = retract(kinds[i], x[i], tau * dir[i]);
    return y;
  };

  double f = value(mats);
  if (history) history->push_back(f);
  std::vector<Matrix> grad = rgrad(mats);
  std::vector<Matrix> prev_mats, prev_grad;
  double tau_prev = 0.0;
  int it = 0, stall = 0, bb_budget = 1;

  while (it < options.max_iters && f > options.target) {
    const double gn2 = flat_dot(grad, grad, free_mask);
    if (std::sqrt(std::max(gn2, 0.0)) < options.grad_tol) break;

    double tau = tau_prev > 0 ? 2.0 * tau_prev : 1.0 / std::max(1.0, std::sqrt(gn2));
    if (!prev_mats.empty()) {
      // Barzilai-Borwein trial step from the last accepted move.
      double ss = 0.0, sy = 0.0;
      for (size_t i = 0; i < ngen; ++i) {
        if (!free_mask[i]) continue;
        const Matrix s = mats[i] - prev_mats[i];
        const Matrix y = grad[i] - prev_grad[i];
        ss += (s.adjoint() * s).real().trace();
        sy += (s.adjoint() * y).real().trace();
      }
      if (std::abs(sy) > 1e-300) tau = std::clamp(ss / std::abs(sy), 1e-10, 1e3);
    }

    bool accepted = false;
    double f_new = f;
    std::vector<Matrix> cand;
    for (int bt = 0; bt < 60; ++bt) {
      cand = step(mats, grad, -tau);
      f_new = value(cand);
      if (f_new <= f - 1e-4 * tau * gn2) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    ++it;
    if (!accepted) break;

    prev_mats = mats;
    prev_grad = grad;
    mats = std::move(cand);
    const double drop = f - f_new;
    f = f_new;
    grad = rgrad(mats);
    tau_prev = tau;
    if (history) history->push_back(f);

    if (drop <= 1e-16 * std::max(1.0, f)) {
      if (++stall >= options.stall_window) {
        if (bb_budget-- <= 0) break;
        // Unguarded Barzilai-Borwein kick; keep the best point seen.
        double f_best = f;
        std::vector<Matrix> best = mats;
        for (int j = 0; j < 20 && it < options.max_iters; ++j, ++it) {
          double ss = 0.0, sy = 0.0;
          for (size_t i = 0; i < ngen; ++i) {
            if (!free_mask[i]) continue;
            const Matrix s = mats[i] - prev_mats[i];
            const Matrix y = grad[i] - prev_grad[i];
            ss += (s.adjoint() * s).real().trace();
            sy += (s.adjoint() * y).real().trace();
          }
          double tbb = std::abs(sy) > 1e-300 ? std::clamp(ss / std::abs(sy), 1e-10, 10.0) : 1e-3;
          prev_mats = mats;
          prev_grad = grad;
          mats = step(mats, grad, -tbb);
          grad = rgrad(mats);
          const double fv = value(mats);
          if (fv < f_best) {
            f_best = fv;
            best = mats;
          }
        }
        if (f_best < f - 1e-16 * std::max(1.0, f)) {
          mats = best;
          f = f_best;
          grad = rgrad(mats);
          stall = 0;
        } else {
          mats = best;
          f = f_best;
          break;
        }
      }
    } else {
      stall = 0;
    }
  }
  if (iterations) *iterations = it;
  return f;
}

std::vector<std::pair<int, Matrix>> product_tangent_basis(const std::vector<GroupKind>& kinds,
                                                          const std::vector<Matrix>& mats,
                                                          const std::vector<bool>& mask) {
  std::vector<std::pair<int, Matrix>> basis;
  for (size_t i = 0; i < mats.size(); ++i) {
    if (!mask[i]) continue;
    for (Matrix& b : tangent_basis(kinds[i], mats[i]))
      basis.emplace_back(static_cast<int>(i), std::move(b));
  }
  return basis;
}

double gauss_newton(const std::function<Eigen::VectorXd(const std::vector<Matrix>&)>& residual_vec,
                    const std::function<Eigen::MatrixXd(const std::vector<Matrix>&)>& jacobian,
                    const std::vector<GroupKind>& kinds, std::vector<Matrix>& mats,
                    const std::vector<bool>& free_mask, int max_steps, double target) {
  Eigen::VectorXd r = residual_vec(mats);
  double f = r.squaredNorm();
  for (int it = 0; it < max_steps && f > target; ++it) {
    const Eigen::MatrixXd j = jacobian(mats);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cut = sv.size() ? 1e-8 * sv(0) : 0.0;
    Eigen::VectorXd ur = svd.matrixU().transpose() * r;
    for (int i = 0; i < sv.size(); ++i) ur(i) = sv(i) > cut ? ur(i) / sv(i) : 0.0;
    const Eigen::VectorXd h = -(svd.matrixV() * ur);

    const auto basis = product_tangent_basis(kinds, mats, free_mask);
    bool accepted = false;
    double damp = 1.0;
    for (int bt = 0; bt < 10; ++bt) {
      std::vector<Matrix> cand = mats;
      std::vector<Matrix> dir(mats.size(), Matrix());
      for (size_t i = 0; i < mats.size(); ++i)
        dir[i] = Matrix::Zero(mats[i].rows(), mats[i].cols());
      for (size_t b = 0; b < basis.size(); ++b)
        dir[basis[b].first] += damp * h(static_cast<int>(b)) * basis[b].second;
      for (size_t i = 0; i < mats.size(); ++i)
        if (free_mask[i]) cand[i] = retract(kinds[i], mats[i], dir[i]);
      const Eigen::VectorXd rc = residual_vec(cand);
      const double fc = rc.squaredNorm();
      if (fc < f) {
        mats = std::move(cand);
        r = rc;
        f = fc;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) break;
  }
  return f;
}

double polish(Representation& rep, const std::vector<bool>& free_mask, int max_steps) {
  const WordObjective obj = relator_objective(rep);
  const std::vector<GroupKind> kinds = generator_kinds(rep.schema, rep.n);
  auto rvec = [&](const std::vector<Matrix>& mats) {
    const ExtendedUnitaryElement e =
        evaluate_word(obj.terms[0].word, mats, obj.epsilons, obj.structure, obj.n);
    return realify(e.matrix - obj.terms[0].target);
  };
  auto jac = [&](const std::vector<Matrix>& mats) {
    const auto basis = product_tangent_basis(kinds, mats, free_mask);
    Eigen::MatrixXd j(2 * rep.n * rep.n, static_cast<int>(basis.size()));
    for (size_t b = 0; b < basis.size(); ++b)
      j.col(static_cast<int>(b)) = realify(obj.directional(0, mats, basis[b].first, basis[b].second));
    return j;
  };
  return gauss_newton(rvec, jac, kinds, rep.matrices, free_mask, max_steps);
}

double descend(Representation& rep, const std::vector<bool>& free_mask,
               const SolveOptions& options, int* iterations, std::vector<double>* history) {
  const WordObjective obj = relator_objective(rep);
  const std::vector<GroupKind> kinds = generator_kinds(rep.schema, rep.n);
  MinimizeOptions mopts;
  mopts.max_iters = options.max_iters;
  mopts.target = options.tol * 1e-2;
  double f = riemannian_minimize([&](const std::vector<Matrix>& m) { return obj.value(m); },
                                 [&](const std::vector<Matrix>& m) { return obj.egrad(m); },
                                 kinds, rep.matrices, free_mask, mopts, iterations, history);
  if (options.polish && f < 1e-4) f = polish(rep, free_mask);
  return f;
}

SolveResult solve(const CurveTopology& topology, Structure structure, int n, int k,
                  std::uint64_t seed, const SolveOptions& options) {
  check_rank_compatibility(topology, structure, n);
  const int starts = std::max(1, options.starts);

  struct StartOutcome {
    double residual;
    int iterations;
    Representation rep;
  };
  std::vector<StartOutcome> outcomes(starts);

  auto run_start = [&](int s) {
    Rng rng(seed ^ static_cast<std::uint64_t>(s));
    Representation rep = random_representation(topology, structure, n, k, rng);
    std::vector<bool> mask(rep.matrices.size(), true);
    int iters = 0;
    const double f = descend(rep, mask, options, &iters);
    outcomes[s] = {f, iters, std::move(rep)};
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, starts);
  if (threads == 1) {
    for (int s = 0; s < starts; ++s) run_start(s);
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      futures.push_back(std::async(std::launch::async, [&] {
        for (int s = next.fetch_add(1); s < starts; s = next.fetch_add(1)) run_start(s);
      }));
    for (auto& f : futures) f.get();
  }

  int best = 0;
  for (int s = 1; s < starts; ++s)
    if (outcomes[s].residual < outcomes[best].residual) best = s;

  SolveResult result;
  result.rep = std::move(outcomes[best].rep);
  result.residual = outcomes[best].residual;
  result.iterations = outcomes[best].iterations;
  result.converged = result.residual < options.tol;
  result.seed = seed;
  return result;
}

// ---------------------------------------------------------------------------
// Gauge action and orbit alignment.

Representation apply_gauge(const GaugeElement& g, const Representation& rep) {
  if (g.factors.size() != rep.schema.gauge_families.size())
    throw std::invalid_argument("gauge element has the wrong number of factors");
  const std::vector<GroupKind> vkinds = gauge_kinds(rep.schema, rep.n);
  for (size_t v = 0; v < g.factors.size(); ++v)
    if (membership_defect(vkinds[v], g.factors[v]) > 1e-8)
      throw std::invalid_argument("gauge factor violates its vertex group");
  Representation out = rep;
  for (size_t i = 0; i < rep.matrices.size(); ++i) {
    const Generator& gen = rep.schema.generators[i];
    const Matrix& left = g.factors[gen.gauge_left];
    Matrix right = g.factors[gen.gauge_right];
    if (gen.gauge_right_conjugated) right = right.conjugate();
    out.matrices[i] = left * rep.matrices[i] * right.inverse();
  }
  return out;
}

namespace {

std::vector<Matrix> gauge_transform(const std::vector<Matrix>& factors,
                                    const Representation& rep) {
  std::vector<Matrix> out(rep.matrices.size());
  for (size_t i = 0; i < rep.matrices.size(); ++i) {
    const Generator& gen = rep.schema.generators[i];
    Matrix right = factors[gen.gauge_right];
    if (gen.gauge_right_conjugated) right = right.conjugate();
    out[i] = factors[gen.gauge_left] * rep.matrices[i] * right.inverse();
  }
  return out;
}

}  // namespace

AlignResult orbit_align(const Representation& rep1, const Representation& rep2,
                        int extra_inits, std::uint64_t seed) {
  if (rep1.topology != rep2.topology || rep1.structure != rep2.structure ||
      rep1.n != rep2.n || rep1.k != rep2.k)
    throw std::invalid_argument("orbit_align: representations live on different varieties");
  const std::vector<GroupKind> vkinds = gauge_kinds(rep1.schema, rep1.n);
  const int n = rep1.n;

  auto value = [&](const std::vector<Matrix>& g) {
    const std::vector<Matrix> moved = gauge_transform(g, rep1);
    double f = 0.0;
    for (size_t i = 0; i < moved.size(); ++i) f += (moved[i] - rep2.matrices[i]).squaredNorm();
    return f;
  };
  auto egrad = [&](const std::vector<Matrix>& g) {
    std::vector<Matrix> grad(g.size(), Matrix::Zero(n, n));
    for (size_t i = 0; i < rep1.matrices.size(); ++i) {
      const Generator& gen = rep1.schema.generators[i];
      Matrix right = g[gen.gauge_right];
      if (gen.gauge_right_conjugated) right = right.conjugate();
      const Matrix right_inv = right.inverse();
      const Matrix x = rep1.matrices[i] * right_inv;
      const Matrix f = g[gen.gauge_left] * x;
      const Matrix delta = f - rep2.matrices[i];
      grad[gen.gauge_left] += 2.0 * delta * x.adjoint();
      const Matrix y = g[gen.gauge_left] * rep1.matrices[i];
      const Matrix q = -(right_inv * delta.adjoint() * y * right_inv);
      if (gen.gauge_right_conjugated)
        grad[gen.gauge_right] += 2.0 * q.transpose();
      else
        grad[gen.gauge_right] += 2.0 * q.adjoint();
    }
    return grad;
  };
  auto rvec = [&](const std::vector<Matrix>& g) {
    const std::vector<Matrix> moved = gauge_transform(g, rep1);
    Eigen::VectorXd r(static_cast<int>(moved.size()) * 2 * n * n);
    for (size_t i = 0; i < moved.size(); ++i)
      r.segment(static_cast<int>(i) * 2 * n * n, 2 * n * n) =
          realify(moved[i] - rep2.matrices[i]);
    return r;
  };
  const std::vector<bool> mask(vkinds.size(), true);
  auto jac = [&](const std::vector<Matrix>& g) {
    const auto basis = product_tangent_basis(vkinds, g, mask);
    Eigen::MatrixXd j(static_cast<int>(rep1.matrices.size()) * 2 * n * n,
                      static_cast<int>(basis.size()));
    for (size_t b = 0; b < basis.size(); ++b) {
      const int v = basis[b].first;
      const Matrix xi = g[v].adjoint() * basis[b].second;  // algebra direction at g_v
      for (size_t i = 0; i < rep1.matrices.size(); ++i) {
        const Generator& gen = rep1.schema.generators[i];
        Matrix right = g[gen.gauge_right];
        if (gen.gauge_right_conjugated) right = right.conjugate();
        const Matrix right_inv = right.inverse();
        Matrix d = Matrix::Zero(n, n);
        if (gen.gauge_left == v)
          d += g[gen.gauge_left] * xi * rep1.matrices[i] * right_inv;
        if (gen.gauge_right == v) {
          Matrix cxi = xi;
          if (gen.gauge_right_conjugated) cxi = cxi.conjugate();
          d -= g[gen.gauge_left] * rep1.matrices[i] * right_inv * cxi;
        }
        j.block(static_cast<int>(i) * 2 * n * n, static_cast<int>(b), 2 * n * n, 1) = realify(d);
      }
    }
    return j;
  };

  AlignResult best;
  best.gauge = identity_gauge(rep1);
  best.distance = std::numeric_limits<double>::infinity();
  for (int init = 0; init <= extra_inits; ++init) {
    std::vector<Matrix> g;
    if (init == 0) {
      g.assign(vkinds.size(), Matrix::Identity(n, n));
    } else {
      Rng rng(seed ^ static_cast<std::uint64_t>(init));
      g.clear();
      for (const GroupKind& kind : vkinds) g.push_back(haar_sample(kind, rng));
    }
    MinimizeOptions mopts;
    mopts.max_iters = 500;
    mopts.target = 1e-22;
    double f = riemannian_minimize(value, egrad, vkinds, g, mask, mopts);
    if (f < 1e-2) f = gauss_newton(rvec, jac, vkinds, g, mask, 30, 1e-24);
    if (f < best.distance) {
      best.distance = f;
      best.gauge.factors = g;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Trace invariants.

std::vector<cxd> trace_invariants(const Representation& rep, int max_len) {
  if (max_len < 1) throw std::invalid_argument("trace_invariants: max_len must be >= 1");
  const int ngen = static_cast<int>(rep.schema.generators.size());
  std::vector<WordLetter> alphabet;
  for (int g = 0; g < ngen; ++g) {
    alphabet.push_back({g, 1, false});
    alphabet.push_back({g, -1, rep.schema.generators[g].epsilon == 1});
  }
  std::vector<cxd> traces;
  TwistedWord word;
  // Length by length, depth-first in canonical letter order.
  std::function<void(int)> walk = [&](int remaining) {
    if (remaining == 0) {
      if (word_is_closed(rep.schema, word)) {
        const ExtendedUnitaryElement e = evaluate_word(word, rep.matrices, rep.schema, rep.n);
        traces.push_back(e.matrix.trace());
      }
      return;
    }
    for (const WordLetter& l : alphabet) {
      word.push_back(l);
      walk(remaining - 1);
      word.pop_back();
    }
  };
  for (int len = 1; len <= max_len; ++len) walk(len);
  return traces;
}

// ---------------------------------------------------------------------------
// Moduli dimension estimate.

namespace {

// Rank with the cutoff anchored at the unit scale: basis directions have
// norm one, so honest singular values are O(1) while a differential that
// vanishes identically leaves only rounding noise behind.
int anchored_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cut = rel_tol * std::max(sv.size() ? sv(0) : 0.0, 1.0);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

}  // namespace

int estimate_moduli_dimension(const Representation& rep, double rank_rel_tol) {
  if (residual(rep) >= 1e-10)
    throw invalid_state("estimate_moduli_dimension requires a converged representation");
  Representation work = rep;
  std::vector<bool> all(work.matrices.size(), true);
  polish(work, all);

  const std::vector<GroupKind> kinds = generator_kinds(work.schema, work.n);
  const WordObjective obj = relator_objective(work);
  const int n = work.n;
  const auto basis = product_tangent_basis(kinds, work.matrices, all);

  Eigen::MatrixXd j_rel(2 * n * n, static_cast<int>(basis.size()));
  for (size_t b = 0; b < basis.size(); ++b)
    j_rel.col(static_cast<int>(b)) =
        realify(obj.directional(0, work.matrices, basis[b].first, basis[b].second));
  const int rank_rel = anchored_rank(j_rel, rank_rel_tol);

  const std::vector<GroupKind> vkinds = gauge_kinds(work.schema, n);
  int gauge_cols = 0;
  for (const GroupKind& k : vkinds) gauge_cols += k.tangent_dim();
  Eigen::MatrixXd j_gauge(static_cast<int>(work.matrices.size()) * 2 * n * n, gauge_cols);
  int col = 0;
  for (size_t v = 0; v < vkinds.size(); ++v) {
    for (const Matrix& xi : tangent_basis(vkinds[v], Matrix::Identity(n, n))) {
      for (size_t i = 0; i < work.matrices.size(); ++i) {
        const Generator& gen = work.schema.generators[i];
        Matrix d = Matrix::Zero(n, n);
        if (gen.gauge_left == static_cast<int>(v)) d += xi * work.matrices[i];
        if (gen.gauge_right == static_cast<int>(v)) {
          Matrix cxi = xi;
          if (gen.gauge_right_conjugated) cxi = cxi.conjugate();
          d -= work.matrices[i] * cxi;
        }
        j_gauge.block(static_cast<int>(i) * 2 * n * n, col, 2 * n * n, 1) = realify(d);
      }
      ++col;
    }
  }
  const int rank_gauge = anchored_rank(j_gauge, rank_rel_tol);

  int dim_t = 0;
  for (const GroupKind& k : kinds) dim_t += k.tangent_dim();
  return dim_t - rank_rel - rank_gauge;
}

// ---------------------------------------------------------------------------
// Connectedness probe.

namespace {

Matrix unitary_log(const Matrix& u) {
  Eigen::ComplexSchur<Matrix> schur(u);
  Matrix d = Matrix::Zero(u.rows(), u.rows());
  for (int i = 0; i < u.rows(); ++i) d(i, i) = cxd(0, std::arg(schur.matrixT()(i, i)));
  return schur.matrixU() * d * schur.matrixU().adjoint();
}

}  // namespace

ConnectednessReport connectedness_probe(const CurveTopology& topology, Structure structure,
                                        int n, int k, std::uint64_t seed, int starts,
                                        int waypoints, double bound) {
  ConnectednessReport report;
  std::vector<Representation> sols;
  SolveOptions opts;
  opts.starts = 1;
  for (int s = 0; s < starts; ++s) {
    SolveResult r = solve(topology, structure, n, k, seed ^ static_cast<std::uint64_t>(s), opts);
    if (r.converged) sols.push_back(std::move(r.rep));
  }
  report.converged_starts = static_cast<int>(sols.size());

  const std::vector<GroupKind> kinds =
      sols.empty() ? std::vector<GroupKind>{} : generator_kinds(sols[0].schema, n);
  for (size_t a = 0; a < sols.size(); ++a) {
    for (size_t b = a + 1; b < sols.size(); ++b) {
      ++report.pairs_checked;
      // Gauge-align the far end first, then relax geodesic waypoints onto
      // the variety and record the worst residual along the path.
      const AlignResult al = orbit_align(sols[a], sols[b]);
      const Representation start = apply_gauge(al.gauge, sols[a]);
      double worst = 0.0;
      bool ok = true;
      for (int w = 1; w <= waypoints; ++w) {
        const double t = static_cast<double>(w) / (waypoints + 1);
        Representation mid = start;
        for (size_t i = 0; i < mid.matrices.size(); ++i) {
          const Matrix theta =
              unitary_log(start.matrices[i].adjoint() * sols[b].matrices[i]);
          const Matrix xi = project_tangent(kinds[i], Matrix::Identity(n, n).eval(),
                                            Matrix(t * theta));
          mid.matrices[i] = start.matrices[i] * expm_skew(Matrix(xi));
        }
        std::vector<bool> all(mid.matrices.size(), true);
        const double res = polish(mid, all, 12);
        worst = std::max(worst, res);
        if (res > bound) ok = false;
      }
      report.worst_path_residual = std::max(report.worst_path_residual, worst);
      if (ok)
        ++report.pairs_joined;
      else
        report.flagged.push_back("pair (" + std::to_string(a) + "," + std::to_string(b) +
                                 ") not joined below " + std::to_string(bound));
    }
  }
  return report;
}

}  // namespace rqv
