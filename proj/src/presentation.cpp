#include "rqv/presentation.hpp"

#include <cmath>

namespace rqv {

void CurveTopology::validate() const {
  if (g < 0) throw std::invalid_argument("genus must be nonnegative");
  switch (kind) {
    case CurveKind::Type0:
      if (r != 0) throw std::invalid_argument("type 0 curves have no real circles");
      break;
    case CurveKind::TypeI:
      if (r < 1) throw std::invalid_argument("type I curves need r >= 1");
      if ((g + 1 - r) % 2 != 0 || g + 1 - r < 0)
        throw std::invalid_argument("type I requires g + 1 - r even and nonnegative");
      break;
    case CurveKind::TypeII:
      if (r < 1) throw std::invalid_argument("type II curves need r >= 1");
      if ((g - r) % 2 != 0 || g - r < 0 || r > g)
        throw std::invalid_argument("type II requires g - r even, 0 <= r <= g");
      break;
  }
}

bool CurveTopology::valid() const {
  try {
    validate();
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

int CurveTopology::ghat() const {
  switch (kind) {
    case CurveKind::Type0: return g / 2;
    case CurveKind::TypeI: return (g + 1 - r) / 2;
    case CurveKind::TypeII: return (g - r) / 2;
  }
  return 0;
}

int CurveTopology::gauge_factors() const {
  switch (kind) {
    case CurveKind::Type0: return 1;
    case CurveKind::TypeI: return r;
    case CurveKind::TypeII: return r + 1;
  }
  return 0;
}

int GeneratorSchema::index_of(const std::string& label) const {
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i].label == label) return static_cast<int>(i);
  return -1;
}

namespace {

void append_handle_pairs(GeneratorSchema& s, int ghat) {
  for (int i = 1; i <= ghat; ++i) {
    s.generators.push_back({"A" + std::to_string(i), 0, GroupFamily::Unitary, 0, 0, false});
    s.generators.push_back({"B" + std::to_string(i), 0, GroupFamily::Unitary, 0, 0, false});
  }
}

}  // namespace

GeneratorSchema generator_schema(const CurveTopology& topology, Structure structure) {
  topology.validate();
  GeneratorSchema s;
  s.topology = topology;
  s.structure = structure;
  const GroupFamily boundary = structure == Structure::Quaternionic
                                   ? GroupFamily::QuaternionicUnitary
                                   : GroupFamily::Orthogonal;
  const int ghat = topology.ghat();
  switch (topology.kind) {
    case CurveKind::Type0:
      s.gauge_families = {GroupFamily::Unitary};
      append_handle_pairs(s, ghat);
      if (topology.g % 2 == 0) {
        s.generators.push_back({"C", 1, GroupFamily::Unitary, 0, 0, true});
      } else {
        s.generators.push_back({"C", 0, GroupFamily::Unitary, 0, 0, false});
        s.generators.push_back({"D", 1, GroupFamily::Unitary, 0, 0, true});
      }
      break;
    case CurveKind::TypeI:
      s.gauge_families.assign(topology.r, boundary);
      append_handle_pairs(s, ghat);
      for (int j = 1; j <= topology.r; ++j)
        s.generators.push_back({"C" + std::to_string(j), 0, boundary, j - 1, j - 1, false});
      for (int j = 2; j <= topology.r; ++j)
        s.generators.push_back({"D" + std::to_string(j), 0, GroupFamily::Unitary, 0, j - 1, false});
      break;
    case CurveKind::TypeII:
      s.gauge_families.assign(topology.r + 1, boundary);
      s.gauge_families[0] = GroupFamily::Unitary;
      append_handle_pairs(s, ghat);
      s.generators.push_back({"C0", 1, GroupFamily::Unitary, 0, 0, true});
      for (int j = 1; j <= topology.r; ++j)
        s.generators.push_back({"C" + std::to_string(j), 0, boundary, j, j, false});
      for (int j = 1; j <= topology.r; ++j)
        s.generators.push_back({"D" + std::to_string(j), 0, GroupFamily::Unitary, 0, j, false});
      break;
  }
  return s;
}

namespace {

void append_commutator(TwistedWord& w, int a, int b) {
  w.push_back({a, 1, false});
  w.push_back({b, 1, false});
  w.push_back({a, -1, false});
  w.push_back({b, -1, false});
}

TwistedWord relator_word(const GeneratorSchema& s) {
  const CurveTopology& t = s.topology;
  TwistedWord w;
  const int ghat = t.ghat();
  for (int i = 0; i < ghat; ++i) append_commutator(w, 2 * i, 2 * i + 1);
  const int base = 2 * ghat;
  switch (t.kind) {
    case CurveKind::Type0:
      if (t.g % 2 == 0) {
        w.push_back({base, 1, false});  // C
        w.push_back({base, 1, false});  // picks up conjugation from the grade
      } else {
        const int c = base, d = base + 1;
        w.push_back({c, 1, false});
        w.push_back({d, 1, false});
        w.push_back({c, 1, false});
        w.push_back({d, -1, true});  // extended-group inverse of the path generator
      }
      break;
    case CurveKind::TypeI: {
      const int c1 = base;
      w.push_back({c1, 1, false});
      for (int j = 2; j <= t.r; ++j) {
        const int cj = base + (j - 1);
        const int dj = base + t.r + (j - 2);
        w.push_back({dj, 1, false});
        w.push_back({cj, 1, false});
        w.push_back({dj, -1, false});
      }
      break;
    }
    case CurveKind::TypeII: {
      const int c0 = base;
      w.push_back({c0, 1, false});
      w.push_back({c0, 1, false});
      for (int j = 1; j <= t.r; ++j) {
        const int cj = base + j;
        const int dj = base + t.r + j;
        w.push_back({dj, 1, false});
        w.push_back({cj, 1, false});
        w.push_back({dj, -1, false});
      }
      break;
    }
  }
  return w;
}

}  // namespace

int calibrate_sign(const CurveTopology& topology) {
  topology.validate();
  const int n = topology.kind == CurveKind::Type0 ? 1 : 2;
  GeneratorSchema s = generator_schema(topology, Structure::Quaternionic);
  const TwistedWord w = relator_word(s);
  std::vector<Matrix> identity(s.generators.size(), Matrix::Identity(n, n));
  const ExtendedUnitaryElement e = evaluate_word(w, identity, s, n);
  const double re = e.matrix(0, 0).real();
  return re >= 0 ? 1 : -1;
}

Relator relator(const CurveTopology& topology, Structure structure) {
  GeneratorSchema s = generator_schema(topology, structure);
  Relator rel;
  rel.word = relator_word(s);
  rel.sign = structure == Structure::Quaternionic ? calibrate_sign(topology) : 1;
  return rel;
}

cxd central_target(int n, int k) {
  if (n < 1) throw std::invalid_argument("central_target: rank must be positive");
  return std::polar(1.0, M_PI * static_cast<double>(k) / static_cast<double>(n));
}

ExtendedUnitaryElement evaluate_word(const TwistedWord& word,
                                     const std::vector<Matrix>& assignment,
                                     const std::vector<int>& epsilons,
                                     Structure structure, int n) {
  ExtendedUnitaryElement acc{Matrix::Identity(n, n), 0};
  double sign = 1.0;
  const bool quaternionic = structure == Structure::Quaternionic;
  for (const WordLetter& l : word) {
    if (l.generator < 0 || l.generator >= static_cast<int>(assignment.size()))
      throw std::invalid_argument("evaluate_word: letter refers to a missing generator");
    const Matrix& m = assignment[l.generator];
    if (m.rows() != n || m.cols() != n)
      throw std::invalid_argument("evaluate_word: assignment has the wrong shape");
    const int eps = epsilons[l.generator];
    Matrix v = l.exponent >= 0 ? m : Matrix(m.inverse());
    if (l.conjugate) v = v.conjugate();
    if (quaternionic && eps == 1) {
      if (acc.epsilon == 1) sign = -sign;       // odd-grade pair composition
      if (l.exponent < 0) sign = -sign;         // rho(x^-1) = -rho(x)^-1 on odd grades
    }
    if (acc.epsilon == 1) v = v.conjugate();
    acc.matrix = acc.matrix * v;
    acc.epsilon ^= eps;
  }
  acc.matrix *= sign;
  return acc;
}

ExtendedUnitaryElement evaluate_word(const TwistedWord& word,
                                     const std::vector<Matrix>& assignment,
                                     const GeneratorSchema& schema, int n) {
  std::vector<int> eps(schema.generators.size());
  for (size_t i = 0; i < schema.generators.size(); ++i) eps[i] = schema.generators[i].epsilon;
  return evaluate_word(word, assignment, eps, schema.structure, n);
}

bool word_is_closed(const GeneratorSchema& schema, const TwistedWord& word) {
  if (word.empty()) return true;
  // Track, through the running grade, which gauge factor (and whether its
  // conjugate) is attached on each side of every letter; the trace of the
  // evaluated word is gauge-invariant when the chain closes, and the word is
  // based when it closes at gauge factor 0.
  int tau = 0;  // grade accumulated so far
  int first_v = -1, first_p = 0;
  int prev_v = -1, prev_p = 0;
  bool have_prev = false;
  for (const WordLetter& l : word) {
    const Generator& gen = schema.generators[l.generator];
    int left_v, left_p, right_v, right_p;
    if (l.exponent >= 0) {
      left_v = gen.gauge_left;
      left_p = l.conjugate ? 1 : 0;
      right_v = gen.gauge_right;
      right_p = (l.conjugate ? 1 : 0) ^ (gen.gauge_right_conjugated ? 1 : 0);
    } else {
      left_v = gen.gauge_right;
      left_p = (l.conjugate ? 1 : 0) ^ (gen.gauge_right_conjugated ? 1 : 0);
      right_v = gen.gauge_left;
      right_p = l.conjugate ? 1 : 0;
    }
    left_p ^= tau;
    right_p ^= tau;
    if (!have_prev) {
      first_v = left_v;
      first_p = left_p;
      have_prev = true;
    } else if (prev_v != left_v || prev_p != left_p) {
      return false;
    }
    prev_v = right_v;
    prev_p = right_p;
    tau ^= gen.epsilon;
  }
  return prev_v == first_v && prev_p == first_p && tau == 0 && first_v == 0;
}

namespace {

void append_square(TwistedWord& w, int i) {
  w.push_back({i, 1, false});
  w.push_back({i, 1, false});
}

}  // namespace

GammaPresentation gamma_presentation(const CurveTopology& topology, PresentationStyle style) {
  topology.validate();
  GammaPresentation p;
  const int g = topology.g, r = topology.r;
  if (style == PresentationStyle::EFG) {
    switch (topology.kind) {
      case CurveKind::Type0: {
        for (int i = 1; i <= g + 1; ++i) p.generators.push_back({"d" + std::to_string(i), 1});
        TwistedWord w;
        for (int i = 0; i <= g; ++i) append_square(w, i);
        p.relations.push_back(w);
        break;
      }
      case CurveKind::TypeI: {
        const int m = r + topology.ghat();
        for (int i = 1; i <= m; ++i) p.generators.push_back({"d" + std::to_string(i), 0});
        for (int i = 1; i <= m; ++i)
          p.generators.push_back({"e" + std::to_string(i), i <= r ? 1 : 0});
        for (int i = 0; i < r; ++i) {
          TwistedWord sq;
          append_square(sq, m + i);
          p.relations.push_back(sq);
          TwistedWord comm;
          const int ei = m + i;
          comm.push_back({i, 1, false});
          comm.push_back({ei, 1, false});
          comm.push_back({i, -1, false});
          comm.push_back({ei, -1, true});
          p.relations.push_back(comm);
        }
        TwistedWord w;
        for (int i = 0; i < r; ++i) w.push_back({i, 1, false});
        for (int i = r; i < m; ++i) {
          w.push_back({i, 1, false});
          w.push_back({m + i, 1, false});
          w.push_back({i, -1, false});
          w.push_back({m + i, -1, false});
        }
        p.relations.push_back(w);
        break;
      }
      case CurveKind::TypeII: {
        const int khat = g + 1 - r;  // crosscap genus of the quotient
        for (int i = 1; i <= r; ++i) p.generators.push_back({"d" + std::to_string(i), 0});
        for (int i = 1; i <= r + khat; ++i) p.generators.push_back({"e" + std::to_string(i), 1});
        for (int i = 0; i < r; ++i) {
          TwistedWord sq;
          append_square(sq, r + i);
          p.relations.push_back(sq);
          TwistedWord comm;
          comm.push_back({i, 1, false});
          comm.push_back({r + i, 1, false});
          comm.push_back({i, -1, false});
          comm.push_back({r + i, -1, true});
          p.relations.push_back(comm);
        }
        TwistedWord w;
        for (int i = 0; i < r; ++i) w.push_back({i, 1, false});
        for (int i = r; i < r + khat; ++i) append_square(w, r + i);
        p.relations.push_back(w);
        break;
      }
    }
    return p;
  }

  // Standard presentations with one extra path generator.
  for (int i = 1; i <= g; ++i) {
    p.generators.push_back({"a" + std::to_string(i), 0});
    p.generators.push_back({"b" + std::to_string(i), 0});
  }
  p.generators.push_back({"c", 1});
  const int c = 2 * g;
  TwistedWord surface;
  for (int i = 0; i < g; ++i) append_commutator(surface, 2 * i, 2 * i + 1);
  if (topology.kind == CurveKind::Type0 && g % 2 == 0) {
    TwistedWord w;
    for (int i = 0; i < g / 2; ++i) append_commutator(w, 2 * i, 2 * i + 1);
    append_square(w, c);
    p.relations.push_back(w);
    p.relations.push_back(surface);
  } else if (topology.kind == CurveKind::Type0) {
    const int ghat = (g - 1) / 2;
    TwistedWord w;  // c^2 = a_{ghat+1}
    append_square(w, c);
    w.push_back({2 * ghat, -1, false});
    p.relations.push_back(w);
    p.relations.push_back(surface);
  } else {
    TwistedWord w;  // c^2 = 1; the conjugation action is left unspecified
    append_square(w, c);
    p.relations.push_back(w);
    p.relations.push_back(surface);
  }
  return p;
}

const char* to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::Type0: return "type0";
    case CurveKind::TypeI: return "type1";
    case CurveKind::TypeII: return "type2";
  }
  return "?";
}

const char* to_string(Structure structure) {
  return structure == Structure::Real ? "real" : "quaternionic";
}

}  // namespace rqv
