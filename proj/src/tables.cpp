#include "rqv/tables.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rqv {

void FpAbelianGroup::canonicalize() { std::sort(torsion.begin(), torsion.end()); }

std::string FpAbelianGroup::str() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (int t : torsion) {
    if (!first) os << " + ";
    os << "Z/" << t;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

const char* to_string(SpaceKind space) {
  switch (space) {
    case SpaceKind::BasedGauge: return "based";
    case SpaceKind::FullGauge: return "full";
    case SpaceKind::ProjectiveGauge: return "projective";
    case SpaceKind::Moduli: return "moduli";
    case SpaceKind::ModuliFixedDet: return "moduli-fixed-det";
  }
  return "?";
}

namespace {

FpAbelianGroup fp(int free_rank, std::vector<int> torsion = {}) {
  FpAbelianGroup g{free_rank, std::move(torsion)};
  g.canonicalize();
  return g;
}

std::vector<int> z2s(int count, bool plus_z4 = false) {
  std::vector<int> t(std::max(count, 0), 2);
  if (plus_z4) t.push_back(4);
  return t;
}

// Column index: 0 = based, 1 = full, 2 = projective.
FpAbelianGroup gauge_entry(Structure structure, CurveKind kind, int space, int degree, int n,
                           int g, int r, bool fixed_det) {
  const bool even = n % 2 == 0;
  if (fixed_det) {
    if (n < 2)
      throw table_undetermined("fixed-determinant tables cover n > 1 only");
    if (structure == Structure::Real && kind == CurveKind::Type0) {
      if (degree == 1) return fp(0);
      if (space <= 1) return fp(1);
      return even ? fp(1, {2}) : fp(1);
    }
    if (structure == Structure::Real) {  // types I and II coincide here
      if (degree == 1) return n == 2 ? fp(r) : fp(0, z2s(r));
      if (space == 0) return fp(1);
      if (space == 1) return n == 2 ? fp(r + 1) : fp(1, z2s(r));
      if (n == 2) return fp(r + 1);
      if (!even) return fp(1, z2s(r));
      return n % 4 == 0 ? fp(1, z2s(r + 1)) : fp(1, z2s(r - 1, true));
    }
    // Quaternionic, fixed determinant.
    if (degree == 1) return fp(0);
    if (space <= 1) return fp(1);
    if (kind == CurveKind::Type0 && !even) return fp(1);
    return fp(1, {2});
  }

  if (structure == Structure::Real && kind == CurveKind::Type0) {
    if (degree == 1) {
      if (space == 0) return fp(g + 1);
      if (space == 1) return fp(g, {2});
      return even ? fp(g, {2}) : fp(g);
    }
    if (n == 1) return fp(0);
    if (space <= 1) return fp(1);
    return even ? fp(1, {2}) : fp(1);
  }
  if (structure == Structure::Real) {
    const bool type2 = kind == CurveKind::TypeII;
    if (degree == 1) {
      if (space == 0) {
        const int base = type2 ? g + 1 : g;
        if (n == 1) return fp(base);
        if (n == 2) return fp(base + r);
        return fp(base, z2s(r));
      }
      if (space == 1) {
        if (n == 1) return fp(g, {2});
        if (n == 2) return fp(g + r, {2});
        return fp(g, z2s(r + 1));
      }
      if (n == 1) return fp(g);
      if (n == 2) return fp(g + r, {2});
      return even ? fp(g, z2s(r + 1)) : fp(g, z2s(r));
    }
    if (n == 1) return fp(0);
    if (space == 0) return fp(1);
    if (space == 1) return n == 2 ? fp(r + 1) : fp(1, z2s(r));
    if (n == 2) return fp(r + 1);
    if (!even) return fp(1, z2s(r));
    return n % 4 == 0 ? fp(1, z2s(r + 1)) : fp(1, z2s(r - 1, true));
  }

  // Quaternionic.
  if (kind == CurveKind::Type0) {
    if (degree == 1) {
      if (space == 0) return fp(g + 1);
      if (space == 1) return fp(g, {2});
      return even ? fp(g, {2}) : fp(g);
    }
    if (n == 1) return fp(0);
    if (space <= 1) return fp(1);
    return even ? fp(1, {2}) : fp(1);
  }
  if (kind == CurveKind::TypeI) {
    if (degree == 1) return fp(g);
    return space == 2 ? fp(1, {2}) : fp(1);
  }
  // Quaternionic type II.
  if (degree == 1) {
    if (space == 0) return fp(g + 1);
    return fp(g, {2});
  }
  return space == 2 ? fp(1, {2}) : fp(1);
}

// Entries of the moduli-space table (coprime regime), transcribed
// independently of the gauge table.
FpAbelianGroup moduli_entry(Structure structure, CurveKind kind, int degree, int n, int g,
                            int r, bool fixed_det) {
  const bool even = n % 2 == 0;
  if (structure == Structure::Real && kind == CurveKind::Type0) {
    if (fixed_det) {
      if (degree == 1) return fp(0);
      return even ? fp(1, {2}) : fp(1);
    }
    if (degree == 1) return even ? fp(g, {2}) : fp(g);
    return even ? fp(1, {2}) : fp(1);
  }
  if (structure == Structure::Real) {
    if (fixed_det) {
      if (degree == 1) return n == 2 ? fp(r) : fp(0, z2s(r));
      if (n == 2) return fp(r + 1);
      if (!even) return fp(1, z2s(r));
      return n % 4 == 0 ? fp(1, z2s(r + 1)) : fp(1, z2s(r - 1, true));
    }
    if (degree == 1) {
      if (n == 2) return fp(g + r, {2});
      return even ? fp(g, z2s(r + 1)) : fp(g, z2s(r));
    }
    if (n == 2) return fp(r + 1);
    if (!even) return fp(1, z2s(r));
    return n % 4 == 0 ? fp(1, z2s(r + 1)) : fp(1, z2s(r - 1, true));
  }
  // Quaternionic.
  if (fixed_det) {
    if (degree == 1) return fp(0);
    if (kind == CurveKind::Type0 && n % 2 != 0) return fp(1);
    return fp(1, {2});
  }
  if (kind == CurveKind::Type0) {
    if (degree == 1) return even ? fp(g, {2}) : fp(g);
    return even ? fp(1, {2}) : fp(1);
  }
  if (kind == CurveKind::TypeI) return degree == 1 ? fp(g) : fp(1, {2});
  return degree == 1 ? fp(g, {2}) : fp(1, {2});
}

void validate_query(const TableQuery& q) {
  q.topology.validate();
  if (q.n < 1) throw std::invalid_argument("table query needs a positive rank");
  if (q.degree != 1 && q.degree != 2)
    throw std::invalid_argument("only the first and second homotopy groups are tabulated");
  if (q.structure == Structure::Quaternionic && q.topology.kind != CurveKind::Type0 &&
      q.n % 2 != 0)
    throw std::invalid_argument("quaternionic bundles on curves with real points need even rank");
  if (q.space == SpaceKind::Moduli && q.fixed_det)
    throw std::invalid_argument("moduli query with fixed_det set; use ModuliFixedDet");
  if (q.space == SpaceKind::ModuliFixedDet && !q.fixed_det)
    throw std::invalid_argument("fixed-determinant moduli query needs fixed_det set");
}

bool moduli_regime_full(int n, int g, int k) {
  return std::gcd(n, std::abs(k)) == 1 && (n - 1) * (g - 1) > 2;
}

bool moduli_regime_pi1_extra(int n, int g, int k) {
  return k == 0 && ((n == 3 && g == 2) || (n == 2 && g == 3));
}

}  // namespace

FpAbelianGroup lookup(const TableQuery& q) {
  validate_query(q);
  const int g = q.topology.g, r = q.topology.r;
  switch (q.space) {
    case SpaceKind::BasedGauge:
    case SpaceKind::FullGauge:
    case SpaceKind::ProjectiveGauge: {
      const int col = q.space == SpaceKind::BasedGauge ? 0
                      : q.space == SpaceKind::FullGauge ? 1
                                                        : 2;
      return gauge_entry(q.structure, q.topology.kind, col, q.degree, q.n, g, r, q.fixed_det);
    }
    case SpaceKind::Moduli:
    case SpaceKind::ModuliFixedDet: {
      const bool full = moduli_regime_full(q.n, g, q.k);
      if (q.degree == 1 && !full && !moduli_regime_pi1_extra(q.n, g, q.k))
        throw table_undetermined(
            "moduli homotopy outside the coprime regime; the tables give only quotients");
      if (q.degree == 2 && !full)
        throw table_undetermined(
            "second moduli homotopy is only determined in the coprime regime");
      return moduli_entry(q.structure, q.topology.kind, q.degree, q.n, g, r,
                          q.space == SpaceKind::ModuliFixedDet);
    }
  }
  throw std::invalid_argument("unknown table space");
}

namespace {

bool torsion_difference_is_small(const FpAbelianGroup& a, const FpAbelianGroup& b) {
  // Symmetric multiset difference of the torsion lists may contain only
  // 2- and 4-torsion.
  std::vector<int> ta = a.torsion, tb = b.torsion;
  for (auto it = ta.begin(); it != ta.end();) {
    auto jt = std::find(tb.begin(), tb.end(), *it);
    if (jt != tb.end()) {
      tb.erase(jt);
      it = ta.erase(it);
    } else {
      ++it;
    }
  }
  for (int t : ta)
    if (t != 2 && t != 4) return false;
  for (int t : tb)
    if (t != 2 && t != 4) return false;
  return true;
}

std::vector<CurveTopology> audit_topologies() {
  std::vector<CurveTopology> tops;
  for (int g = 2; g <= 5; ++g) {
    tops.push_back({CurveKind::Type0, g, 0});
    for (int r = 1; r <= g + 1; ++r)
      if ((g + 1 - r) % 2 == 0) tops.push_back({CurveKind::TypeI, g, r});
    for (int r = 1; r <= g; ++r)
      if ((g - r) % 2 == 0) tops.push_back({CurveKind::TypeII, g, r});
  }
  return tops;
}

std::string describe(const TableQuery& q) {
  std::ostringstream os;
  os << to_string(q.structure) << " " << to_string(q.topology.kind) << " g=" << q.topology.g
     << " r=" << q.topology.r << " n=" << q.n << " pi" << q.degree << " "
     << to_string(q.space) << (q.fixed_det ? " fixed-det" : "");
  return os.str();
}

}  // namespace

AuditReport consistency_audit_with(const std::function<FpAbelianGroup(const TableQuery&)>& fn) {
  AuditReport report;
  for (const CurveTopology& top : audit_topologies()) {
    for (Structure structure : {Structure::Real, Structure::Quaternionic}) {
      for (int n = 1; n <= 6; ++n) {
        if (structure == Structure::Quaternionic && top.kind != CurveKind::Type0 && n % 2 != 0)
          continue;
        // (a) the based-gauge fundamental group of the simplest real case.
        if (structure == Structure::Real && top.kind == CurveKind::Type0) {
          TableQuery q{structure, top, SpaceKind::BasedGauge, false, 1, n, 0};
          ++report.cells_checked;
          if (!(fn(q) == FpAbelianGroup{top.g + 1, {}}))
            report.mismatches.push_back("based pi1 should be Z^{g+1}: " + describe(q));
        }
        // (b) projective vs full entries differ only in 2- or 4-torsion.
        for (bool fixed_det : {false, true}) {
          if (fixed_det && n == 1) continue;
          for (int degree : {1, 2}) {
            TableQuery qf{structure, top, SpaceKind::FullGauge, fixed_det, degree, n, 0};
            TableQuery qp{structure, top, SpaceKind::ProjectiveGauge, fixed_det, degree, n, 0};
            ++report.cells_checked;
            const FpAbelianGroup a = fn(qf), b = fn(qp);
            if (a.free_rank != b.free_rank || !torsion_difference_is_small(a, b))
              report.mismatches.push_back("full vs projective differ beyond 2/4 torsion: " +
                                          describe(qp) + " (" + a.str() + " vs " + b.str() + ")");
          }
        }
        // (c) moduli entries equal projective-gauge ones where defined.
        if (n >= 2 && (n - 1) * (top.g - 1) > 2) {
          for (bool fixed_det : {false, true}) {
            for (int degree : {1, 2}) {
              TableQuery qm{structure, top,
                            fixed_det ? SpaceKind::ModuliFixedDet : SpaceKind::Moduli,
                            fixed_det, degree, n, 1};
              TableQuery qp{structure, top, SpaceKind::ProjectiveGauge, fixed_det, degree, n, 1};
              ++report.cells_checked;
              if (!(fn(qm) == fn(qp)))
                report.mismatches.push_back("moduli disagrees with projective gauge: " +
                                            describe(qm));
            }
          }
        }
      }
    }
  }
  return report;
}

AuditReport consistency_audit() {
  return consistency_audit_with([](const TableQuery& q) { return lookup(q); });
}

}  // namespace rqv
