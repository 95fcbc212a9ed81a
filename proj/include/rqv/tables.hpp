#pragma once

#include "rqv/presentation.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rqv {

/// Finitely presented abelian group: free rank plus torsion coefficients in
/// ascending order.
struct FpAbelianGroup {
  int free_rank = 0;
  std::vector<int> torsion;

  void canonicalize();
  std::string str() const;
  bool operator==(const FpAbelianGroup&) const = default;
};

enum class SpaceKind { BasedGauge, FullGauge, ProjectiveGauge, Moduli, ModuliFixedDet };

/// A query into the homotopy-group tables.
struct TableQuery {
  Structure structure = Structure::Real;
  CurveTopology topology;
  SpaceKind space = SpaceKind::FullGauge;
  bool fixed_det = false;
  int degree = 1;  // 1 or 2: which homotopy group
  int n = 2;
  int k = 0;  // bundle degree; used by moduli queries only
};

/// Raised for cells the source tables leave open (quotient caveats, regime
/// gaps), as opposed to queries that are malformed.
struct table_undetermined : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The tabulated homotopy group for the query. Throws invalid_argument on
/// meaningless queries and table_undetermined on regime gaps.
FpAbelianGroup lookup(const TableQuery& q);

struct AuditReport {
  std::vector<std::string> mismatches;
  int cells_checked = 0;
};

/// Cross-checks forced by the tables' own structure: the based-gauge
/// fundamental group in the simplest real case, full-vs-projective entries
/// differing only in 2- and 4-torsion, and moduli entries agreeing with the
/// projective gauge ones where both are defined.
AuditReport consistency_audit();
AuditReport consistency_audit_with(const std::function<FpAbelianGroup(const TableQuery&)>& fn);

const char* to_string(SpaceKind space);

}  // namespace rqv
