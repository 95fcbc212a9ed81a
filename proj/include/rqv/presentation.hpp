#pragma once

#include "rqv/linalg.hpp"

#include <string>
#include <vector>

namespace rqv {

enum class Structure { Real, Quaternionic };

enum class CurveKind { Type0, TypeI, TypeII };

/// Topological type of a real curve: the kind of the involution together
/// with the genus g and the number r of fixed circles.
struct CurveTopology {
  CurveKind kind = CurveKind::Type0;
  int g = 0;
  int r = 0;

  /// Throws std::invalid_argument when the (kind, g, r) combination is not
  /// admissible (r = 0 for type 0; parity and range constraints otherwise).
  void validate() const;
  bool valid() const;

  /// Genus of the quotient half-surface.
  int ghat() const;

  /// Number of gauge factors: 1 (type 0), r (type I), r + 1 (type II).
  int gauge_factors() const;

  bool operator==(const CurveTopology&) const = default;
};

/// One generator of a moduli presentation.
struct Generator {
  std::string label;
  int epsilon = 0;  // 1 for path-type (antiunitary) generators
  GroupFamily family = GroupFamily::Unitary;
  int gauge_left = 0;
  int gauge_right = 0;
  bool gauge_right_conjugated = false;

  GroupKind group(int n) const { return {family, n}; }
};

struct GeneratorSchema {
  CurveTopology topology;
  Structure structure = Structure::Real;
  std::vector<Generator> generators;
  std::vector<GroupFamily> gauge_families;  // one per gauge factor

  int index_of(const std::string& label) const;  // -1 when absent
};

/// One letter of a word over a generator schema. A letter with
/// exponent -1 and `conjugate` set encodes the group inverse of a
/// path-type generator (the extended-group inverse of (M, 1) has matrix
/// conj(M)^-1).
struct WordLetter {
  int generator = 0;
  int exponent = 1;  // +1 or -1
  bool conjugate = false;
};

using TwistedWord = std::vector<WordLetter>;

/// Element of the extended unitary group: matrix part plus grade.
/// Multiplication: (M, e) (N, d) = (M conj^e(N), e xor d).
struct ExtendedUnitaryElement {
  Matrix matrix;
  int epsilon = 0;
};

struct Relator {
  TwistedWord word;
  int sign = 1;  // +1 for real structures; calibrated for quaternionic ones
};

/// Generator schema of the moduli presentation for the given topology and
/// structure (orthogonal boundary holonomies become quaternionic-unitary
/// ones in the quaternionic case).
GeneratorSchema generator_schema(const CurveTopology& topology, Structure structure);

/// The defining relator word of the presentation, with the scalar sign the
/// graded evaluation carries in the quaternionic case.
Relator relator(const CurveTopology& topology, Structure structure);

/// Sign of the quaternionic relator, fixed by evaluating the relation
/// through the graded product at the identity assignment (rank 1 for
/// type 0, rank 2 otherwise). Matches the parity laws of the topological
/// classification.
int calibrate_sign(const CurveTopology& topology);

/// exp(i pi k / n), the central monodromy encoding the degree.
cxd central_target(int n, int k);

/// Graded left-to-right product of a word in the extended unitary group.
/// Each letter contributes (conj^c(M^e), epsilon). For quaternionic
/// structures a scalar -1 enters whenever two odd-grade factors compose and
/// whenever an odd-grade generator appears inverted.
ExtendedUnitaryElement evaluate_word(const TwistedWord& word,
                                     const std::vector<Matrix>& assignment,
                                     const std::vector<int>& epsilons,
                                     Structure structure, int n);

ExtendedUnitaryElement evaluate_word(const TwistedWord& word,
                                     const std::vector<Matrix>& assignment,
                                     const GeneratorSchema& schema, int n);

/// True when the word is composable under the per-vertex gauge action and
/// closes at the base vertex with trivial conjugation parity; the trace of
/// the evaluated word is then gauge-invariant.
bool word_is_closed(const GeneratorSchema& schema, const TwistedWord& word);

enum class PresentationStyle { EFG, Standard };

struct GammaGenerator {
  std::string label;
  int epsilon = 0;
};

struct GammaPresentation {
  std::vector<GammaGenerator> generators;
  std::vector<TwistedWord> relations;
};

/// Abstract presentations of the equivariant fundamental group, in the
/// eta/delta form or the surface-standard form with one extra path
/// generator. The standard form for types I and II omits the unspecified
/// conjugation action and is not a complete presentation.
GammaPresentation gamma_presentation(const CurveTopology& topology, PresentationStyle style);

const char* to_string(CurveKind kind);
const char* to_string(Structure structure);

}  // namespace rqv
