#pragma once

#include "rqv/solver.hpp"

#include <utility>

namespace rqv {

/// Cell complex of the curve with its involution. Face boundary words and
/// generator words are stored in display order: the word value is the
/// left-to-right product of edge transports, and the underlying path is
/// traversed from the last letter to the first.
struct EquivariantComplex {
  struct Vertex {
    int sigma = 0;   // involution image
    int circle = 0;  // fixed-circle label 1..r, or 0
  };
  struct Edge {
    std::string name;
    int tail = 0;
    int head = 0;
    int sigma = 0;   // involution image
    int circle = 0;  // fixed-circle label 1..r, or 0
  };
  struct Letter {
    int edge = 0;
    bool inverse = false;
  };
  using Word = std::vector<Letter>;
  struct GeneratorPath {
    std::string label;
    Word word;
    bool sigma_dressed = false;  // value is conj(M_base^-1 V) instead of V
  };

  CurveTopology topology;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Word> faces;
  std::vector<int> face_sigma;
  int base_vertex = 0;
  std::vector<GeneratorPath> generators;

  int euler_characteristic() const;
  int edge_index(const std::string& name) const;
  /// Start vertex of a letter's traversal (head for inverted letters).
  int letter_start(const Letter& l) const;
  int letter_end(const Letter& l) const;
  /// Checks involution consistency, the Euler characteristic, the fixed-set
  /// structure, and that every face boundary is a closed path.
  void validate() const;
};

EquivariantComplex build_complex(const CurveTopology& topology);

/// Edge transports plus antiunitary vertex lifts v -> M_v conj(v).
struct LatticeConnection {
  Structure structure = Structure::Real;
  int n = 1;
  std::vector<Matrix> transport;  // per edge
  std::vector<Matrix> lift;       // per vertex
};

struct ConnectionDefects {
  double unitarity = 0.0;
  double flatness = 0.0;
  double equivariance = 0.0;
  double sigma_square = 0.0;
  double worst() const;
};

ConnectionDefects connection_defects(const LatticeConnection& conn,
                                     const EquivariantComplex& complex);

/// Scalar s with M_{sigma v} conj(M_v) = s I, averaged over vertices.
cxd sigma_square_scalar(const LatticeConnection& conn, const EquivariantComplex& complex);

/// Value of a display-order word of edge letters.
Matrix word_transport(const LatticeConnection& conn, const EquivariantComplex& complex,
                      const EquivariantComplex::Word& word);

/// Diagnostic energy: the sum over faces of ||hol(face) - I||^2.
double plaquette_energy(const LatticeConnection& conn, const EquivariantComplex& complex);

/// Flat equivariant connection carrying the representation; requires a
/// converged representation with trivial central target.
LatticeConnection rep_to_connection(const Representation& rep,
                                    const EquivariantComplex& complex);

/// Holonomy representation of a valid connection, read at the given base
/// vertex (default: the canonical base; the sigma-image base is also
/// supported on doubled-vertex types and yields a gauge-equivalent point).
Representation connection_to_rep(const LatticeConnection& conn,
                                 const EquivariantComplex& complex, int base_vertex = -1);

/// Maximal disagreement of transports along homotopic path pairs between the
/// given vertices and their involution images (all faces are used to deform
/// paths). Zero on flat connections.
double path_independence_check(const LatticeConnection& conn, const EquivariantComplex& complex,
                               const std::vector<std::pair<int, int>>& vertex_pairs = {});

}  // namespace rqv
