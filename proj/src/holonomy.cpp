#include "rqv/holonomy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>

namespace rqv {

int EquivariantComplex::euler_characteristic() const {
  return static_cast<int>(vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(faces.size());
}

int EquivariantComplex::edge_index(const std::string& name) const {
  for (size_t i = 0; i < edges.size(); ++i)
    if (edges[i].name == name) return static_cast<int>(i);
  throw std::invalid_argument("no edge named " + name);
}

int EquivariantComplex::letter_start(const Letter& l) const {
  return l.inverse ? edges[l.edge].head : edges[l.edge].tail;
}

int EquivariantComplex::letter_end(const Letter& l) const {
  return l.inverse ? edges[l.edge].tail : edges[l.edge].head;
}

void EquivariantComplex::validate() const {
  topology.validate();
  const int nv = static_cast<int>(vertices.size());
  for (int v = 0; v < nv; ++v) {
    const int s = vertices[v].sigma;
    if (s < 0 || s >= nv || vertices[s].sigma != v)
      throw std::invalid_argument("vertex involution is not an involution");
    if ((s == v) != (vertices[v].circle > 0))
      throw std::invalid_argument("fixed vertices must carry a circle label");
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    const int s = ed.sigma;
    if (s < 0 || s >= static_cast<int>(edges.size()) || edges[s].sigma != static_cast<int>(e))
      throw std::invalid_argument("edge involution is not an involution");
    if (edges[s].tail != vertices[ed.tail].sigma || edges[s].head != vertices[ed.head].sigma)
      throw std::invalid_argument("edge involution does not cover the vertex involution");
    if ((s == static_cast<int>(e)) != (ed.circle > 0))
      throw std::invalid_argument("fixed edges must carry a circle label");
  }
  if (euler_characteristic() != 2 - 2 * topology.g)
    throw std::invalid_argument("Euler characteristic mismatch");
  // Fixed cells partition into exactly r circles.
  for (int c = 1; c <= topology.r; ++c) {
    bool has_vertex = false, has_edge = false;
    for (const Vertex& v : vertices) has_vertex |= v.circle == c;
    for (const Edge& e : edges) has_edge |= e.circle == c;
    if (!has_vertex || !has_edge)
      throw std::invalid_argument("fixed circle " + std::to_string(c) + " is empty");
  }
  if (topology.r == 0) {
    for (const Vertex& v : vertices)
      if (v.circle != 0) throw std::invalid_argument("type 0 complexes have no fixed cells");
  }
  for (size_t f = 0; f < faces.size(); ++f) {
    const Word& w = faces[f];
    if (w.empty()) throw std::invalid_argument("empty face boundary");
    // Display order: letter i starts where letter i+1 ends; the boundary
    // closes when the first letter ends where the last one starts.
    for (size_t i = 0; i + 1 < w.size(); ++i)
      if (letter_start(w[i]) != letter_end(w[i + 1]))
        throw std::invalid_argument("face boundary is not a path");
    if (letter_end(w.front()) != letter_start(w.back()))
      throw std::invalid_argument("face boundary is not closed");
    const int fs = face_sigma[f];
    if (fs < 0 || fs >= static_cast<int>(faces.size()) || face_sigma[fs] != static_cast<int>(f))
      throw std::invalid_argument("face involution is not an involution");
  }
}

namespace {

using Word = EquivariantComplex::Word;
using Letter = EquivariantComplex::Letter;

void append_commutator(Word& w, int a, int b) {
  w.push_back({a, false});
  w.push_back({b, false});
  w.push_back({a, true});
  w.push_back({b, true});
}

}  // namespace

EquivariantComplex build_complex(const CurveTopology& topology) {
  topology.validate();
  EquivariantComplex cx;
  cx.topology = topology;
  const int ghat = topology.ghat();
  const int r = topology.r;

  auto add_edge = [&](const std::string& name, int tail, int head, int circle = 0) {
    cx.edges.push_back({name, tail, head, static_cast<int>(cx.edges.size()), circle});
    return static_cast<int>(cx.edges.size()) - 1;
  };
  auto pair_edges = [&](int e, int se) {
    cx.edges[e].sigma = se;
    cx.edges[se].sigma = e;
  };

  switch (topology.kind) {
    case CurveKind::Type0: {
      cx.vertices = {{1, 0}, {0, 0}};
      std::vector<int> a(ghat), b(ghat), sa(ghat), sb(ghat);
      for (int i = 0; i < ghat; ++i) {
        a[i] = add_edge("a" + std::to_string(i + 1), 0, 0);
        b[i] = add_edge("b" + std::to_string(i + 1), 0, 0);
        sa[i] = add_edge("sa" + std::to_string(i + 1), 1, 1);
        sb[i] = add_edge("sb" + std::to_string(i + 1), 1, 1);
        pair_edges(a[i], sa[i]);
        pair_edges(b[i], sb[i]);
      }
      if (topology.g % 2 == 0) {
        const int c = add_edge("c", 0, 1);
        const int sc = add_edge("sc", 1, 0);
        pair_edges(c, sc);
        Word f1, f2;
        for (int i = 0; i < ghat; ++i) append_commutator(f1, a[i], b[i]);
        f1.push_back({sc, false});
        f1.push_back({c, false});
        for (int i = 0; i < ghat; ++i) append_commutator(f2, sa[i], sb[i]);
        f2.push_back({c, false});
        f2.push_back({sc, false});
        cx.faces = {f1, f2};
        cx.face_sigma = {1, 0};
        for (int i = 0; i < ghat; ++i) {
          cx.generators.push_back({"A" + std::to_string(i + 1), {{a[i], false}}, false});
          cx.generators.push_back({"B" + std::to_string(i + 1), {{b[i], false}}, false});
        }
        cx.generators.push_back({"C", {{c, false}}, true});
      } else {
        const int c = add_edge("c", 0, 0);
        const int sc = add_edge("sc", 1, 1);
        const int d = add_edge("d", 0, 1);
        const int sd = add_edge("sd", 1, 0);
        pair_edges(c, sc);
        pair_edges(d, sd);
        Word f1, f2;
        for (int i = 0; i < ghat; ++i) append_commutator(f1, a[i], b[i]);
        f1.push_back({c, false});
        f1.push_back({d, true});
        f1.push_back({sc, false});
        f1.push_back({d, false});
        for (int i = 0; i < ghat; ++i) append_commutator(f2, sa[i], sb[i]);
        f2.push_back({sc, false});
        f2.push_back({sd, true});
        f2.push_back({c, false});
        f2.push_back({sd, false});
        cx.faces = {f1, f2};
        cx.face_sigma = {1, 0};
        for (int i = 0; i < ghat; ++i) {
          cx.generators.push_back({"A" + std::to_string(i + 1), {{a[i], false}}, false});
          cx.generators.push_back({"B" + std::to_string(i + 1), {{b[i], false}}, false});
        }
        cx.generators.push_back({"C", {{c, false}}, false});
        cx.generators.push_back({"D", {{d, true}}, false});
      }
      break;
    }
    case CurveKind::TypeI: {
      cx.vertices.resize(r);
      for (int j = 0; j < r; ++j) cx.vertices[j] = {j, j + 1};
      std::vector<int> a(ghat), b(ghat), sa(ghat), sb(ghat);
      for (int i = 0; i < ghat; ++i) {
        a[i] = add_edge("a" + std::to_string(i + 1), 0, 0);
        b[i] = add_edge("b" + std::to_string(i + 1), 0, 0);
        sa[i] = add_edge("sa" + std::to_string(i + 1), 0, 0);
        sb[i] = add_edge("sb" + std::to_string(i + 1), 0, 0);
        pair_edges(a[i], sa[i]);
        pair_edges(b[i], sb[i]);
      }
      std::vector<int> c(r), d(r, -1), sd(r, -1);
      for (int j = 0; j < r; ++j) c[j] = add_edge("c" + std::to_string(j + 1), j, j, j + 1);
      for (int j = 1; j < r; ++j) {
        d[j] = add_edge("d" + std::to_string(j + 1), 0, j);
        sd[j] = add_edge("sd" + std::to_string(j + 1), 0, j);
        pair_edges(d[j], sd[j]);
      }
      Word f1, f2;
      for (int i = 0; i < ghat; ++i) append_commutator(f1, a[i], b[i]);
      f1.push_back({c[0], false});
      for (int j = 1; j < r; ++j) {
        f1.push_back({d[j], true});
        f1.push_back({c[j], false});
        f1.push_back({d[j], false});
      }
      for (int i = 0; i < ghat; ++i) append_commutator(f2, sa[i], sb[i]);
      f2.push_back({c[0], false});
      for (int j = 1; j < r; ++j) {
        f2.push_back({sd[j], true});
        f2.push_back({c[j], false});
        f2.push_back({sd[j], false});
      }
      cx.faces = {f1, f2};
      cx.face_sigma = {1, 0};
      for (int i = 0; i < ghat; ++i) {
        cx.generators.push_back({"A" + std::to_string(i + 1), {{a[i], false}}, false});
        cx.generators.push_back({"B" + std::to_string(i + 1), {{b[i], false}}, false});
      }
      for (int j = 0; j < r; ++j)
        cx.generators.push_back({"C" + std::to_string(j + 1), {{c[j], false}}, false});
      for (int j = 1; j < r; ++j)
        cx.generators.push_back({"D" + std::to_string(j + 1), {{d[j], true}}, false});
      break;
    }
    case CurveKind::TypeII: {
      cx.vertices.resize(r + 2);
      cx.vertices[0] = {1, 0};
      cx.vertices[1] = {0, 0};
      for (int j = 0; j < r; ++j) cx.vertices[2 + j] = {2 + j, j + 1};
      std::vector<int> a(ghat), b(ghat), sa(ghat), sb(ghat);
      for (int i = 0; i < ghat; ++i) {
        a[i] = add_edge("a" + std::to_string(i + 1), 0, 0);
        b[i] = add_edge("b" + std::to_string(i + 1), 0, 0);
        sa[i] = add_edge("sa" + std::to_string(i + 1), 1, 1);
        sb[i] = add_edge("sb" + std::to_string(i + 1), 1, 1);
        pair_edges(a[i], sa[i]);
        pair_edges(b[i], sb[i]);
      }
      const int c0 = add_edge("c0", 0, 1);
      const int sc0 = add_edge("sc0", 1, 0);
      pair_edges(c0, sc0);
      std::vector<int> c(r), d(r), sd(r);
      for (int j = 0; j < r; ++j) {
        c[j] = add_edge("c" + std::to_string(j + 1), 2 + j, 2 + j, j + 1);
        d[j] = add_edge("d" + std::to_string(j + 1), 0, 2 + j);
        sd[j] = add_edge("sd" + std::to_string(j + 1), 1, 2 + j);
        pair_edges(d[j], sd[j]);
      }
      Word f1, f2;
      for (int i = 0; i < ghat; ++i) append_commutator(f1, a[i], b[i]);
      f1.push_back({sc0, false});
      f1.push_back({c0, false});
      for (int j = 0; j < r; ++j) {
        f1.push_back({d[j], true});
        f1.push_back({c[j], false});
        f1.push_back({d[j], false});
      }
      for (int i = 0; i < ghat; ++i) append_commutator(f2, sa[i], sb[i]);
      f2.push_back({c0, false});
      f2.push_back({sc0, false});
      for (int j = 0; j < r; ++j) {
        f2.push_back({sd[j], true});
        f2.push_back({c[j], false});
        f2.push_back({sd[j], false});
      }
      cx.faces = {f1, f2};
      cx.face_sigma = {1, 0};
      for (int i = 0; i < ghat; ++i) {
        cx.generators.push_back({"A" + std::to_string(i + 1), {{a[i], false}}, false});
        cx.generators.push_back({"B" + std::to_string(i + 1), {{b[i], false}}, false});
      }
      cx.generators.push_back({"C0", {{c0, false}}, true});
      for (int j = 0; j < r; ++j)
        cx.generators.push_back({"C" + std::to_string(j + 1), {{c[j], false}}, false});
      for (int j = 0; j < r; ++j)
        cx.generators.push_back({"D" + std::to_string(j + 1), {{d[j], true}}, false});
      break;
    }
  }
  cx.base_vertex = 0;
  cx.validate();
  return cx;
}

Matrix word_transport(const LatticeConnection& conn, const EquivariantComplex& complex,
                      const EquivariantComplex::Word& word) {
  Matrix v = Matrix::Identity(conn.n, conn.n);
  for (const Letter& l : word) {
    (void)complex;
    const Matrix& t = conn.transport[l.edge];
    v = v * (l.inverse ? Matrix(t.inverse()) : t);
  }
  return v;
}

namespace {

Matrix equivariant_image(const LatticeConnection& conn, const EquivariantComplex& cx, int edge) {
  const auto& e = cx.edges[edge];
  return conn.lift[e.head] * conn.transport[edge].conjugate() * conn.lift[e.tail].inverse();
}

double structure_sign(Structure s) { return s == Structure::Real ? 1.0 : -1.0; }

}  // namespace

ConnectionDefects connection_defects(const LatticeConnection& conn,
                                     const EquivariantComplex& cx) {
  ConnectionDefects d;
  const int n = conn.n;
  const Matrix id = Matrix::Identity(n, n);
  for (const Matrix& t : conn.transport)
    d.unitarity = std::max(d.unitarity, (t.adjoint() * t - id).norm());
  for (const Matrix& m : conn.lift)
    d.unitarity = std::max(d.unitarity, (m.adjoint() * m - id).norm());
  for (const auto& f : cx.faces)
    d.flatness = std::max(d.flatness, (word_transport(conn, cx, f) - id).norm());
  for (size_t e = 0; e < cx.edges.size(); ++e)
    d.equivariance = std::max(
        d.equivariance, (conn.transport[cx.edges[e].sigma] - equivariant_image(conn, cx, e)).norm());
  const double s = structure_sign(conn.structure);
  for (size_t v = 0; v < cx.vertices.size(); ++v)
    d.sigma_square = std::max(
        d.sigma_square,
        (conn.lift[cx.vertices[v].sigma] * conn.lift[v].conjugate() - s * id).norm());
  return d;
}

double ConnectionDefects::worst() const {
  return std::max(std::max(unitarity, flatness), std::max(equivariance, sigma_square));
}

double plaquette_energy(const LatticeConnection& conn, const EquivariantComplex& cx) {
  double e = 0.0;
  const Matrix id = Matrix::Identity(conn.n, conn.n);
  for (const auto& f : cx.faces) e += (word_transport(conn, cx, f) - id).squaredNorm();
  return e;
}

cxd sigma_square_scalar(const LatticeConnection& conn, const EquivariantComplex& cx) {
  cxd acc = 0.0;
  for (size_t v = 0; v < cx.vertices.size(); ++v)
    acc += (conn.lift[cx.vertices[v].sigma] * conn.lift[v].conjugate()).trace() /
           static_cast<double>(conn.n);
  return acc / static_cast<double>(cx.vertices.size());
}

LatticeConnection rep_to_connection(const Representation& rep, const EquivariantComplex& cx) {
  if (cx.topology != rep.topology)
    throw std::invalid_argument("rep_to_connection: complex built for a different topology");
  if (residual(rep) >= 1e-10)
    throw invalid_state("rep_to_connection requires a converged representation");
  if (std::abs(central_target(rep.n, rep.k) - cxd(1, 0)) > 1e-12)
    throw std::invalid_argument(
        "rep_to_connection: flat connections need trivial central monodromy (k = 0 mod 2n)");
  const int n = rep.n;
  LatticeConnection conn;
  conn.structure = rep.structure;
  conn.n = n;
  conn.transport.assign(cx.edges.size(), Matrix());
  conn.lift.assign(cx.vertices.size(), Matrix());

  const double s = structure_sign(rep.structure);
  const bool quat = rep.structure == Structure::Quaternionic;
  const Matrix id = Matrix::Identity(n, n);
  // Lifts: identity at the base, s at its sigma-image, the structure map at
  // fixed vertices.
  for (size_t v = 0; v < cx.vertices.size(); ++v) {
    if (cx.vertices[v].circle > 0)
      conn.lift[v] = quat ? symplectic_form(n) : id;
    else
      conn.lift[v] = static_cast<int>(v) == cx.base_vertex ? id : s * id;
  }
  // Transports on the dictionary edges, directly from the generators.
  for (const auto& gp : cx.generators) {
    const Matrix& value = rep.matrix(gp.label);
    const Letter l = gp.word.front();
    Matrix t;
    if (gp.sigma_dressed) {
      t = conn.lift[cx.base_vertex] * value.conjugate();  // value = conj(M_base^-1 T)
    } else {
      t = l.inverse ? Matrix(value.inverse()) : value;
    }
    conn.transport[l.edge] = t;
  }
  // Remaining edges by equivariance.
  for (size_t e = 0; e < cx.edges.size(); ++e) {
    if (conn.transport[e].size() != 0) continue;
    const int se = cx.edges[e].sigma;
    if (conn.transport[se].size() == 0)
      throw invalid_state("rep_to_connection: dangling edge " + cx.edges[e].name);
    conn.transport[e] = equivariant_image(conn, cx, static_cast<int>(se));
  }
  return conn;
}

namespace {

// Gauge the lifts into the normal form: identity at doubled vertices,
// identity (real) or the symplectic form (quaternionic) at fixed ones.
void normalize_lifts(LatticeConnection& conn, const EquivariantComplex& cx) {
  const int n = conn.n;
  const Matrix id = Matrix::Identity(n, n);
  std::vector<Matrix> h(cx.vertices.size(), id);
  std::vector<bool> done(cx.vertices.size(), false);
  for (size_t v = 0; v < cx.vertices.size(); ++v) {
    if (done[v]) continue;
    const int sv = cx.vertices[v].sigma;
    if (static_cast<int>(v) != sv) {
      // h_v = I, h_{sigma v} = M_v^-1 sends M_v to I and, through the
      // sigma-square relation, M_{sigma v} to s I.
      h[v] = id;
      h[sv] = conn.lift[v].inverse();
      done[v] = done[sv] = true;
    } else if (conn.structure == Structure::Real) {
      // M_v is symmetric unitary; h = f(M_v) with f(e^{i t}) = e^{-i t/2}
      // satisfies h M conj(h)^-1 = I.
      h[v] = unitary_sqrt(conn.lift[v]).inverse();
      done[v] = true;
    } else {
      // M_v conj(M_v) = -I; with K = M_v J^-1, h = K^{-1/2} carries M_v to J.
      const Matrix j = symplectic_form(n);
      const Matrix k = conn.lift[v] * j.inverse();
      h[v] = unitary_sqrt(k).inverse();
      done[v] = true;
    }
  }
  for (size_t e = 0; e < cx.edges.size(); ++e)
    conn.transport[e] = h[cx.edges[e].head] * conn.transport[e] * h[cx.edges[e].tail].inverse();
  for (size_t v = 0; v < cx.vertices.size(); ++v)
    conn.lift[v] = h[cx.vertices[v].sigma] * conn.lift[v] * h[v].conjugate().inverse();
}

std::string defect_name(const ConnectionDefects& d) {
  if (d.unitarity > 1e-8) return "unitarity";
  if (d.flatness > 1e-8) return "flatness";
  if (d.equivariance > 1e-8) return "equivariance";
  if (d.sigma_square > 1e-8) return "sigma-square";
  return "";
}

}  // namespace

Representation connection_to_rep(const LatticeConnection& conn, const EquivariantComplex& cx,
                                 int base_vertex) {
  const std::string bad = defect_name(connection_defects(conn, cx));
  if (!bad.empty())
    throw std::invalid_argument("connection_to_rep: " + bad + " defect exceeds 1e-8");
  if (base_vertex < 0) base_vertex = cx.base_vertex;

  LatticeConnection work = conn;
  normalize_lifts(work, cx);

  Representation rep = identity_representation(cx.topology, conn.structure, conn.n, 0);
  const int base0 = cx.base_vertex;
  const int base1 = cx.vertices[base0].sigma;
  if (base_vertex == base0) {
    for (const auto& gp : cx.generators) {
      Matrix v = word_transport(work, cx, gp.word);
      if (gp.sigma_dressed) v = (work.lift[base0].inverse() * v).conjugate();
      rep.matrix(gp.label) = v;
    }
    return rep;
  }
  if (base_vertex != base1 || base1 == base0)
    throw std::invalid_argument("connection_to_rep: unsupported base vertex");

  // Reading at the sigma-image base: path-type generators come from the
  // lift formula on the sigma-image edge; the others are rebased through
  // the connecting transport, following their gauge pattern.
  int tconn = -1;  // edge from base1 to base0
  for (size_t e = 0; e < cx.edges.size(); ++e)
    if (cx.edges[e].tail == base1 && cx.edges[e].head == base0) {
      tconn = static_cast<int>(e);
      break;
    }
  if (tconn < 0) throw invalid_state("no connecting edge from the sigma-image base");
  const Matrix t = work.transport[tconn];
  const Matrix t_inv = t.inverse();
  for (const auto& gp : cx.generators) {
    const Letter l = gp.word.front();
    const auto& edge = cx.edges[l.edge];
    const Generator& gen = rep.schema.generators[rep.schema.index_of(gp.label)];
    if (gp.sigma_dressed) {
      rep.matrix(gp.label) =
          (work.lift[base1].inverse() * work.transport[edge.sigma]).conjugate();
      continue;
    }
    Matrix v = word_transport(work, cx, gp.word);
    if (gen.gauge_left == 0) v = t_inv * v;
    if (gen.gauge_right == 0) {
      Matrix right = t_inv;
      if (gen.gauge_right_conjugated) right = right.conjugate();
      v = v * right.inverse();
    }
    rep.matrix(gp.label) = v;
  }
  return rep;
}

namespace {

// Breadth-first path between vertices, as a display-order word.
EquivariantComplex::Word tree_path(const EquivariantComplex& cx, int from, int to) {
  if (from == to) return {};
  std::vector<int> parent_edge(cx.vertices.size(), -1);
  std::vector<int> parent_vertex(cx.vertices.size(), -1);
  std::vector<bool> seen(cx.vertices.size(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (size_t e = 0; e < cx.edges.size(); ++e) {
      for (const int w : {cx.edges[e].head == v ? cx.edges[e].tail : -1,
                          cx.edges[e].tail == v ? cx.edges[e].head : -1}) {
        if (w >= 0 && !seen[w]) {
          seen[w] = true;
          parent_edge[w] = static_cast<int>(e);
          parent_vertex[w] = v;
          queue.push_back(w);
        }
      }
    }
  }
  if (!seen[to]) throw invalid_state("disconnected complex");
  // Walk back from `to`; traversal order from -> to means display order
  // has the last step first.
  EquivariantComplex::Word display;
  int v = to;
  while (v != from) {
    const int e = parent_edge[v];
    const bool forward = cx.edges[e].head == v;  // traversed tail -> head
    display.push_back({e, !forward});
    v = parent_vertex[v];
  }
  return display;
}

EquivariantComplex::Word invert_word(const EquivariantComplex::Word& w) {
  EquivariantComplex::Word out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->edge, !it->inverse});
  return out;
}

}  // namespace

double path_independence_check(const LatticeConnection& conn, const EquivariantComplex& cx,
                               const std::vector<std::pair<int, int>>& vertex_pairs) {
  std::vector<std::pair<int, int>> pairs = vertex_pairs;
  if (pairs.empty()) {
    for (size_t v = 0; v < cx.vertices.size(); ++v)
      if (cx.vertices[v].sigma >= static_cast<int>(v))
        pairs.emplace_back(static_cast<int>(v), cx.vertices[v].sigma);
  }
  double worst = 0.0;
  for (const auto& [u, su] : pairs) {
    const EquivariantComplex::Word base = tree_path(cx, u, su);
    const Matrix ref = word_transport(conn, cx, base);
    for (size_t f = 0; f < cx.faces.size(); ++f) {
      // Deform the path by the boundary of face f, conjugated back to u.
      const int x = cx.letter_start(cx.faces[f].back());
      const EquivariantComplex::Word to_face = tree_path(cx, u, x);
      EquivariantComplex::Word loop = invert_word(to_face);
      loop.insert(loop.end(), cx.faces[f].begin(), cx.faces[f].end());
      EquivariantComplex::Word tail = to_face;
      loop.insert(loop.end(), tail.begin(), tail.end());
      EquivariantComplex::Word alt = base;
      alt.insert(alt.end(), loop.begin(), loop.end());
      worst = std::max(worst, (word_transport(conn, cx, alt) - ref).norm());
    }
  }
  return worst;
}

}  // namespace rqv
