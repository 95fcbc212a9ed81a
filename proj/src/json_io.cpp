#include "rqv/json_io.hpp"

namespace rqv {

njson matrix_to_json(const Matrix& m) {
  njson out = njson::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      out.push_back(njson::array({m(i, j).real(), m(i, j).imag()}));
  return out;
}

Matrix matrix_from_json(const njson& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix entry count does not match the expected shape");
  Matrix m(rows, cols);
  int p = 0;
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const njson& e = j[p++];
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      m(i, c) = cxd(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

njson topology_to_json(const CurveTopology& t) {
  return njson{{"kind", to_string(t.kind)}, {"g", t.g}, {"r", t.r}};
}

CurveTopology topology_from_json(const njson& j) {
  CurveTopology t;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "type0")
    t.kind = CurveKind::Type0;
  else if (kind == "type1")
    t.kind = CurveKind::TypeI;
  else if (kind == "type2")
    t.kind = CurveKind::TypeII;
  else
    throw std::invalid_argument("unknown curve kind: " + kind);
  t.g = j.at("g").get<int>();
  t.r = j.value("r", 0);
  t.validate();
  return t;
}

Structure structure_from_string(const std::string& s) {
  if (s == "real") return Structure::Real;
  if (s == "quaternionic") return Structure::Quaternionic;
  throw std::invalid_argument("structure must be 'real' or 'quaternionic'");
}

njson representation_to_json(const Representation& rep) {
  njson gens = njson::object();
  for (size_t i = 0; i < rep.matrices.size(); ++i)
    gens[rep.schema.generators[i].label] = matrix_to_json(rep.matrices[i]);
  return njson{{"topology", topology_to_json(rep.topology)},
               {"structure", to_string(rep.structure)},
               {"n", rep.n},
               {"k", rep.k},
               {"generators", gens}};
}

Representation representation_from_json(const njson& j) {
  const CurveTopology topology = topology_from_json(j.at("topology"));
  const Structure structure = structure_from_string(j.at("structure").get<std::string>());
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  Representation rep = identity_representation(topology, structure, n, k);
  const njson& gens = j.at("generators");
  for (size_t i = 0; i < rep.matrices.size(); ++i) {
    const std::string& label = rep.schema.generators[i].label;
    if (!gens.contains(label))
      throw std::invalid_argument("missing generator matrix: " + label);
    rep.matrices[i] = matrix_from_json(gens.at(label), n, n);
  }
  rep.validate();
  return rep;
}

njson solve_result_to_json(const SolveResult& result) {
  njson j = representation_to_json(result.rep);
  j["residual"] = result.residual;
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["seed"] = result.seed;
  return j;
}

njson fp_group_to_json(const FpAbelianGroup& g) {
  return njson{{"free_rank", g.free_rank}, {"torsion", g.torsion}};
}

njson topological_class_to_json(const TopologicalClass& c) {
  return njson{{"n", c.n}, {"k", c.k}, {"w1", c.w1}, {"structure", to_string(c.structure)}};
}

TopologicalClass topological_class_from_json(const njson& j) {
  TopologicalClass c;
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  c.w1 = j.value("w1", std::vector<int>{});
  c.structure = structure_from_string(j.at("structure").get<std::string>());
  return c;
}

njson complex_to_json(const EquivariantComplex& cx) {
  njson vertices = njson::array();
  for (const auto& v : cx.vertices)
    vertices.push_back(njson{{"sigma", v.sigma}, {"circle", v.circle}});
  njson edges = njson::array();
  for (const auto& e : cx.edges)
    edges.push_back(njson{{"name", e.name},
                          {"tail", e.tail},
                          {"head", e.head},
                          {"sigma", e.sigma},
                          {"circle", e.circle}});
  njson faces = njson::array();
  for (const auto& f : cx.faces) {
    njson w = njson::array();
    for (const auto& l : f) w.push_back(njson{{"edge", l.edge}, {"inverse", l.inverse}});
    faces.push_back(w);
  }
  return njson{{"topology", topology_to_json(cx.topology)},
               {"vertices", vertices},
               {"edges", edges},
               {"faces", faces},
               {"face_sigma", cx.face_sigma},
               {"base_vertex", cx.base_vertex}};
}

njson connection_to_json(const LatticeConnection& conn) {
  njson transports = njson::array();
  for (const Matrix& t : conn.transport) transports.push_back(matrix_to_json(t));
  njson lifts = njson::array();
  for (const Matrix& m : conn.lift) lifts.push_back(matrix_to_json(m));
  return njson{{"structure", to_string(conn.structure)},
               {"n", conn.n},
               {"transports", transports},
               {"lifts", lifts}};
}

LatticeConnection connection_from_json(const njson& j) {
  LatticeConnection conn;
  conn.structure = structure_from_string(j.at("structure").get<std::string>());
  conn.n = j.at("n").get<int>();
  for (const njson& t : j.at("transports"))
    conn.transport.push_back(matrix_from_json(t, conn.n, conn.n));
  for (const njson& m : j.at("lifts")) conn.lift.push_back(matrix_from_json(m, conn.n, conn.n));
  return conn;
}

}  // namespace rqv
