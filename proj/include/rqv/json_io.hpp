#pragma once

#include "rqv/holonomy.hpp"
#include "rqv/invariants.hpp"
#include "rqv/solver.hpp"
#include "rqv/tables.hpp"

#include <json.hpp>

namespace rqv {

using njson = nlohmann::json;

njson matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const njson& j, int rows, int cols);

njson topology_to_json(const CurveTopology& t);
CurveTopology topology_from_json(const njson& j);

Structure structure_from_string(const std::string& s);

njson representation_to_json(const Representation& rep);
Representation representation_from_json(const njson& j);

njson solve_result_to_json(const SolveResult& result);

njson fp_group_to_json(const FpAbelianGroup& g);

njson topological_class_to_json(const TopologicalClass& c);
TopologicalClass topological_class_from_json(const njson& j);

njson complex_to_json(const EquivariantComplex& cx);
njson connection_to_json(const LatticeConnection& conn);
LatticeConnection connection_from_json(const njson& j);

}  // namespace rqv
