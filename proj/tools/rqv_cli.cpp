// Command-line workbench over the representation-variety library: batch
// solves, invariant reports, dimension and index computations, holonomy
// round trips, and homotopy-table queries. All randomness flows from
// --seed; outputs are JSON on stdout (and optionally a file).

#include "rqv/invariants.hpp"
#include "rqv/json_io.hpp"
#include "rqv/ym_index.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitObstructed = 3;
constexpr int kExitUndetermined = 4;

struct CommonArgs {
  int type = 0;
  int genus = 2;
  int real_components = 0;
  int rank = 2;
  int degree = 0;
  std::string structure = "real";
  std::uint64_t seed = 0;
  int starts = 10;
  double tol = 1e-10;
  int max_iters = 2000;
  std::string in_path, in2_path, out_path;
  bool force = false;
};

rqv::CurveTopology make_topology(const CommonArgs& a) {
  rqv::CurveTopology t;
  switch (a.type) {
    case 0: t.kind = rqv::CurveKind::Type0; break;
    case 1: t.kind = rqv::CurveKind::TypeI; break;
    case 2: t.kind = rqv::CurveKind::TypeII; break;
    default: throw std::invalid_argument("--type must be 0, 1 or 2");
  }
  t.g = a.genus;
  t.r = a.real_components;
  t.validate();
  return t;
}

void emit(const rqv::njson& j, const std::string& out_path) {
  const std::string text = j.dump(2);
  std::cout << text << "\n";
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot write " + out_path);
    os << text << "\n";
  }
}

rqv::njson load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  rqv::njson j;
  is >> j;
  return j;
}

int cmd_solve(const CommonArgs& a) {
  const rqv::CurveTopology topology = make_topology(a);
  const rqv::Structure structure = rqv::structure_from_string(a.structure);
  if (structure == rqv::Structure::Quaternionic && topology.r > 0 && a.rank % 2 != 0) {
    emit({{"error", "obstructed"},
          {"reason", "quaternionic bundles on curves with real points need even rank"}},
         a.out_path);
    return kExitObstructed;
  }
  std::string reason;
  if (structure == rqv::Structure::Real && topology.r >= 1) {
    // Some w1 assignment always matches the degree parity.
  } else {
    reason = rqv::obstruction_reason(topology, structure, a.rank, a.degree);
  }
  if (!reason.empty() && !a.force) {
    emit({{"error", "obstructed"}, {"reason", reason}}, a.out_path);
    return kExitObstructed;
  }
  rqv::SolveOptions opts;
  opts.starts = a.starts;
  opts.tol = a.tol;
  opts.max_iters = a.max_iters;
  const rqv::SolveResult result =
      rqv::solve(topology, structure, a.rank, a.degree, a.seed, opts);
  emit(rqv::solve_result_to_json(result), a.out_path);
  return result.converged ? kExitOk : kExitNotConverged;
}

int cmd_invariants(const CommonArgs& a) {
  const rqv::Representation rep = rqv::representation_from_json(load_json(a.in_path));
  rqv::njson out;
  out["residual"] = rqv::residual(rep);
  out["realizable"] = rqv::realizable_some_w1(rep.topology, rep.structure, rep.n, rep.k);
  out["pi1_commutant_dim"] = rqv::pi1_commutant_dimension(rep);
  out["twisted_commutant_dim"] = rqv::twisted_commutant_dimension(rep);
  rqv::TopologicalClass cls{rep.n, rep.k, {}, rep.structure};
  if (rep.structure == rqv::Structure::Real && rep.topology.r >= 1) {
    const std::vector<int> w1 = rqv::stiefel_whitney(rep);
    out["w1"] = w1;
    cls.w1 = w1;
    int sum = 0;
    for (int b : w1) sum += b;
    out["w1_parity_matches_degree"] = ((sum - rep.k) % 2 + 2) % 2 == 0;
  }
  out["class"] = rqv::topological_class_to_json(cls);
  emit(out, a.out_path);
  return kExitOk;
}

int cmd_dim(const CommonArgs& a) {
  const rqv::Representation rep = rqv::representation_from_json(load_json(a.in_path));
  emit({{"moduli_dim", rqv::estimate_moduli_dimension(rep)}}, a.out_path);
  return kExitOk;
}

int cmd_index(const CommonArgs& a, int sub_rank, int sub_degree, bool have_sub) {
  rqv::njson out;
  out["min_index"] = rqv::min_index(a.rank, a.degree, a.genus);
  out["iso_range"] = rqv::morse_iso_range(a.rank, a.genus);
  if (have_sub)
    out["index_value"] =
        rqv::index_value({sub_rank, sub_degree, a.rank, a.degree, a.genus});
  emit(out, a.out_path);
  return kExitOk;
}

int cmd_holonomy(const CommonArgs& a) {
  const rqv::Representation rep = rqv::representation_from_json(load_json(a.in_path));
  const rqv::EquivariantComplex cx = rqv::build_complex(rep.topology);
  const rqv::LatticeConnection conn = rqv::rep_to_connection(rep, cx);
  const rqv::ConnectionDefects defects = rqv::connection_defects(conn, cx);
  const rqv::Representation back = rqv::connection_to_rep(conn, cx);
  const rqv::AlignResult align = rqv::orbit_align(back, rep);
  const rqv::cxd sq = rqv::sigma_square_scalar(conn, cx);
  rqv::njson out;
  out["complex"] = rqv::complex_to_json(cx);
  out["connection"] = rqv::connection_to_json(conn);
  out["unitarity_defect"] = defects.unitarity;
  out["flatness_defect"] = defects.flatness;
  out["plaquette_energy"] = rqv::plaquette_energy(conn, cx);
  out["equivariance_defect"] = defects.equivariance;
  out["sigma_square_defect"] = defects.sigma_square;
  out["sigma_square_scalar"] = {sq.real(), sq.imag()};
  out["path_independence_defect"] = rqv::path_independence_check(conn, cx);
  out["roundtrip_gauge_distance"] = align.distance;
  emit(out, a.out_path);
  return kExitOk;
}

int cmd_tables(const CommonArgs& a, const std::string& space, int pi, bool fixed_det) {
  rqv::TableQuery q;
  q.structure = rqv::structure_from_string(a.structure);
  q.topology = make_topology(a);
  q.degree = pi;
  q.n = a.rank;
  q.k = a.degree;
  q.fixed_det = fixed_det;
  if (space == "based")
    q.space = rqv::SpaceKind::BasedGauge;
  else if (space == "full")
    q.space = rqv::SpaceKind::FullGauge;
  else if (space == "projective")
    q.space = rqv::SpaceKind::ProjectiveGauge;
  else if (space == "moduli")
    q.space = fixed_det ? rqv::SpaceKind::ModuliFixedDet : rqv::SpaceKind::Moduli;
  else
    throw std::invalid_argument("--space must be based, full, projective or moduli");
  const rqv::FpAbelianGroup g = rqv::lookup(q);
  rqv::njson out = rqv::fp_group_to_json(g);
  out["pretty"] = g.str();
  emit(out, a.out_path);
  return kExitOk;
}

int cmd_equiv(const CommonArgs& a, int max_len) {
  const rqv::Representation rep1 = rqv::representation_from_json(load_json(a.in_path));
  const rqv::Representation rep2 = rqv::representation_from_json(load_json(a.in2_path));
  const std::vector<rqv::cxd> t1 = rqv::trace_invariants(rep1, max_len);
  const std::vector<rqv::cxd> t2 = rqv::trace_invariants(rep2, max_len);
  double trace_dist = 0.0;
  for (size_t i = 0; i < t1.size(); ++i) trace_dist += std::norm(t1[i] - t2[i]);
  trace_dist = std::sqrt(trace_dist);
  const rqv::AlignResult align = rqv::orbit_align(rep1, rep2);
  emit({{"trace_distance", trace_dist}, {"orbit_distance", align.distance}}, a.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for real and quaternionic representation varieties"};
  app.require_subcommand(1);
  CommonArgs a;

  auto add_common = [&](CLI::App* cmd, bool with_topology, bool with_solver) {
    if (with_topology) {
      cmd->add_option("--type", a.type, "curve type: 0, 1 or 2");
      cmd->add_option("--genus", a.genus, "genus of the curve");
      cmd->add_option("--real-components", a.real_components, "number of real circles");
    }
    cmd->add_option("--rank", a.rank, "bundle rank n");
    cmd->add_option("--degree", a.degree, "bundle degree k");
    cmd->add_option("--structure", a.structure, "real or quaternionic");
    if (with_solver) {
      cmd->add_option("--seed", a.seed, "random seed");
      cmd->add_option("--starts", a.starts, "number of multistart descents");
      cmd->add_option("--tol", a.tol, "success tolerance on the residual");
      cmd->add_option("--max-iters", a.max_iters, "iteration cap per start");
      cmd->add_flag("--force", a.force, "attempt obstructed solves anyway");
    }
    cmd->add_option("--out", a.out_path, "also write the JSON result here");
  };

  CLI::App* solve = app.add_subcommand("solve", "minimize the relator residual");
  add_common(solve, true, true);

  CLI::App* invariants = app.add_subcommand("invariants", "invariants of a stored solution");
  invariants->add_option("--in", a.in_path, "solution JSON")->required();
  invariants->add_option("--out", a.out_path, "output path");

  CLI::App* dim = app.add_subcommand("dim", "local moduli dimension at a solution");
  dim->add_option("--in", a.in_path, "solution JSON")->required();
  dim->add_option("--out", a.out_path, "output path");

  int sub_rank = 0, sub_degree = 0;
  CLI::App* index = app.add_subcommand("index", "Yang-Mills index bounds");
  index->add_option("--rank", a.rank, "bundle rank n");
  index->add_option("--degree", a.degree, "bundle degree k");
  index->add_option("--genus", a.genus, "genus of the curve");
  CLI::Option* opt_m = index->add_option("--sub-rank", sub_rank, "destabilizing rank m");
  index->add_option("--sub-degree", sub_degree, "destabilizing degree l")->needs(opt_m);
  index->add_option("--out", a.out_path, "output path");

  CLI::App* holonomy = app.add_subcommand("holonomy", "lattice-connection round trip");
  holonomy->add_option("--in", a.in_path, "solution JSON")->required();
  holonomy->add_option("--out", a.out_path, "output path");

  std::string space = "projective";
  int pi = 1;
  bool fixed_det = false;
  CLI::App* tables = app.add_subcommand("tables", "homotopy-group table lookup");
  add_common(tables, true, false);
  tables->add_option("--space", space, "based | full | projective | moduli");
  tables->add_option("--pi", pi, "homotopy degree: 1 or 2");
  tables->add_flag("--fixed-det", fixed_det, "fixed-determinant tables");

  int max_len = 3;
  CLI::App* equiv = app.add_subcommand("equiv", "compare two solutions up to gauge");
  equiv->add_option("--in", a.in_path, "first solution JSON")->required();
  equiv->add_option("--in2", a.in2_path, "second solution JSON")->required();
  equiv->add_option("--max-len", max_len, "trace-invariant word length");
  equiv->add_option("--out", a.out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(a);
    if (invariants->parsed()) return cmd_invariants(a);
    if (dim->parsed()) return cmd_dim(a);
    if (index->parsed()) return cmd_index(a, sub_rank, sub_degree, opt_m->count() > 0);
    if (holonomy->parsed()) return cmd_holonomy(a);
    if (tables->parsed()) return cmd_tables(a, space, pi, fixed_det);
    if (equiv->parsed()) return cmd_equiv(a, max_len);
  } catch (const rqv::table_undetermined& e) {
    std::cout << rqv::njson{{"error", "undetermined"}, {"what", e.what()}}.dump(2)
              << "\n";
    return kExitUndetermined;
  } catch (const std::exception& e) {
    std::cout << rqv::njson{{"error", "invalid"}, {"what", e.what()}}.dump(2) << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
