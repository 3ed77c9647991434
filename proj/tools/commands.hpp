#ifndef DDVEP_TOOLS_COMMANDS_HPP
#define DDVEP_TOOLS_COMMANDS_HPP

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ddvep/ddvep.hpp"

namespace ddvep::cli {

enum ExitCode : int { kOk = 0, kError = 1, kEmpty = 2 };

/// Default tolerance by objective count: 0.005 for two objectives, 0.05 above.
inline double default_epsilon(int d) { return d <= 2 ? 0.005 : 0.05; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  return io::slurp(in);
}

inline ConeDD load_cone(const std::optional<std::string>& cone_text, int d) {
  if (!cone_text) return standard_cone_dd(d);
  ConeDD cone = to_cone(parse_polyhedron_text(*cone_text));
  if (cone.dim != d) throw Error(ErrorKind::InvalidInput, "cone dimension does not match");
  return cone;
}

/// A point y with P contained in y + K, or nullopt when P is empty.
inline std::optional<Vector> cone_apex(const HRep& h, const ConeDD& cone) {
  const int d = h.dim;
  std::vector<double> beta;
  for (const Halfspace& f : cone.facets) {
    LinearProgram lp(f.normal());
    for (int j = 0; j < d; ++j) lp.set_free(j);
    for (const Halfspace& hs : h.halfspaces) lp.add(hs.normal(), Relation::GreaterEqual, hs.offset());
    const LpSolution s = solve_lp(lp);
    if (s.status == LpStatus::Infeasible) return std::nullopt;
    if (s.status == LpStatus::Unbounded) {
      throw Error(ErrorKind::RecessionConeViolation, "polyhedron is not contained in a translate of the cone");
    }
    beta.push_back(s.objective_value);
  }
  if (is_nonnegative_orthant(cone)) {
    Vector y(d);
    for (std::size_t i = 0; i < cone.facets.size(); ++i) {
      Eigen::Index j;
      cone.facets[i].normal().maxCoeff(&j);
      y(j) = beta[i] / cone.facets[i].normal()(j);
    }
    return y;
  }
  LinearProgram lp(Vector::Zero(d));
  for (int j = 0; j < d; ++j) lp.set_free(j);
  for (std::size_t i = 0; i < cone.facets.size(); ++i) lp.add(cone.facets[i].normal(), Relation::LessEqual, beta[i]);
  const LpSolution s = solve_lp(lp);
  if (s.status != LpStatus::Optimal) throw Error(ErrorKind::NumericalFailure, "could not place the cone apex");
  return s.x;
}

inline bool is_feasible(const HRep& h) {
  LinearProgram lp(Vector::Zero(h.dim));
  for (int j = 0; j < h.dim; ++j) lp.set_free(j);
  for (const Halfspace& hs : h.halfspaces) lp.add(hs.normal(), Relation::GreaterEqual, hs.offset());
  return solve_lp(lp).status == LpStatus::Optimal;
}

struct VertenumOptions {
  std::string mode = "online-cone";  // offline | online-box | online-cone
  double M = 1e4;
  std::optional<std::string> cone_text;
};

inline int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kError;
}

/// H-representation text in, V-representation (with adjacency) out.
inline int cmd_vertenum(const std::string& text, const VertenumOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const PolyhedronText doc = parse_polyhedron_text(text);
    HRep h = to_hrep(doc);
    if (h.halfspaces.empty()) throw Error(ErrorKind::InvalidInput, "no halfspaces given");
    const ConeDD cone = load_cone(opt.cone_text, h.dim);
    if (!is_feasible(h)) {
      err << "empty\n";
      return kEmpty;
    }

    if (opt.mode == "offline") {
      if (!h.recession_dirs) {
        bool inside = true;
        for (const Vector& z : cone.directions) {
          for (const Halfspace& hs : h.halfspaces) inside = inside && hs.normal().dot(z) >= -tol::parallel(hs.normal(), z);
        }
        if (inside) h.recession_dirs = cone.directions;
      }
      const VRep vr = enumerate_vertices_brute(h);
      if (vr.vertices.empty()) throw Error(ErrorKind::Unsupported, "polyhedron has no vertices (it contains a line)");
      write_polyhedron(out, from_representation(h.dim, vr.vertices, vr.directions, h.halfspaces));
      return kOk;
    }

    const auto apex = cone_apex(h, cone);
    if (!apex) {
      err << "empty\n";
      return kEmpty;
    }
    if (opt.mode == "online-cone") {
      AdjacencyPolyhedron P = init_cone(*apex, cone);
      for (const Halfspace& hs : h.halfspaces) {
        if (onlinevert2(P, hs).kind == CutKind::Empty) {
          err << "empty\n";
          return kEmpty;
        }
      }
      write_polyhedron(out, P);
      return kOk;
    }
    if (opt.mode == "online-box") {
      BoxPolyhedron box = init_box(*apex, cone, opt.M);
      for (const Halfspace& hs : h.halfspaces) {
        if (onlinevert(box.polyhedron, hs).kind == CutKind::Empty) {
          err << "empty\n";
          return kEmpty;
        }
      }
      std::vector<Vector> verts;
      for (const auto& [id, v] : strip_artificial(box.polyhedron, box.artificial)) verts.push_back(v);
      const bool unbounded =
          box.polyhedron.has_facet(box.artificial) && !box.polyhedron.members_of(box.artificial).empty();
      const std::vector<Vector> dirs = unbounded ? cone.directions : std::vector<Vector>{};
      write_polyhedron(out, from_representation(h.dim, verts, dirs, h.halfspaces));
      return kOk;
    }
    throw Error(ErrorKind::InvalidInput, "unknown mode '" + opt.mode + "'");
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

inline BackendKind parse_backend(const std::string& name) {
  if (name == "cone") return BackendKind::Cone;
  if (name == "box") return BackendKind::Box;
  if (name == "offline") return BackendKind::OfflineOracle;
  throw Error(ErrorKind::InvalidInput, "unknown backend '" + name + "'");
}

/// A point y with C X contained in y + K, for cones other than R^d_+.
inline Vector image_apex(const MolpInstance& inst) {
  const int d = inst.d();
  LinearProgram place(Vector::Zero(d));
  for (int j = 0; j < d; ++j) place.set_free(j);
  for (const Halfspace& f : inst.cone.facets) {
    const LpSolution s = solve_lp(detail::feasible_set_lp(inst, inst.C.transpose() * f.normal()));
    if (s.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "infeasible instance");
    if (s.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "problem is not bounded");
    place.add(f.normal(), Relation::LessEqual, s.objective_value);
  }
  const LpSolution s = solve_lp(place);
  if (s.status != LpStatus::Optimal) throw Error(ErrorKind::NumericalFailure, "could not place the cone apex");
  return s.x;
}

struct SolveCliOptions {
  std::optional<double> eps;
  std::string backend = "cone";
  double M = 1e4;
  std::optional<std::string> cone_text;
  std::optional<std::string> out_prefix;  // writes <prefix>.poly and <prefix>.iterations.csv
  bool with_timing = true;
};

inline void write_iterations_csv(std::ostream& os, const SolveReport& r, bool with_timing) {
  os << "step,iteration,alpha,cut,actual,artificial,ve_time_s\n";
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    const IterationRecord& it = r.iterations[i];
    os << i << ',' << it.iteration << ',' << io::format_number(it.alpha) << ',' << (it.cut ? 1 : 0) << ','
       << it.actual << ',' << it.artificial << ',' << (with_timing ? io::format_number(it.ve_seconds) : "0") << '\n';
  }
}

/// Solves an instance and prints the cuts followed by the final outer
/// approximation in polyhedron format.
inline int cmd_solve(const std::string& text, const SolveCliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    std::optional<ConeDD> cone;
    if (opt.cone_text) cone = to_cone(parse_polyhedron_text(*opt.cone_text));
    const MolpInstance inst = parse_instance(text, cone);
    const double eps = opt.eps.value_or(default_epsilon(inst.d()));
    SolveOptions so;
    if (!is_nonnegative_orthant(inst.cone)) so.initial_point = image_apex(inst);
    const SolveReport r = solve_molp(inst, eps, Backend{parse_backend(opt.backend), opt.M}, so);

    out << "# cuts " << r.cuts.size() << '\n';
    out << "# vertices " << r.vertices.size() << '\n';
    for (const Halfspace& h : r.cuts) {
      out << "cut";
      io::write_vector(out, h.normal());
      out << ' ' << io::format_number(h.offset()) << '\n';
    }
    write_polyhedron(out, r.outer);

    if (opt.out_prefix) {
      std::ofstream poly(*opt.out_prefix + ".poly");
      write_polyhedron(poly, r.outer);
      std::ofstream csv(*opt.out_prefix + ".iterations.csv");
      write_iterations_csv(csv, r, opt.with_timing);
      if (!poly || !csv) throw Error(ErrorKind::InvalidInput, "cannot write output files");
    }
    return kOk;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Infeasible) {
      err << "infeasible\n";
      return kError;
    }
    if (e.kind() == ErrorKind::Unbounded) {
      err << "unbounded\n";
      return kError;
    }
    return report_error(err, e);
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

struct BenchCliOptions {
  int d = 2;
  int n = 50;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::optional<double> eps;
  double M = 1e4;
  std::string backends = "offline,box,cone";
  std::optional<std::size_t> subsample;
  bool with_timing = true;
  int repetitions = 1;
  std::size_t workers = 1;
  bool artificial_table = false;
  std::optional<std::string> out_prefix;  // writes <prefix>.records.csv and <prefix>.summary.csv
};

inline std::set<BackendKind> parse_backends(const std::string& list) {
  std::set<BackendKind> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(parse_backend(item));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "no backends selected");
  return out;
}

/// Generates a sample, runs the timing harness and prints the
/// per-iteration summary (or the artificial-vertex table).
inline int cmd_bench(const BenchCliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (opt.samples == 0) throw Error(ErrorKind::InvalidInput, "samples must be positive");
    BenchConfig cfg;
    cfg.eps = opt.eps.value_or(default_epsilon(opt.d));
    cfg.M = opt.M;
    cfg.backends = parse_backends(opt.backends);
    cfg.repetitions = opt.repetitions;
    cfg.workers = opt.workers;
    const std::vector<BenchInstance> sample = draw_sample(opt.d, opt.n, opt.samples, opt.seed);
    const BenchResult result = run_benchmark(sample, cfg);
    for (const InstanceRun& r : result.runs) {
      if (r.excluded) err << "instance " << r.instance << " excluded: " << r.error << '\n';
    }
    const std::vector<SummaryRow> summary = summarize(result, opt.subsample);

    if (opt.artificial_table) {
      std::vector<BenchRecord> kept;
      const std::vector<std::size_t> ids = select_subsample(result.runs, opt.subsample);
      const std::set<std::size_t> keep(ids.begin(), ids.end());
      for (const BenchRecord& r : result.records) {
        if (keep.count(r.instance) != 0) kept.push_back(r);
      }
      out << "iteration,avg_actual,avg_artificial,pct_artificial,samples\n";
      for (const ArtificialRow& row : artificial_vertex_table(kept)) {
        out << row.iteration << ',' << io::format_number(row.avg_actual) << ','
            << io::format_number(row.avg_artificial) << ',' << io::format_number(row.pct_artificial) << ','
            << row.samples << '\n';
      }
    } else {
      write_summary_csv(out, summary, opt.with_timing);
    }

    if (opt.out_prefix) {
      std::ofstream rec(*opt.out_prefix + ".records.csv");
      write_records_csv(rec, result.records, opt.with_timing);
      std::ofstream sum(*opt.out_prefix + ".summary.csv");
      write_summary_csv(sum, summary, opt.with_timing);
      if (!rec || !sum) throw Error(ErrorKind::InvalidInput, "cannot write output files");
    }
    return kOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

/// Prints the first accepted random instance for the given shape and seed.
inline int cmd_generate(int d, int n, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<BenchInstance> one = draw_sample(d, n, 1, seed);
    write_instance(out, one.front().instance);
    return kOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace ddvep::cli

#endif  // DDVEP_TOOLS_COMMANDS_HPP
