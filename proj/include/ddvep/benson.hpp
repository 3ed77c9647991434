#ifndef DDVEP_BENSON_HPP
#define DDVEP_BENSON_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ddvep/dd.hpp"
#include "ddvep/error.hpp"
#include "ddvep/lp.hpp"
#include "ddvep/oracle.hpp"
#include "ddvep/polyhedron.hpp"

namespace ddvep {

/// minimize C x with respect to the cone order, subject to A x <= b, x >= 0.
struct MolpInstance {
  Matrix C;  // d x n
  Matrix A;  // m x n
  Vector b;  // m
  ConeDD cone;
  Vector k;  // scalarization direction, interior of the cone

  int d() const { return static_cast<int>(C.rows()); }
  int n() const { return static_cast<int>(C.cols()); }
  int m() const { return static_cast<int>(A.rows()); }

  void check() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidInput, "instance: " + msg); };
    if (d() < 2) fail("need at least two objectives");
    if (n() < 1) fail("need at least one variable");
    if (A.cols() != n()) fail("A has the wrong number of columns");
    if (b.size() != m()) fail("b has the wrong length");
    if (cone.dim != d()) fail("cone dimension differs from the number of objectives");
    if (k.size() != d()) fail("k has the wrong length");
    for (const Halfspace& f : cone.facets) {
      if (!(f.normal().dot(k) > 0.0)) fail("k is not in the interior of the ordering cone");
    }
  }
};

/// Sum of the cone's extreme directions; for R^d_+ the all-ones vector.
inline Vector default_direction(const ConeDD& cone) {
  Vector k = Vector::Zero(cone.dim);
  for (const Vector& z : cone.directions) k += z;
  return k;
}

inline MolpInstance make_instance(Matrix C, Matrix A, Vector b, std::optional<ConeDD> cone = std::nullopt,
                                  std::optional<Vector> k = std::nullopt) {
  MolpInstance inst;
  const int d = static_cast<int>(C.rows());
  inst.cone = cone ? std::move(*cone) : standard_cone_dd(d);
  inst.k = k ? std::move(*k) : default_direction(inst.cone);
  inst.C = std::move(C);
  inst.A = std::move(A);
  inst.b = std::move(b);
  inst.check();
  return inst;
}

namespace detail {

inline LinearProgram feasible_set_lp(const MolpInstance& inst, Vector objective) {
  LinearProgram lp(std::move(objective));
  for (int i = 0; i < inst.m(); ++i) lp.add(inst.A.row(i).transpose(), Relation::LessEqual, inst.b(i));
  return lp;
}

}  // namespace detail

struct IdealPoint {
  Vector y;
  std::vector<Vector> argmins;  // one minimizer per objective
};

/// Componentwise minima of the objectives. Returns nullopt when some
/// objective is unbounded below (the problem is not bounded).
inline std::optional<IdealPoint> ideal_point(const MolpInstance& inst) {
  if (!is_nonnegative_orthant(inst.cone)) {
    throw Error(ErrorKind::Unsupported, "ideal point is defined for the nonnegative orthant only");
  }
  IdealPoint out;
  out.y.resize(inst.d());
  for (int i = 0; i < inst.d(); ++i) {
    const LpSolution s = solve_lp(detail::feasible_set_lp(inst, inst.C.row(i).transpose()));
    if (s.status == LpStatus::Infeasible) throw Error(ErrorKind::Infeasible, "infeasible instance");
    if (s.status == LpStatus::Unbounded) return std::nullopt;
    out.y(i) = s.objective_value;
    out.argmins.push_back(s.x);
  }
  return out;
}

struct ScalarizationResult {
  Vector x_v;
  double alpha_v = 0.0;
  Vector w_v;
  Vector y_v;
};

/// Pascoletti-Serafini problem at v: min alpha s.t. C x <=_K v + alpha k,
/// A x <= b, x >= 0, alpha free. The cone order is encoded through the cone
/// facet normals, one row each; w_v is the dual of that block mapped back to
/// objective space.
inline ScalarizationResult scalarize(const MolpInstance& inst, const Vector& v) {
  if (v.size() != inst.d()) throw Error(ErrorKind::InvalidInput, "scalarize: point dimension mismatch");
  const int n = inst.n();
  Vector obj = Vector::Zero(n + 1);
  obj(n) = 1.0;
  LinearProgram lp(obj);
  lp.set_free(n);
  for (const Halfspace& f : inst.cone.facets) {
    const Vector& a = f.normal();
    Vector row(n + 1);
    row.head(n) = inst.C.transpose() * a;
    row(n) = -a.dot(inst.k);
    lp.add(std::move(row), Relation::LessEqual, a.dot(v));
  }
  for (int i = 0; i < inst.m(); ++i) {
    Vector row = Vector::Zero(n + 1);
    row.head(n) = inst.A.row(i).transpose();
    lp.add(std::move(row), Relation::LessEqual, inst.b(i));
  }
  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::Infeasible) {
    throw Error(ErrorKind::NumericalFailure, "scalarization LP reported infeasible");
  }
  if (s.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "scalarization LP is unbounded");

  ScalarizationResult r;
  r.x_v = s.x.head(n);
  r.alpha_v = s.x(n);
  r.w_v = Vector::Zero(inst.d());
  for (std::size_t j = 0; j < inst.cone.facets.size(); ++j) {
    r.w_v -= s.duals(static_cast<Eigen::Index>(j)) * inst.cone.facets[j].normal();
  }
  r.y_v = v + r.alpha_v * inst.k;
  return r;
}

/// (w_v)^T y >= (w_v)^T y_v.
inline Halfspace supporting_halfspace(const ScalarizationResult& res) {
  if (!(res.w_v.norm() > 1e-12)) throw Error(ErrorKind::DegenerateGeometry, "scalarization dual is zero");
  return Halfspace(res.w_v, res.w_v.dot(res.y_v));
}

enum class BackendKind { OfflineOracle, Box, Cone };

inline const char* to_string(BackendKind k) {
  switch (k) {
    case BackendKind::OfflineOracle: return "offline";
    case BackendKind::Box: return "box";
    case BackendKind::Cone: return "cone";
  }
  return "unknown";
}

struct Backend {
  BackendKind kind = BackendKind::Cone;
  double M = 1e4;  // Box only
};

/// A vertex offered for scalarization. Keys are stable across cuts and
/// increase with creation order.
struct Candidate {
  std::uint64_t key;
  Vector coords;
};

/// The outer approximation as maintained by one vertex enumeration backend.
/// Every backend also keeps the plain H-representation.
class OuterApproximation {
 public:
  OuterApproximation(const Backend& backend, const Vector& apex, const ConeDD& cone)
      : backend_(backend), cone_(cone), hrep_{cone.dim, {}, cone.directions} {
    for (const Halfspace& f : cone.facets) hrep_.halfspaces.emplace_back(f.normal(), f.normal().dot(apex));
    switch (backend.kind) {
      case BackendKind::Cone:
        polyhedron_ = init_cone(apex, cone);
        break;
      case BackendKind::Box: {
        BoxPolyhedron box = init_box(apex, cone, backend.M);
        polyhedron_ = std::move(box.polyhedron);
        artificial_ = box.artificial;
        break;
      }
      case BackendKind::OfflineOracle:
        tracked_.push_back({next_key_++, apex});
        break;
    }
  }

  const Backend& backend() const { return backend_; }
  const HRep& hrep() const { return hrep_; }
  const std::optional<AdjacencyPolyhedron>& polyhedron() const { return polyhedron_; }
  std::optional<FacetId> artificial_facet() const { return artificial_; }

  /// Intersects with H using the backend's own vertex enumeration.
  CutKind cut(const Halfspace& H) {
    hrep_.halfspaces.push_back(H);
    switch (backend_.kind) {
      case BackendKind::Cone: return onlinevert2(*polyhedron_, H).kind;
      case BackendKind::Box: return onlinevert(*polyhedron_, H).kind;
      case BackendKind::OfflineOracle: return reenumerate();
    }
    return CutKind::Unchanged;
  }

  bool is_artificial(ElementId v) const {
    return artificial_ && polyhedron_->has_facet(*artificial_) && polyhedron_->facets_of(v).count(*artificial_) != 0;
  }

  /// Vertices eligible for scalarization in creation order. Artificial
  /// vertices of the box backend are excluded.
  std::vector<Candidate> candidates() const {
    std::vector<Candidate> out;
    if (polyhedron_) {
      for (const auto& [id, v] : polyhedron_->vertices()) {
        if (!is_artificial(id)) out.push_back({index(id), v});
      }
    } else {
      out = tracked_;
    }
    return out;
  }

  std::size_t artificial_count() const {
    if (!artificial_ || !polyhedron_->has_facet(*artificial_)) return 0;
    std::size_t n = 0;
    for (const auto& [id, v] : polyhedron_->vertices()) n += is_artificial(id) ? 1 : 0;
    return n;
  }

  std::size_t actual_count() const {
    return polyhedron_ ? polyhedron_->vertices().size() - artificial_count() : tracked_.size();
  }

  /// Vertices of the approximation of the upper image (artificial ones
  /// stripped for the box backend).
  std::vector<Vector> outer_vertices() const {
    std::vector<Vector> out;
    for (const Candidate& c : candidates()) out.push_back(c.coords);
    return out;
  }

  /// The approximation conv V + K as a double description.
  AdjacencyPolyhedron outer_polyhedron() const {
    if (backend_.kind == BackendKind::Cone) return *polyhedron_;
    return from_representation(cone_.dim, outer_vertices(), cone_.directions, hrep_.halfspaces);
  }

 private:
  CutKind reenumerate() {
    const VRep vr = enumerate_vertices_brute(hrep_);
    if (vr.vertices.empty()) return CutKind::Empty;
    std::vector<Candidate> next;
    std::vector<bool> matched(vr.vertices.size(), false);
    for (const Candidate& c : tracked_) {
      for (std::size_t i = 0; i < vr.vertices.size(); ++i) {
        if (!matched[i] && (vr.vertices[i] - c.coords).norm() <= 1e-7 * (1.0 + c.coords.norm())) {
          matched[i] = true;
          next.push_back({c.key, vr.vertices[i]});
          break;
        }
      }
    }
    const bool unchanged = next.size() == tracked_.size() && next.size() == vr.vertices.size();
    for (std::size_t i = 0; i < vr.vertices.size(); ++i) {
      if (!matched[i]) next.push_back({next_key_++, vr.vertices[i]});
    }
    tracked_ = std::move(next);
    return unchanged ? CutKind::Unchanged : CutKind::Updated;
  }

  Backend backend_;
  ConeDD cone_;
  HRep hrep_;
  std::optional<AdjacencyPolyhedron> polyhedron_;
  std::optional<FacetId> artificial_;
  std::vector<Candidate> tracked_;
  std::uint64_t next_key_ = 0;
};

struct IterationRecord {
  std::size_t iteration = 0;  // index i of the approximation P^i that held the vertex
  Vector vertex;
  double alpha = 0.0;
  bool cut = false;
  double ve_seconds = 0.0;  // time spent in the vertex enumeration call of this cut
  std::size_t actual = 0;   // counts after the cut (or current ones when no cut)
  std::size_t artificial = 0;
};

struct SolveReport {
  AdjacencyPolyhedron outer{2};
  std::vector<Vector> vertices;  // final outer approximation vertices
  std::vector<Halfspace> halfspaces;
  std::vector<Vector> efficient_set;
  std::vector<IterationRecord> iterations;
  std::vector<Halfspace> cuts;
  Vector ideal;
  double epsilon = 0.0;
};

struct SolveOptions {
  std::size_t max_cuts = 100'000;
  /// Required for cones other than R^d_+: a point y with P subset {y} + K.
  std::optional<Vector> initial_point;
  /// Called after every cut with the cut index (1-based), the halfspace and
  /// the updated approximation.
  std::function<void(std::size_t, const Halfspace&, const OuterApproximation&)> on_cut;
};

/// Benson-type outer approximation of the upper image. Vertices are
/// processed first-in-first-out; a vertex found within eps is not
/// scalarized again while it survives.
inline SolveReport solve_molp(const MolpInstance& inst, double eps, const Backend& backend,
                              const SolveOptions& options = {}) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
  inst.check();
  SolveReport report;
  report.epsilon = eps;

  Vector apex;
  if (options.initial_point) {
    apex = *options.initial_point;
  } else {
    const auto ideal = ideal_point(inst);
    if (!ideal) throw Error(ErrorKind::Unbounded, "problem is not bounded (ideal point is not finite)");
    apex = ideal->y;
    report.efficient_set = ideal->argmins;
  }
  report.ideal = apex;

  OuterApproximation approx(backend, apex, inst.cone);
  std::set<std::uint64_t> verified;
  std::size_t cuts = 0;
  for (;;) {
    const std::vector<Candidate> cand = approx.candidates();
    const Candidate* next = nullptr;
    for (const Candidate& c : cand) {
      if (verified.count(c.key) == 0) {
        next = &c;
        break;
      }
    }
    if (next == nullptr) break;

    const ScalarizationResult res = scalarize(inst, next->coords);
    report.efficient_set.push_back(res.x_v);
    IterationRecord rec;
    rec.iteration = cuts;
    rec.vertex = next->coords;
    rec.alpha = res.alpha_v;
    if (res.alpha_v > eps) {
      const Halfspace H = supporting_halfspace(res);
      const auto t0 = std::chrono::steady_clock::now();
      const CutKind kind = approx.cut(H);
      rec.ve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (kind != CutKind::Updated) {
        throw Error(ErrorKind::NumericalFailure,
                    std::string("supporting halfspace did not cut off its vertex (") + to_string(kind) + ")");
      }
      rec.cut = true;
      report.cuts.push_back(H);
      ++cuts;
      if (options.on_cut) options.on_cut(cuts, H, approx);
      if (cuts >= options.max_cuts) {
        throw Error(ErrorKind::NumericalFailure, "cut limit reached without termination");
      }
    } else {
      verified.insert(next->key);
    }
    rec.actual = approx.actual_count();
    rec.artificial = approx.artificial_count();
    report.iterations.push_back(std::move(rec));
  }

  report.vertices = approx.outer_vertices();
  report.halfspaces = approx.hrep().halfspaces;
  report.outer = approx.outer_polyhedron();
  return report;
}

}  // namespace ddvep

#endif  // DDVEP_BENSON_HPP
