#ifndef DDVEP_POLYHEDRON_HPP
#define DDVEP_POLYHEDRON_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ddvep/error.hpp"

namespace ddvep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances shared by the polyhedral kernel.
///
/// Classification of a point against a hyperplane is relative to the size of
/// the quantities involved, since cuts produced from LP duals are inexact and
/// vertex coordinates may reach the big-M scale of the box initialisation.
namespace tol {

inline constexpr double kClassRel = 1e-9;
inline constexpr double kOnRel = 1e-8;
inline constexpr double kDupRel = 1e-8;

inline double classification(const Vector& a, double b, const Vector& v) {
  return kClassRel * (1.0 + std::abs(b) + a.norm() * v.norm());
}

// Directions have no offset; the test is a^T z = 0 relative to the scale.
inline double parallel(const Vector& a, const Vector& z) {
  return kClassRel * (1.0 + a.norm() * z.norm());
}

inline double on_facet(const Vector& a, double b, const Vector& v) {
  return kOnRel * (1.0 + std::abs(b) + a.norm() * v.norm());
}

inline double duplicate(const Vector& v) { return kDupRel * (1.0 + v.norm()); }

}  // namespace tol

/// The closed halfspace { y : a^T y >= b }. Its boundary hyperplane is
/// { y : a^T y = b }.
class Halfspace {
 public:
  Halfspace(Vector a, double b) : a_(std::move(a)), b_(b) {
    if (a_.size() < 2) {
      throw Error(ErrorKind::InvalidInput, "halfspace dimension must be at least 2");
    }
    if (!(a_.norm() > 0.0) || !std::isfinite(a_.norm()) || !std::isfinite(b_)) {
      throw Error(ErrorKind::InvalidInput, "halfspace normal must be finite and nonzero");
    }
  }

  const Vector& normal() const { return a_; }
  double offset() const { return b_; }
  int dim() const { return static_cast<int>(a_.size()); }

  /// a^T y - b; positive in the interior.
  double slack(const Vector& y) const { return a_.dot(y) - b_; }

 private:
  Vector a_;
  double b_;
};

/// Vertices and directions share one id space; facets have their own.
/// Ids come from monotone counters and are never reused.
enum class ElementId : std::uint64_t {};
enum class FacetId : std::uint64_t {};

inline std::uint64_t index(ElementId id) { return static_cast<std::uint64_t>(id); }
inline std::uint64_t index(FacetId id) { return static_cast<std::uint64_t>(id); }

using ElementSet = std::set<ElementId>;
using FacetSet = std::set<FacetId>;

/// A pointed polyhedron in double description form: vertices, extreme
/// directions, facets, and the bidirectional vertex/direction-facet adjacency
/// lists. members_of(f) holds both vertices and directions.
class AdjacencyPolyhedron {
 public:
  explicit AdjacencyPolyhedron(int dim) : dim_(dim) {
    if (dim < 2) throw Error(ErrorKind::InvalidInput, "polyhedron dimension must be at least 2");
  }

  int dim() const { return dim_; }
  bool bounded() const { return directions_.empty(); }

  ElementId add_vertex(Vector coords) {
    check_dim(coords);
    const auto id = ElementId{next_element_++};
    vertices_.emplace(id, std::move(coords));
    facets_of_.emplace(id, FacetSet{});
    return id;
  }

  ElementId add_direction(Vector coords) {
    check_dim(coords);
    if (!(coords.norm() > 0.0)) throw Error(ErrorKind::InvalidInput, "direction must be nonzero");
    const auto id = ElementId{next_element_++};
    directions_.emplace(id, std::move(coords));
    facets_of_.emplace(id, FacetSet{});
    return id;
  }

  FacetId add_facet(Halfspace h) {
    if (h.dim() != dim_) throw Error(ErrorKind::InvalidInput, "facet dimension mismatch");
    const auto id = FacetId{next_facet_++};
    facets_.emplace(id, std::move(h));
    members_of_.emplace(id, ElementSet{});
    return id;
  }

  void link(FacetId f, ElementId x) {
    facets_of_mut(x).insert(f);
    members_of_mut(f).insert(x);
  }

  void unlink(FacetId f, ElementId x) {
    facets_of_mut(x).erase(f);
    members_of_mut(f).erase(x);
  }

  /// One-sided removal of x from members_of(f). Leaves the adjacency
  /// asymmetric; exists so that validate() can be exercised on broken input.
  void unlink_member_only(FacetId f, ElementId x) { members_of_mut(f).erase(x); }

  void erase_vertex(ElementId v) {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw unknown(v);
    for (FacetId f : facets_of_.at(v)) {
      auto m = members_of_.find(f);
      if (m != members_of_.end()) m->second.erase(v);
    }
    facets_of_.erase(v);
    vertices_.erase(it);
  }

  void erase_facet(FacetId f) {
    auto it = facets_.find(f);
    if (it == facets_.end()) throw unknown(f);
    for (ElementId x : members_of_.at(f)) {
      auto fo = facets_of_.find(x);
      if (fo != facets_of_.end()) fo->second.erase(f);
    }
    members_of_.erase(f);
    facets_.erase(it);
  }

  bool has_vertex(ElementId x) const { return vertices_.count(x) != 0; }
  bool has_direction(ElementId x) const { return directions_.count(x) != 0; }
  bool has_element(ElementId x) const { return has_vertex(x) || has_direction(x); }
  bool has_facet(FacetId f) const { return facets_.count(f) != 0; }

  /// True for any id ever handed out by add_facet, including erased ones.
  bool allocated(FacetId f) const { return index(f) < next_facet_; }

  const Vector& coords(ElementId x) const {
    if (auto it = vertices_.find(x); it != vertices_.end()) return it->second;
    if (auto it = directions_.find(x); it != directions_.end()) return it->second;
    throw unknown(x);
  }

  const Halfspace& halfspace(FacetId f) const {
    auto it = facets_.find(f);
    if (it == facets_.end()) throw unknown(f);
    return it->second;
  }

  const std::map<ElementId, Vector>& vertices() const { return vertices_; }
  const std::map<ElementId, Vector>& directions() const { return directions_; }
  const std::map<FacetId, Halfspace>& facets() const { return facets_; }

  const FacetSet& facets_of(ElementId x) const {
    auto it = facets_of_.find(x);
    if (it == facets_of_.end()) throw unknown(x);
    return it->second;
  }

  const ElementSet& members_of(FacetId f) const {
    auto it = members_of_.find(f);
    if (it == members_of_.end()) throw unknown(f);
    return it->second;
  }

  std::vector<Vector> vertex_coords() const {
    std::vector<Vector> out;
    out.reserve(vertices_.size());
    for (const auto& [id, v] : vertices_) out.push_back(v);
    return out;
  }

  std::vector<Vector> direction_coords() const {
    std::vector<Vector> out;
    out.reserve(directions_.size());
    for (const auto& [id, z] : directions_) out.push_back(z);
    return out;
  }

 private:
  void check_dim(const Vector& v) const {
    if (v.size() != dim_) throw Error(ErrorKind::InvalidInput, "coordinate dimension mismatch");
  }

  FacetSet& facets_of_mut(ElementId x) {
    auto it = facets_of_.find(x);
    if (it == facets_of_.end()) throw unknown(x);
    return it->second;
  }

  ElementSet& members_of_mut(FacetId f) {
    auto it = members_of_.find(f);
    if (it == members_of_.end()) throw unknown(f);
    return it->second;
  }

  static Error unknown(ElementId x) {
    return Error(ErrorKind::InvalidInput, "unknown vertex/direction id " + std::to_string(index(x)));
  }
  static Error unknown(FacetId f) {
    return Error(ErrorKind::InvalidInput, "unknown facet id " + std::to_string(index(f)));
  }

  int dim_;
  std::uint64_t next_element_ = 0;
  std::uint64_t next_facet_ = 0;
  std::map<ElementId, Vector> vertices_;
  std::map<ElementId, Vector> directions_;
  std::map<FacetId, Halfspace> facets_;
  std::map<ElementId, FacetSet> facets_of_;
  std::map<FacetId, ElementSet> members_of_;
};

/// Double description of a solid pointed polyhedral ordering cone: extreme
/// directions, facets through the origin, and the index-based adjacency
/// between them.
struct ConeDD {
  int dim = 0;
  std::vector<Vector> directions;
  std::vector<Halfspace> facets;
  std::vector<std::vector<std::size_t>> facets_of_direction;
  std::vector<std::vector<std::size_t>> directions_of_facet;

  /// Builds the adjacency from geometry: a direction lies on a cone facet
  /// iff the facet normal is orthogonal to it.
  static ConeDD from_generators(std::vector<Vector> directions, std::vector<Halfspace> facets);

  /// Throws InvalidInput when an invariant does not hold.
  void check() const;
};

/// Standard double description of the nonnegative orthant R^d_+.
inline ConeDD standard_cone_dd(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidInput, "cone dimension must be at least 2");
  ConeDD cone;
  cone.dim = d;
  for (int i = 0; i < d; ++i) {
    cone.directions.push_back(Vector::Unit(d, i));
    cone.facets.emplace_back(Vector::Unit(d, i), 0.0);
  }
  cone.facets_of_direction.resize(d);
  cone.directions_of_facet.resize(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      cone.facets_of_direction[i].push_back(static_cast<std::size_t>(j));
      cone.directions_of_facet[i].push_back(static_cast<std::size_t>(j));
    }
  }
  return cone;
}

inline bool is_nonnegative_orthant(const ConeDD& cone) {
  if (static_cast<int>(cone.directions.size()) != cone.dim) return false;
  std::vector<bool> seen(cone.dim, false);
  for (const Vector& z : cone.directions) {
    Eigen::Index i = 0;
    const double top = z.maxCoeff(&i);
    if (!(top > 0.0) || std::abs(z.sum() - top) > 0.0 || z.minCoeff() < 0.0 || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

inline ConeDD ConeDD::from_generators(std::vector<Vector> directions, std::vector<Halfspace> facets) {
  ConeDD cone;
  cone.dim = directions.empty() ? 0 : static_cast<int>(directions.front().size());
  cone.directions = std::move(directions);
  cone.facets = std::move(facets);
  cone.facets_of_direction.assign(cone.directions.size(), {});
  cone.directions_of_facet.assign(cone.facets.size(), {});
  for (std::size_t i = 0; i < cone.directions.size(); ++i) {
    for (std::size_t j = 0; j < cone.facets.size(); ++j) {
      const Vector& a = cone.facets[j].normal();
      if (std::abs(a.dot(cone.directions[i])) <= tol::parallel(a, cone.directions[i])) {
        cone.facets_of_direction[i].push_back(j);
        cone.directions_of_facet[j].push_back(i);
      }
    }
  }
  cone.check();
  return cone;
}

inline void ConeDD::check() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidInput, "cone: " + msg); };
  if (dim < 2) fail("dimension must be at least 2");
  const auto m = directions.size();
  const auto l = facets.size();
  if (m < static_cast<std::size_t>(dim) || l < static_cast<std::size_t>(dim)) {
    fail("a solid pointed cone needs at least d directions and d facets");
  }
  Matrix span(dim, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    if (directions[i].size() != dim) fail("direction dimension mismatch");
    span.col(static_cast<Eigen::Index>(i)) = directions[i];
  }
  if (Eigen::FullPivLU<Matrix>(span).rank() != dim) fail("directions do not span the space");
  for (const Halfspace& f : facets) {
    if (f.dim() != dim) fail("facet dimension mismatch");
    if (f.offset() != 0.0) fail("facet offsets must be exactly 0");
  }
  if (facets_of_direction.size() != m || directions_of_facet.size() != l) fail("adjacency size mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j : facets_of_direction[i]) {
      if (j >= l) fail("adjacency index out of range");
      const auto& back = directions_of_facet[j];
      if (std::find(back.begin(), back.end(), i) == back.end()) fail("adjacency is not symmetric");
    }
  }
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t i : directions_of_facet[j]) {
      if (i >= m) fail("adjacency index out of range");
      const auto& back = facets_of_direction[i];
      if (std::find(back.begin(), back.end(), j) == back.end()) fail("adjacency is not symmetric");
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (facets[j].normal().dot(directions[i]) < -tol::parallel(facets[j].normal(), directions[i])) {
        fail("a direction violates a facet");
      }
    }
  }
}

/// Rebuilds a double description from coordinates alone: a vertex is
/// adjacent to a halfspace when it lies on its boundary, a direction when it
/// is parallel to the boundary of a halfspace that has an adjacent vertex.
/// Halfspaces touching no vertex are dropped.
inline AdjacencyPolyhedron from_representation(int d, const std::vector<Vector>& vertices,
                                               const std::vector<Vector>& directions,
                                               const std::vector<Halfspace>& halfspaces) {
  AdjacencyPolyhedron P(d);
  std::vector<ElementId> vid, zid;
  for (const Vector& v : vertices) vid.push_back(P.add_vertex(v));
  for (const Vector& z : directions) zid.push_back(P.add_direction(z));
  for (const Halfspace& h : halfspaces) {
    std::vector<ElementId> on;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (std::abs(h.slack(vertices[i])) <= tol::on_facet(h.normal(), h.offset(), vertices[i])) on.push_back(vid[i]);
    }
    if (on.empty()) continue;
    for (std::size_t i = 0; i < directions.size(); ++i) {
      if (std::abs(h.normal().dot(directions[i])) <= tol::on_facet(h.normal(), 0.0, directions[i])) {
        on.push_back(zid[i]);
      }
    }
    const FacetId f = P.add_facet(h);
    for (ElementId x : on) P.link(f, x);
  }
  return P;
}

/// One failed invariant reported by validate().
struct Violation {
  std::string invariant;
  std::vector<std::uint64_t> ids;
  double residual = 0.0;

  std::string describe() const {
    std::ostringstream os;
    os << invariant << " [ids:";
    for (auto id : ids) os << ' ' << id;
    os << "] residual=" << residual;
    return os.str();
  }
};

/// Checks every structural and geometric invariant of P. Returns an empty
/// list iff all of them hold. Facet ids in violations are reported as-is;
/// the invariant name tells which id space each entry belongs to.
inline std::vector<Violation> validate(const AdjacencyPolyhedron& P) {
  std::vector<Violation> out;
  const int d = P.dim();

  auto check_element = [&](ElementId x, const Vector& c, bool is_vertex) {
    for (FacetId f : P.facets_of(x)) {
      if (!P.has_facet(f)) {
        out.push_back({"dangling facet in facets_of", {index(x), index(f)}, 0.0});
        continue;
      }
      if (P.members_of(f).count(x) == 0) {
        out.push_back({"asymmetric adjacency: element lists facet but not vice versa", {index(f), index(x)}, 0.0});
      }
    }
    const auto need = static_cast<std::size_t>(is_vertex ? d : d - 1);
    if (P.facets_of(x).size() < need) {
      out.push_back({is_vertex ? "vertex on fewer than d facets" : "direction on fewer than d-1 facets",
                     {index(x)},
                     static_cast<double>(P.facets_of(x).size())});
    }
    for (const auto& [f, h] : P.facets()) {
      if (is_vertex) {
        const double s = h.slack(c);
        if (s < -tol::on_facet(h.normal(), h.offset(), c)) {
          out.push_back({"vertex violates facet halfspace", {index(x), index(f)}, s});
        }
      } else {
        const double s = h.normal().dot(c);
        if (s < -tol::on_facet(h.normal(), 0.0, c)) {
          out.push_back({"direction leaves facet halfspace", {index(x), index(f)}, s});
        }
      }
    }
  };

  for (const auto& [x, v] : P.vertices()) check_element(x, v, true);
  for (const auto& [x, z] : P.directions()) {
    if (!(z.norm() > 0.0)) out.push_back({"zero direction", {index(x)}, 0.0});
    check_element(x, z, false);
  }

  for (const auto& [f, h] : P.facets()) {
    for (ElementId x : P.members_of(f)) {
      if (!P.has_element(x)) {
        out.push_back({"dangling element in members_of", {index(f), index(x)}, 0.0});
        continue;
      }
      if (P.facets_of(x).count(f) == 0) {
        out.push_back({"asymmetric adjacency: facet lists element but not vice versa", {index(f), index(x)}, 0.0});
      }
      if (P.has_vertex(x)) {
        const Vector& v = P.coords(x);
        const double s = h.slack(v);
        if (std::abs(s) > tol::on_facet(h.normal(), h.offset(), v)) {
          out.push_back({"adjacent vertex off facet hyperplane", {index(f), index(x)}, s});
        }
      } else {
        const Vector& z = P.coords(x);
        const double s = h.normal().dot(z);
        if (std::abs(s) > tol::on_facet(h.normal(), 0.0, z)) {
          out.push_back({"adjacent direction not parallel to facet", {index(f), index(x)}, s});
        }
      }
    }
  }
  return out;
}

}  // namespace ddvep

#endif  // DDVEP_POLYHEDRON_HPP
