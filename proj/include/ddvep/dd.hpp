#ifndef DDVEP_DD_HPP
#define DDVEP_DD_HPP

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddvep/error.hpp"
#include "ddvep/polyhedron.hpp"

namespace ddvep {

enum class CutKind { Unchanged, Empty, Updated };

inline const char* to_string(CutKind k) {
  switch (k) {
    case CutKind::Unchanged: return "unchanged";
    case CutKind::Empty: return "empty";
    case CutKind::Updated: return "updated";
  }
  return "unknown";
}

/// Result of intersecting a polyhedron with one halfspace. The polyhedron
/// itself is updated in place; on Empty it is left as it was and must be
/// treated as the empty set by the caller.
struct CutOutcome {
  CutKind kind = CutKind::Unchanged;
  std::optional<FacetId> new_facet;
};

/// Edge test on adjacency lists only. Returns the facets shared by x_plus
/// and x_minus when the two form an edge of P (x_plus may be a direction,
/// in which case the edge is the ray from x_minus), and the empty set
/// otherwise.
inline FacetSet isedge(const AdjacencyPolyhedron& P, ElementId x_plus, ElementId x_minus) {
  if (!P.has_element(x_plus)) {
    throw Error(ErrorKind::InvalidInput, "isedge: unknown element id " + std::to_string(index(x_plus)));
  }
  if (!P.has_vertex(x_minus)) {
    throw Error(ErrorKind::InvalidInput, "isedge: second argument must be a vertex id");
  }
  const FacetSet& fp = P.facets_of(x_plus);
  const FacetSet& fm = P.facets_of(x_minus);
  FacetSet common;
  std::set_intersection(fp.begin(), fp.end(), fm.begin(), fm.end(), std::inserter(common, common.end()));
  // With no shared facet the running intersection is all of P's members,
  // which never equals the pair for a full-dimensional polyhedron.
  if (common.empty()) return {};

  // Start from the smallest member list; the intersection is order-free.
  auto smallest = std::min_element(common.begin(), common.end(), [&](FacetId a, FacetId b) {
    return P.members_of(a).size() < P.members_of(b).size();
  });
  std::vector<ElementId> running(P.members_of(*smallest).begin(), P.members_of(*smallest).end());
  std::vector<ElementId> scratch;
  for (FacetId f : common) {
    if (running.size() <= 2) break;
    if (f == *smallest) continue;
    const ElementSet& members = P.members_of(f);
    scratch.clear();
    std::set_intersection(running.begin(), running.end(), members.begin(), members.end(),
                          std::back_inserter(scratch));
    running.swap(scratch);
  }
  const bool pair = running.size() == 2 &&
                    std::find(running.begin(), running.end(), x_plus) != running.end() &&
                    std::find(running.begin(), running.end(), x_minus) != running.end();
  return pair ? common : FacetSet{};
}

/// The point where the segment [v_plus, v_minus] crosses the boundary of H.
/// Requires v_plus strictly inside and v_minus strictly outside.
inline Vector segment_hyperplane_intersection(const Vector& v_plus, const Vector& v_minus, const Halfspace& H) {
  const double hp = H.normal().dot(v_plus);
  const double hm = H.normal().dot(v_minus);
  const double denom = hp - hm;
  const double scale = std::max(v_plus.norm(), v_minus.norm());
  if (denom <= tol::kClassRel * (1.0 + std::abs(H.offset()) + H.normal().norm() * scale)) {
    throw Error(ErrorKind::DegenerateGeometry,
                "segment does not cross the hyperplane (denominator " + std::to_string(denom) + ")");
  }
  const double lambda = (H.offset() - hm) / denom;
  return v_minus + lambda * (v_plus - v_minus);
}

/// The point where the ray { v_minus + g z : g >= 0 } meets the boundary of H.
inline Vector ray_hyperplane_intersection(const Vector& v_minus, const Vector& z, const Halfspace& H) {
  const double az = H.normal().dot(z);
  if (az <= tol::parallel(H.normal(), z)) {
    throw Error(ErrorKind::DegenerateGeometry, "ray is parallel to or points away from the hyperplane");
  }
  const double gamma = (H.offset() - H.normal().dot(v_minus)) / az;
  return v_minus + gamma * z;
}

namespace detail {

inline std::optional<ElementId> find_duplicate(const AdjacencyPolyhedron& P, const std::vector<ElementId>& candidates,
                                               const Vector& v) {
  const double eps = tol::duplicate(v);
  for (ElementId id : candidates) {
    if ((P.coords(id) - v).norm() <= eps) return id;
  }
  return std::nullopt;
}

// Shared body of onlinevert and onlinevert2. With use_directions the main
// loop also runs over the extreme directions of P.
inline CutOutcome cut(AdjacencyPolyhedron& P, const Halfspace& H, bool use_directions) {
  if (H.dim() != P.dim()) throw Error(ErrorKind::InvalidInput, "halfspace dimension mismatch");
  const Vector& a = H.normal();
  const double b = H.offset();

  std::vector<ElementId> plus, zero, minus;
  for (const auto& [id, v] : P.vertices()) {
    const double s = H.slack(v);
    const double t = tol::classification(a, b, v);
    if (s > t) {
      plus.push_back(id);
    } else if (s < -t) {
      minus.push_back(id);
    } else {
      zero.push_back(id);
    }
  }

  std::vector<ElementId> dir_cross, dir_parallel;
  if (use_directions) {
    for (const auto& [id, z] : P.directions()) {
      const double s = a.dot(z);
      const double t = tol::parallel(a, z);
      if (s < -t) {
        throw Error(ErrorKind::RecessionConeViolation,
                    "cut would shrink the recession cone (a^T z = " + std::to_string(s) + " for direction " +
                        std::to_string(index(id)) + ")");
      }
      (s > t ? dir_cross : dir_parallel).push_back(id);
    }
  }

  if (minus.empty()) return {CutKind::Unchanged, std::nullopt};
  // A direction with a^T z > 0 keeps the ray from any vertex inside H.
  if (plus.empty() && zero.empty() && dir_cross.empty()) return {CutKind::Empty, std::nullopt};

  const FacetId h = P.add_facet(H);
  for (ElementId v : zero) P.link(h, v);

  std::vector<ElementId> candidates = plus;
  candidates.insert(candidates.end(), zero.begin(), zero.end());

  auto add_point = [&](const Vector& point, const FacetSet& shared) {
    ElementId id;
    if (auto dup = find_duplicate(P, candidates, point)) {
      id = *dup;
    } else {
      id = P.add_vertex(point);
      candidates.push_back(id);
    }
    P.link(h, id);
    for (FacetId f : shared) P.link(f, id);
  };

  for (ElementId vp : plus) {
    for (ElementId vm : minus) {
      FacetSet shared = isedge(P, vp, vm);
      if (shared.empty()) continue;
      add_point(segment_hyperplane_intersection(P.coords(vp), P.coords(vm), H), shared);
    }
  }
  for (ElementId z : dir_parallel) P.link(h, z);
  for (ElementId z : dir_cross) {
    for (ElementId vm : minus) {
      FacetSet shared = isedge(P, z, vm);
      if (shared.empty()) continue;
      add_point(ray_hyperplane_intersection(P.coords(vm), P.coords(z), H), shared);
    }
  }

  for (ElementId v : minus) P.erase_vertex(v);

  // Keep only facets adjacent to a surviving vertex.
  FacetSet alive;
  for (const auto& [id, v] : P.vertices()) {
    const FacetSet& fs = P.facets_of(id);
    alive.insert(fs.begin(), fs.end());
  }
  std::vector<FacetId> dead;
  for (const auto& [f, hs] : P.facets()) {
    if (alive.count(f) == 0) dead.push_back(f);
  }
  for (FacetId f : dead) P.erase_facet(f);

  return {CutKind::Updated, P.has_facet(h) ? std::optional<FacetId>(h) : std::nullopt};
}

}  // namespace detail

/// Intersects a bounded polyhedron with H, updating vertices, facets and
/// adjacency incrementally.
inline CutOutcome onlinevert(AdjacencyPolyhedron& P, const Halfspace& H) {
  if (!P.bounded()) {
    throw Error(ErrorKind::Unsupported, "onlinevert needs a bounded polyhedron; use onlinevert2");
  }
  return detail::cut(P, H, false);
}

/// Intersects an unbounded polyhedron whose recession cone is spanned by its
/// stored directions with H. The cut must not shrink that cone.
inline CutOutcome onlinevert2(AdjacencyPolyhedron& P, const Halfspace& H) { return detail::cut(P, H, true); }

/// Bounded start polyhedron {y} + conv{0, M z^1, ..., M z^m} and the id of
/// its artificial facet f0 = conv{y + M z^i}.
struct BoxPolyhedron {
  AdjacencyPolyhedron polyhedron;
  FacetId artificial;
};

inline BoxPolyhedron init_box(const Vector& y, const ConeDD& cone, double M) {
  if (!(M > 0.0)) throw Error(ErrorKind::InvalidInput, "init_box: M must be positive");
  cone.check();
  if (y.size() != cone.dim) throw Error(ErrorKind::InvalidInput, "init_box: apex dimension mismatch");
  const int d = cone.dim;
  const auto m = static_cast<Eigen::Index>(cone.directions.size());

  // The cap normal c satisfies c^T z^i = 1 for every direction.
  Matrix zt(m, d);
  for (Eigen::Index i = 0; i < m; ++i) zt.row(i) = cone.directions[static_cast<std::size_t>(i)].transpose();
  const Vector ones = Vector::Ones(m);
  const Vector c = zt.colPivHouseholderQr().solve(ones);
  if ((zt * c - ones).norm() > 1e-9 * (1.0 + ones.norm())) {
    throw Error(ErrorKind::InvalidInput,
                "init_box: cone directions must lie on a common hyperplane c^T z = 1 (rescale them)");
  }

  BoxPolyhedron box{AdjacencyPolyhedron(d), FacetId{0}};
  AdjacencyPolyhedron& P = box.polyhedron;
  const ElementId v0 = P.add_vertex(y);
  std::vector<ElementId> corner;
  for (const Vector& z : cone.directions) corner.push_back(P.add_vertex(y + M * z));

  std::vector<FacetId> side;
  for (const Halfspace& f : cone.facets) side.push_back(P.add_facet(Halfspace(f.normal(), f.normal().dot(y))));
  box.artificial = P.add_facet(Halfspace(-c, -(c.dot(y) + M)));

  for (FacetId f : side) P.link(f, v0);
  for (std::size_t i = 0; i < corner.size(); ++i) {
    P.link(box.artificial, corner[i]);
    for (std::size_t j : cone.facets_of_direction[i]) P.link(side[j], corner[i]);
  }
  return box;
}

/// Unbounded start polyhedron {y} + K with the cone's directions.
inline AdjacencyPolyhedron init_cone(const Vector& y, const ConeDD& cone) {
  cone.check();
  if (y.size() != cone.dim) throw Error(ErrorKind::InvalidInput, "init_cone: apex dimension mismatch");
  AdjacencyPolyhedron P(cone.dim);
  const ElementId v0 = P.add_vertex(y);
  std::vector<ElementId> dirs;
  for (const Vector& z : cone.directions) dirs.push_back(P.add_direction(z));
  std::vector<FacetId> side;
  for (const Halfspace& f : cone.facets) side.push_back(P.add_facet(Halfspace(f.normal(), f.normal().dot(y))));
  for (FacetId f : side) P.link(f, v0);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j : cone.facets_of_direction[i]) P.link(side[j], dirs[i]);
  }
  return P;
}

/// Vertices of P that do not lie on the artificial facet f0. An f0 that has
/// been cut away entirely has no members, so every vertex is returned.
inline std::map<ElementId, Vector> strip_artificial(const AdjacencyPolyhedron& P, FacetId f0) {
  if (!P.allocated(f0)) {
    throw Error(ErrorKind::InvalidInput, "strip_artificial: unknown facet id " + std::to_string(index(f0)));
  }
  std::map<ElementId, Vector> out;
  for (const auto& [id, v] : P.vertices()) {
    if (P.facets_of(id).count(f0) == 0) out.emplace(id, v);
  }
  return out;
}

}  // namespace ddvep

#endif  // DDVEP_DD_HPP
