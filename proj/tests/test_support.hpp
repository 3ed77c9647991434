#ifndef DDVEP_TEST_SUPPORT_HPP
#define DDVEP_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ddvep/ddvep.hpp"

namespace ddvep::testing {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Halfspace hs(std::initializer_list<double> a, double b) { return Halfspace(vec(a), b); }

/// Largest distance from a point of one set to the nearest point of the
/// other (symmetric Hausdorff distance); infinite if exactly one is empty.
inline double hausdorff(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto one_way = [](const std::vector<Vector>& p, const std::vector<Vector>& q) {
    double worst = 0.0;
    for (const Vector& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vector& y : q) best = std::min(best, (x - y).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

/// Same cardinality and Hausdorff distance within tol.
inline bool same_points(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol = 1e-6) {
  return a.size() == b.size() && hausdorff(a, b) <= tol;
}

inline bool contains_point(const std::vector<Vector>& set, const Vector& p, double tol = 1e-9) {
  return std::any_of(set.begin(), set.end(), [&](const Vector& x) { return (x - p).norm() <= tol; });
}

inline std::vector<Vector> values(const std::map<ElementId, Vector>& m) {
  std::vector<Vector> out;
  for (const auto& [id, v] : m) out.push_back(v);
  return out;
}

inline AdjacencyPolyhedron unit_cube(int d) {
  std::vector<Halfspace> h;
  for (int i = 0; i < d; ++i) {
    h.emplace_back(Vector::Unit(d, i), 0.0);
    h.emplace_back(-Vector::Unit(d, i), -1.0);
  }
  std::vector<Vector> verts;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = (mask >> i) & 1;
    verts.push_back(v);
  }
  return from_representation(d, verts, {}, h);
}

/// Random cut sequences that keep the recession cone equal to R^d_+:
/// nonnegative integer normals (zeros allowed, so parallel directions occur)
/// through a point slightly beyond a random current vertex.
class CutSequence {
 public:
  CutSequence(int d, std::uint64_t seed) : d_(d), rng_(seed) {}

  Halfspace next(const std::vector<Vector>& current) {
    std::uniform_int_distribution<int> coef(0, 5);
    Vector a(d_);
    do {
      for (int i = 0; i < d_; ++i) a(i) = coef(rng_);
    } while (a.isZero());
    std::uniform_int_distribution<std::size_t> pick(0, current.size() - 1);
    const Vector& v = current[pick(rng_)];
    std::uniform_real_distribution<double> step(0.05, 1.0);
    return Halfspace(a, a.dot(v) + step(rng_) * a.norm());
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  int d_;
  std::mt19937_64 rng_;
};

/// H-representation of {apex} + R^d_+ intersected with the given cuts.
inline HRep orthant_hrep(const Vector& apex, const std::vector<Halfspace>& cuts) {
  const int d = static_cast<int>(apex.size());
  HRep h;
  h.dim = d;
  for (int i = 0; i < d; ++i) h.halfspaces.emplace_back(Vector::Unit(d, i), apex(i));
  h.halfspaces.insert(h.halfspaces.end(), cuts.begin(), cuts.end());
  std::vector<Vector> dirs;
  for (int i = 0; i < d; ++i) dirs.push_back(Vector::Unit(d, i));
  h.recession_dirs = dirs;
  return h;
}

/// Feasible points of {A x <= b, x >= 0}: convex combinations of LP optima
/// for random objectives.
inline std::vector<Vector> sample_feasible(const MolpInstance& inst, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> anchors;
  for (int tries = 0; anchors.size() < 8 && tries < 200; ++tries) {
    Vector r(inst.n());
    for (int j = 0; j < inst.n(); ++j) r(j) = g(rng);
    LinearProgram lp(r);
    for (int i = 0; i < inst.m(); ++i) lp.add(inst.A.row(i).transpose(), Relation::LessEqual, inst.b(i));
    const LpSolution s = solve_lp(lp);
    if (s.status == LpStatus::Optimal) anchors.push_back(s.x);
  }
  std::vector<Vector> out;
  std::exponential_distribution<double> e(1.0);
  for (std::size_t k = 0; k < count && !anchors.empty(); ++k) {
    Vector x = Vector::Zero(inst.n());
    double total = 0.0;
    for (const Vector& a : anchors) {
      const double w = e(rng);
      x += w * a;
      total += w;
    }
    out.push_back(x / total);
  }
  return out;
}

}  // namespace ddvep::testing

#endif  // DDVEP_TEST_SUPPORT_HPP
