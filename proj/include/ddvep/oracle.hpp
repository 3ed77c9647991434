#ifndef DDVEP_ORACLE_HPP
#define DDVEP_ORACLE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ddvep/error.hpp"
#include "ddvep/polyhedron.hpp"

namespace ddvep {

/// A polyhedron as an intersection of halfspaces. For unbounded input the
/// known recession cone's extreme directions may be supplied.
struct HRep {
  int dim = 0;
  std::vector<Halfspace> halfspaces;
  std::optional<std::vector<Vector>> recession_dirs;
};

struct VRep {
  std::vector<Vector> vertices;
  std::vector<Vector> directions;
};

namespace oracle {

inline constexpr int kMaxDim = 8;
inline constexpr double kMaxSubsets = 1e7;
inline constexpr double kFeasRel = 1e-7;
inline constexpr double kDupRel = 1e-8;
inline constexpr double kDirTol = 1e-9;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle

/// Offline vertex enumeration by brute force: every d-subset of boundary
/// hyperplanes is solved as a linear system and the feasible solutions are
/// kept. Exponential in d; meant as a ground truth at desk scale.
inline VRep enumerate_vertices_brute(const HRep& h) {
  const int d = h.dim;
  if (d < 2 || d > oracle::kMaxDim) {
    throw Error(ErrorKind::InvalidInput, "oracle supports dimensions 2.." + std::to_string(oracle::kMaxDim));
  }
  const int k = static_cast<int>(h.halfspaces.size());
  for (const Halfspace& hs : h.halfspaces) {
    if (hs.dim() != d) throw Error(ErrorKind::InvalidInput, "oracle: halfspace dimension mismatch");
  }
  if (oracle::binomial(k, d) > oracle::kMaxSubsets) {
    throw Error(ErrorKind::InvalidInput, "oracle: C(" + std::to_string(k) + ", " + std::to_string(d) +
                                             ") subsets exceeds the enumeration limit");
  }

  VRep out;
  if (h.recession_dirs) {
    for (const Vector& z : *h.recession_dirs) {
      if (z.size() != d) throw Error(ErrorKind::InvalidInput, "oracle: direction dimension mismatch");
      for (const Halfspace& hs : h.halfspaces) {
        if (hs.normal().dot(z) < -oracle::kDirTol * (1.0 + hs.normal().norm() * z.norm())) {
          throw Error(ErrorKind::InvalidInput, "oracle: supplied recession direction leaves a halfspace");
        }
      }
      out.directions.push_back(z);
    }
  }
  if (k < d) return out;

  using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, oracle::kMaxDim, oracle::kMaxDim>;
  using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, oracle::kMaxDim, 1>;
  SmallMat sys(d, d);
  SmallVec rhs(d);
  Vector point(d);

  std::vector<int> pick(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) pick[static_cast<std::size_t>(i)] = i;
  for (;;) {
    for (int r = 0; r < d; ++r) {
      const Halfspace& hs = h.halfspaces[static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
      sys.row(r) = hs.normal().transpose();
      rhs(r) = hs.offset();
    }
    Eigen::FullPivLU<SmallMat> lu(sys);
    if (lu.isInvertible()) {
      point = lu.solve(rhs);
      bool feasible = point.allFinite();
      for (int i = 0; feasible && i < k; ++i) {
        const Halfspace& hs = h.halfspaces[static_cast<std::size_t>(i)];
        const double scale = 1.0 + std::abs(hs.offset()) + hs.normal().norm() * point.norm();
        feasible = hs.slack(point) >= -oracle::kFeasRel * scale;
      }
      if (feasible) {
        const double eps = oracle::kDupRel * (1.0 + point.norm());
        bool dup = false;
        for (const Vector& v : out.vertices) {
          if ((v - point).norm() <= eps) {
            dup = true;
            break;
          }
        }
        if (!dup) out.vertices.push_back(point);
      }
    }
    // Next d-subset in lexicographic order.
    int i = d - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == k - d + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < d; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace ddvep

#endif  // DDVEP_ORACLE_HPP
