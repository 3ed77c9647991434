#ifndef DDVEP_IO_HPP
#define DDVEP_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ddvep/benson.hpp"
#include "ddvep/error.hpp"
#include "ddvep/oracle.hpp"
#include "ddvep/polyhedron.hpp"

// Line-oriented text formats. '#' starts a comment; blank lines are ignored.
//
// Polyhedron:   d <dim>
//               v x1 ... xd          one per vertex
//               z x1 ... xd          one per direction
//               f a1 ... ad b        one per facet, meaning a^T y >= b
//               adj <facet> <ids>    facet index and member indices
// Vertices and directions are numbered together in order of appearance,
// facets separately. The same reader accepts `cut a1 ... ad b` lines.
//
// Instance:     d n m, then d rows of C, m rows of A, one row b, optional k.

namespace ddvep {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::InvalidInput, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace io {

inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return std::to_string(x);
  return std::string(buf, end);
}

inline void write_vector(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ' ' << format_number(v(i));
}

struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> tokens;
};

// Splits text into non-empty, comment-stripped token lines. The views point
// into `text`, which must outlive the result.
inline std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::size_t start = 0, number = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++number;
    std::string_view line(text.data() + start, end - start);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    Line l{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
      if (j > i) l.tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!l.tokens.empty()) out.push_back(std::move(l));
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  }
  return v;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return v;
}

inline Vector parse_row(const Line& l, std::size_t first, std::size_t count) {
  if (l.tokens.size() != first + count) {
    throw ParseError(l.number, "expected " + std::to_string(count) + " numbers, got " +
                                   std::to_string(l.tokens.size() - first));
  }
  Vector v(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) v(static_cast<Eigen::Index>(i)) = parse_double(l.tokens[first + i], l.number);
  return v;
}

inline std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace io

/// Raw content of a polyhedron/H-rep/cut file.
struct PolyhedronText {
  int dim = 0;
  std::vector<Vector> vertices;
  std::vector<Vector> directions;
  std::vector<Halfspace> facets;
  std::vector<Halfspace> cuts;
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> adjacency;
};

inline PolyhedronText parse_polyhedron_text(const std::string& text) {
  PolyhedronText doc;
  std::optional<std::size_t> dim_line;
  auto need_dim = [&](const io::Line& l, std::size_t count) {
    if (doc.dim == 0) {
      // Cut-only files may omit the header; the first row fixes d.
      if (count < 3) throw ParseError(l.number, "dimension must be at least 2");
      doc.dim = static_cast<int>(count - 1);
    }
  };
  for (const io::Line& l : io::tokenize(text)) {
    const std::string_view key = l.tokens.front();
    if (key == "d") {
      if (dim_line) throw ParseError(l.number, "duplicate dimension header");
      if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'd <dim>'");
      const long long d = io::parse_int(l.tokens[1], l.number);
      if (d < 2) throw ParseError(l.number, "dimension must be at least 2");
      if (doc.dim != 0 && doc.dim != d) throw ParseError(l.number, "dimension header disagrees with earlier rows");
      doc.dim = static_cast<int>(d);
      dim_line = l.number;
    } else if (key == "v" || key == "z") {
      if (doc.dim == 0) throw ParseError(l.number, "'d <dim>' must come first");
      Vector x = io::parse_row(l, 1, static_cast<std::size_t>(doc.dim));
      if (key == "v") {
        doc.vertices.push_back(std::move(x));
      } else {
        if (!(x.norm() > 0.0)) throw ParseError(l.number, "direction must be nonzero");
        doc.directions.push_back(std::move(x));
      }
    } else if (key == "f" || key == "cut") {
      need_dim(l, l.tokens.size() - 1);
      Vector x = io::parse_row(l, 1, static_cast<std::size_t>(doc.dim) + 1);
      if (!(x.head(doc.dim).norm() > 0.0)) throw ParseError(l.number, "halfspace normal must be nonzero");
      Halfspace h(x.head(doc.dim), x(doc.dim));
      (key == "f" ? doc.facets : doc.cuts).push_back(std::move(h));
    } else if (key == "adj") {
      if (l.tokens.size() < 2) throw ParseError(l.number, "expected 'adj <facet> <ids...>'");
      std::vector<std::size_t> ids;
      const long long f = io::parse_int(l.tokens[1], l.number);
      if (f < 0) throw ParseError(l.number, "negative facet index");
      for (std::size_t i = 2; i < l.tokens.size(); ++i) {
        const long long id = io::parse_int(l.tokens[i], l.number);
        if (id < 0) throw ParseError(l.number, "negative element index");
        ids.push_back(static_cast<std::size_t>(id));
      }
      doc.adjacency.emplace_back(static_cast<std::size_t>(f), std::move(ids));
    } else {
      throw ParseError(l.number, "unknown record '" + std::string(key) + "'");
    }
  }
  if (doc.dim == 0) throw ParseError(1, "missing dimension");
  return doc;
}

/// Builds the adjacency polyhedron; without adj rows the adjacency is
/// reconstructed from the coordinates.
inline AdjacencyPolyhedron to_polyhedron(const PolyhedronText& doc) {
  if (doc.adjacency.empty()) return from_representation(doc.dim, doc.vertices, doc.directions, doc.facets);
  AdjacencyPolyhedron P(doc.dim);
  std::vector<ElementId> elems;
  for (const Vector& v : doc.vertices) elems.push_back(P.add_vertex(v));
  for (const Vector& z : doc.directions) elems.push_back(P.add_direction(z));
  std::vector<FacetId> facets;
  for (const Halfspace& h : doc.facets) facets.push_back(P.add_facet(h));
  for (const auto& [f, ids] : doc.adjacency) {
    if (f >= facets.size()) throw Error(ErrorKind::InvalidInput, "adj row names unknown facet " + std::to_string(f));
    for (std::size_t id : ids) {
      if (id >= elems.size()) throw Error(ErrorKind::InvalidInput, "adj row names unknown element " + std::to_string(id));
      P.link(facets[f], elems[id]);
    }
  }
  return P;
}

inline HRep to_hrep(const PolyhedronText& doc) {
  HRep h;
  h.dim = doc.dim;
  h.halfspaces = doc.facets;
  h.halfspaces.insert(h.halfspaces.end(), doc.cuts.begin(), doc.cuts.end());
  if (!doc.directions.empty()) h.recession_dirs = doc.directions;
  return h;
}

inline ConeDD to_cone(const PolyhedronText& doc) {
  if (!doc.vertices.empty()) throw Error(ErrorKind::InvalidInput, "cone file must not contain vertices");
  if (doc.adjacency.empty()) return ConeDD::from_generators(doc.directions, doc.facets);
  ConeDD cone;
  cone.dim = doc.dim;
  cone.directions = doc.directions;
  cone.facets = doc.facets;
  cone.facets_of_direction.assign(doc.directions.size(), {});
  cone.directions_of_facet.assign(doc.facets.size(), {});
  for (const auto& [f, ids] : doc.adjacency) {
    if (f >= doc.facets.size()) throw Error(ErrorKind::InvalidInput, "adj row names unknown facet");
    for (std::size_t id : ids) {
      if (id >= doc.directions.size()) throw Error(ErrorKind::InvalidInput, "adj row names unknown direction");
      cone.directions_of_facet[f].push_back(id);
      cone.facets_of_direction[id].push_back(f);
    }
  }
  cone.check();
  return cone;
}

inline std::vector<Halfspace> parse_cuts(const std::string& text) {
  PolyhedronText doc = parse_polyhedron_text(text);
  return doc.cuts;
}

/// Writes P with compact indices: vertices first, then directions, both in
/// id order; facets in id order.
inline void write_polyhedron(std::ostream& os, const AdjacencyPolyhedron& P) {
  os << "d " << P.dim() << '\n';
  std::map<ElementId, std::size_t> elem;
  for (const auto& [id, v] : P.vertices()) {
    elem.emplace(id, elem.size());
    os << 'v';
    io::write_vector(os, v);
    os << '\n';
  }
  for (const auto& [id, z] : P.directions()) {
    elem.emplace(id, elem.size());
    os << 'z';
    io::write_vector(os, z);
    os << '\n';
  }
  for (const auto& [id, h] : P.facets()) {
    os << 'f';
    io::write_vector(os, h.normal());
    os << ' ' << io::format_number(h.offset()) << '\n';
  }
  std::size_t fi = 0;
  for (const auto& [id, h] : P.facets()) {
    os << "adj " << fi++;
    std::vector<std::size_t> members;
    for (ElementId x : P.members_of(id)) {
      if (auto it = elem.find(x); it != elem.end()) members.push_back(it->second);
    }
    std::sort(members.begin(), members.end());
    for (std::size_t m : members) os << ' ' << m;
    os << '\n';
  }
}

inline MolpInstance parse_instance(const std::string& text, std::optional<ConeDD> cone = std::nullopt) {
  const std::vector<io::Line> lines = io::tokenize(text);
  if (lines.empty()) throw ParseError(1, "empty instance file");
  const io::Line& head = lines.front();
  if (head.tokens.size() != 3) throw ParseError(head.number, "expected 'd n m'");
  const long long d = io::parse_int(head.tokens[0], head.number);
  const long long n = io::parse_int(head.tokens[1], head.number);
  const long long m = io::parse_int(head.tokens[2], head.number);
  if (d < 2 || n < 1 || m < 1) throw ParseError(head.number, "need d >= 2, n >= 1, m >= 1");
  const auto need = static_cast<std::size_t>(1 + d + m + 1);
  if (lines.size() < need) {
    const std::size_t last = lines.back().number;
    throw ParseError(last, "instance ends early: expected " + std::to_string(need) + " data lines");
  }
  if (lines.size() > need + 1) throw ParseError(lines[need + 1].number, "unexpected trailing data");

  Matrix C(d, n), A(m, n);
  std::size_t at = 1;
  for (long long i = 0; i < d; ++i) C.row(i) = io::parse_row(lines[at++], 0, static_cast<std::size_t>(n)).transpose();
  for (long long i = 0; i < m; ++i) A.row(i) = io::parse_row(lines[at++], 0, static_cast<std::size_t>(n)).transpose();
  Vector b = io::parse_row(lines[at++], 0, static_cast<std::size_t>(m));
  std::optional<Vector> k;
  if (at < lines.size()) k = io::parse_row(lines[at], 0, static_cast<std::size_t>(d));
  try {
    return make_instance(std::move(C), std::move(A), std::move(b), std::move(cone), std::move(k));
  } catch (const Error& e) {
    throw ParseError(at < lines.size() ? lines[at].number : lines.back().number, e.what());
  }
}

inline void write_instance(std::ostream& os, const MolpInstance& inst, bool with_k = true) {
  os << inst.d() << ' ' << inst.n() << ' ' << inst.m() << '\n';
  auto row = [&](const Vector& r) {
    for (Eigen::Index j = 0; j < r.size(); ++j) os << (j ? " " : "") << io::format_number(r(j));
    os << '\n';
  };
  os << "# C\n";
  for (int i = 0; i < inst.d(); ++i) row(inst.C.row(i).transpose());
  os << "# A\n";
  for (int i = 0; i < inst.m(); ++i) row(inst.A.row(i).transpose());
  os << "# b\n";
  row(inst.b);
  if (with_k) {
    os << "# k\n";
    row(inst.k);
  }
}

}  // namespace ddvep

#endif  // DDVEP_IO_HPP
