#ifndef DDVEP_ERROR_HPP
#define DDVEP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ddvep {

enum class ErrorKind {
  InvalidInput,            // malformed arguments, unknown ids, parse failures
  Unsupported,             // e.g. onlinevert on an unbounded polyhedron
  DegenerateGeometry,      // near-zero denominators in intersection helpers
  RecessionConeViolation,  // a cut would shrink the declared recession cone
  Infeasible,
  Unbounded,
  NumericalFailure,        // iteration caps, inconsistent LP results
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::DegenerateGeometry: return "degenerate geometry";
    case ErrorKind::RecessionConeViolation: return "recession cone violation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Unbounded: return "unbounded";
    case ErrorKind::NumericalFailure: return "numerical failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ddvep

#endif  // DDVEP_ERROR_HPP
