#pragma once

#include <stdexcept>
#include <string>

namespace pencilkit {

/// Category of a failure, used by the CLI to pick an exit status and by
/// callers that want to branch on the class of error without string matching.
enum class ErrorKind {
  structural,     ///< inconsistent dimensions, malformed inputs
  validation,     ///< a constructed object violates its invariants
  spectral_point, ///< evaluation requested at (or too close to) a spectral point
  infeasible,     ///< no admissible factorization / split / coupling exists
  divergence,     ///< an iteration failed to converge within its budget
  grid,           ///< bad quadrature grid (duplicate nodes, wrong sign, pairing)
  boundary,       ///< boundary-problem data inadmissible for the requested point
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error structural_error(const std::string& what) {
  return Error(ErrorKind::structural, what);
}
inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::validation, what);
}
inline Error spectral_point_error(const std::string& what) {
  return Error(ErrorKind::spectral_point, what);
}
inline Error infeasible_error(const std::string& what) {
  return Error(ErrorKind::infeasible, what);
}
inline Error divergence_error(const std::string& what) {
  return Error(ErrorKind::divergence, what);
}
inline Error grid_error(const std::string& what) {
  return Error(ErrorKind::grid, what);
}
inline Error boundary_error(const std::string& what) {
  return Error(ErrorKind::boundary, what);
}

}  // namespace pencilkit
