// Error taxonomy shared by all fracp modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracp {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter or argument range; message names the violated bound.
class DomainError : public Error {
public:
  using Error::Error;
};

// Pointwise operator evaluation requested outside the validity range
// (p < 2 and s >= 2(p-1)/p).
class PointwiseUnsupported : public Error {
public:
  using Error::Error;
};

// Graded-mesh refinement residuals failed to decrease.
class QuadratureError : public Error {
public:
  using Error::Error;
};

// Kernel built for a different node set than the profile in use.
class KernelMismatch : public Error {
public:
  using Error::Error;
};

// Constraint projection requested with b(u) <= 0; carries the offending value.
class ConstraintError : public Error {
public:
  ConstraintError(const std::string& msg, double b_value)
      : Error(msg), b_value(b_value) {}
  double b_value;
};

// Backtracking line search underflowed; carries the projected gradient norm.
class StepFailure : public Error {
public:
  StepFailure(const std::string& msg, double grad_norm)
      : Error(msg), grad_norm(grad_norm) {}
  double grad_norm;
};

class SolverDiverged : public Error {
public:
  using Error::Error;
};

class InfeasibleStart : public Error {
public:
  using Error::Error;
};

// Configuration rejected; carries the offending field path (e.g. "solve.step0").
class ConfigError : public Error {
public:
  ConfigError(const std::string& msg, std::string field_path)
      : Error(msg + " (at " + field_path + ")"), field_path(std::move(field_path)) {}
  std::string field_path;
};

// Malformed file content; carries the 1-based line number.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line(line) {}
  std::size_t line;
};

// Structurally wrong file (wrong header, wrong payload kind).
class SchemaError : public Error {
public:
  using Error::Error;
};

}  // namespace fracp
