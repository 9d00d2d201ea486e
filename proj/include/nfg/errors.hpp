#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nfg {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation does not hold for its arguments.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class CyclicGraph : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class Disconnected : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A loopy message update produced an all-zero vector.
class ZeroMessage : public Error {
 public:
  ZeroMessage(std::string edge, const std::string& what)
      : Error(what), edge_(std::move(edge)) {}
  const std::string& edge() const { return edge_; }

 private:
  std::string edge_;
};

/// U*S*V of a candidate triple is not a nonzero multiple of the identity.
class NotIdentity : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

class DivisionByZero : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Loop-series edge whose determinant vanishes.
class SingularEdge : public ContractViolation {
 public:
  SingularEdge(std::string edge, const std::string& what)
      : ContractViolation(what), edge_(std::move(edge)) {}
  const std::string& edge() const { return edge_; }

 private:
  std::string edge_;
};

/// Malformed document. `where()` is either "line L, column C" for syntax
/// errors or a JSON pointer such as "/factors/2/ports/0".
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

}  // namespace nfg
