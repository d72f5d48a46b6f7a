#pragma once

#include <stdexcept>
#include <string>

namespace fgw {

/// Base class for all errors raised by the library. `code()` is a stable
/// machine-readable identifier; the what() string carries details.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// A core type could not be constructed from the given data.
class InvalidObject : public Error {
 public:
  explicit InvalidObject(const std::string& message) : Error("invalid_object", message) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& message) : Error("dimension_mismatch", message) {}
};

class InfeasibleMarginals : public Error {
 public:
  explicit InfeasibleMarginals(const std::string& message)
      : Error("infeasible_marginals", message) {}
};

class NonFiniteCost : public Error {
 public:
  explicit NonFiniteCost(const std::string& message) : Error("non_finite_cost", message) {}
};

class MarginalMismatch : public Error {
 public:
  explicit MarginalMismatch(const std::string& message) : Error("marginal_mismatch", message) {}
};

class DisconnectedGraph : public Error {
 public:
  explicit DisconnectedGraph(const std::string& message) : Error("disconnected_graph", message) {}
};

class NonSymmetricInput : public Error {
 public:
  explicit NonSymmetricInput(const std::string& message) : Error("non_symmetric_input", message) {}
};

class EmptyCandidateSet : public Error {
 public:
  explicit EmptyCandidateSet(const std::string& message) : Error("empty_candidate_set", message) {}
};

class IncompatibleQ : public Error {
 public:
  explicit IncompatibleQ(const std::string& message) : Error("incompatible_q", message) {}
};

}  // namespace fgw
