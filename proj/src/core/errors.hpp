#pragma once

#include <stdexcept>
#include <string>

namespace uail {

/// Base class for all domain errors surfaced through the C API.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration, plan, or run would exceed a configured cap.
class ResourceLimitError : public Error {
 public:
  explicit ResourceLimitError(const std::string& what) : Error(what) {}
};

/// A bracket denominator has not been witnessed positive at this budget.
class InsufficientBudgetError : public Error {
 public:
  explicit InsufficientBudgetError(const std::string& what) : Error(what) {}
};

/// A one-step distribution has zero total mass and cannot be normalized.
class DeadEndError : public Error {
 public:
  explicit DeadEndError(const std::string& what) : Error(what) {}
};

/// A history has zero mass under the mixture; no posterior exists.
class ZeroEvidenceError : public Error {
 public:
  explicit ZeroEvidenceError(const std::string& what) : Error(what) {}
};

/// A config or environment-class file violates the published schema.
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(what) {}
};

/// Gamma_t = 0: the effective horizon is undefined at this time step.
class UndefinedHorizonError : public Error {
 public:
  explicit UndefinedHorizonError(const std::string& what) : Error(what) {}
};

}  // namespace uail
