#pragma once

#include <stdexcept>
#include <string>

namespace kpx {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A model parameter that must be positive (or nonnegative for slab widths)
/// was not. Remembers which field was rejected.
class NonPositiveParameter : public Error {
 public:
  explicit NonPositiveParameter(std::string field)
      : Error("parameter must be positive: " + field), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// NaN or infinity where a finite number is required.
class NonFinite : public Error {
 public:
  explicit NonFinite(const std::string& what_field)
      : Error("non-finite value: " + what_field) {}
};

/// Energy outside the domain of the requested branch.
class EnergyOutOfBranch : public Error {
 public:
  using Error::Error;
};

/// A closed-form denominator too small relative to its numerator.
class DegenerateDenominator : public Error {
 public:
  using Error::Error;
};

/// (E, alpha) does not satisfy the dispersion relation to tolerance.
class NotOnDispersionLocus : public Error {
 public:
  using Error::Error;
};

/// Matching matrix has rank below 3; coefficient ratios are not unique.
class RankDeficiencyTooHigh : public Error {
 public:
  using Error::Error;
};

/// Reference coefficient variants are defined only for equal masses.
class RequiresEqualMasses : public Error {
 public:
  using Error::Error;
};

/// Invalid interval or sample count.
class BadRange : public Error {
 public:
  using Error::Error;
};

/// No allowed band around the requested seed energy.
class NoBandFound : public Error {
 public:
  using Error::Error;
};

/// Operation invoked with a model/branch/window combination outside its domain.
class BranchDomainViolation : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace kpx
