#ifndef ECOGAME_ERRORS_HPP
#define ECOGAME_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace ecogame {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter is non-finite or outside its declared domain.
class InvalidParameter : public Error {
public:
  using Error::Error;
};

/// A configuration breaks one of the standing model assumptions.
/// `name()` identifies the assumption, `inequality()` the violated relation.
class AssumptionViolation : public Error {
public:
  AssumptionViolation(std::string name, std::string inequality)
      : Error(inequality.empty() ? name : name + " (" + inequality + ")"),
        name_(std::move(name)),
        inequality_(std::move(inequality)) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& inequality() const noexcept { return inequality_; }

private:
  std::string name_;
  std::string inequality_;
};

/// A closed form was requested exactly where its denominator vanishes.
class DegenerateDenominator : public Error {
public:
  using Error::Error;
};

/// A policy sits on (or too close to) a seam between analytic regimes.
class BoundaryPolicy : public Error {
public:
  using Error::Error;
};

/// A policy lies outside the region where a closed form is defined.
class OutOfRegion : public Error {
public:
  using Error::Error;
};

/// Integration produced NaN or Inf.
class NonFiniteState : public Error {
public:
  using Error::Error;
};

/// Malformed run configuration or command-line specification.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace ecogame

#endif  // ECOGAME_ERRORS_HPP
