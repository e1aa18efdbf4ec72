#pragma once

#include <stdexcept>
#include <string>

namespace fsa {

/// Invalid user-supplied value (bad geometry, plan outside bounds, malformed config).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Config file could not be read or parsed at all.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// The equivalent-position map is undefined at broadside (sin(theta) == 0).
class DegenerateAngle : public std::domain_error {
 public:
  explicit DegenerateAngle(const std::string& what) : std::domain_error(what) {}
};

/// A closed-form case solver was called outside its geometric case.
class WrongCase : public std::domain_error {
 public:
  explicit WrongCase(const std::string& what) : std::domain_error(what) {}
};

/// Numerical breakdown in a dense solve that should be well-posed.
class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

/// Movable-antenna region cannot hold all elements at the required spacing.
class InfeasibleSpacing : public std::invalid_argument {
 public:
  explicit InfeasibleSpacing(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace fsa
