#pragma once

#include <stdexcept>
#include <string>

namespace fisub {

// Base for everything the library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct PoleError : DomainError { using DomainError::DomainError; };
struct OverflowError : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

struct NoClosedRule : Error { using Error::Error; };
struct DegenerateBasis : Error { using Error::Error; };
struct NotInvariant : Error { using Error::Error; };
struct NotTriangular : Error { using Error::Error; };
struct Divergence : Error { using Error::Error; };

struct InadmissibleParams : Error { using Error::Error; };
struct NoClassicalPair : Error { using Error::Error; };
struct UnknownFigure : Error { using Error::Error; };
struct UnknownId : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace fisub
