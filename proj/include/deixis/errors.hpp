#pragma once

#include <stdexcept>
#include <string>

namespace deixis {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonUnitQuaternion : Error { using Error::Error; };
struct FrameMismatch : Error { using Error::Error; };
struct NotOnPlane : Error { using Error::Error; };
struct InvalidGrid : Error { using Error::Error; };
struct MalformedFrame : Error { using Error::Error; };
struct NonMonotoneTime : Error { using Error::Error; };
struct UnreachableTarget : Error { using Error::Error; };
struct OverlappingIntervals : Error { using Error::Error; };
struct EmptyInput : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace deixis
