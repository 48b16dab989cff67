#pragma once

#include <stdexcept>
#include <string>

namespace pointwave {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
  using Error::Error;
};

// grids or sample counts that do not match
struct ShapeError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct InvalidState : Error {
  using Error::Error;
};

struct SingularResolvent : Error {
  using Error::Error;
};

} // namespace pointwave
