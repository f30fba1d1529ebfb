#pragma once

#include <stdexcept>
#include <string>

namespace fchlog {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A singular nonlinearity was evaluated outside its domain, e.g. |u| >= 1.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Field sizes or grids do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The inverse Laplacian or dual norm was applied to a field with nonzero mean.
class MeanError : public Error {
 public:
  using Error::Error;
};

/// The arcsin functional exceeded the representable range.
class OverflowSignal : public Error {
 public:
  using Error::Error;
};

class NewtonDivergence : public Error {
 public:
  using Error::Error;
};

/// Newton damping could not keep the iterate inside the separation bound.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

/// A step was rejected at the minimum step size.
class StepFloorError : public Error {
 public:
  using Error::Error;
};

/// Requested initial data cannot satisfy the admissibility constraints.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Initial-data regularization left the clamp interval by more than the tolerance.
class BoundOvershoot : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

/// Two trajectories that must share a mean do not.
class MeanMismatch : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (bad parameter values, unknown keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fchlog
