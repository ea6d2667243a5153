#pragma once

#include <stdexcept>
#include <string>

namespace stackel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A rational expression has a vanishing denominator at the jet base point.
class PoleError : public Error {
 public:
  PoleError() : Error("pole at base point") {}
  explicit PoleError(const std::string& what) : Error("pole at base point: " + what) {}
};

/// Ellipsoidal coordinates violate a_0 < x^1 < a_1 < ... < x^n < a_n.
class ChartError : public Error {
 public:
  explicit ChartError(const std::string& what) : Error("not in coordinate chart: " + what) {}
};

class CoincidentAxesError : public Error {
 public:
  CoincidentAxesError() : Error("coincident semi-axes") {}
};

/// An identity was requested for a system it does not describe.
class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& what)
      : Error("identity not applicable: " + what) {}
};

class OrderOverflowError : public Error {
 public:
  explicit OrderOverflowError(const std::string& what) : Error("order overflow: " + what) {}
};

}  // namespace stackel
