#pragma once

#include <limits>
#include <optional>
#include <string>

#include "renyi/operator_core.hpp"

namespace renyi {

// Renyi order alpha in [1/2, 1) u (1, inf], with the derived exponent
// alpha' = (alpha - 1)/alpha (1 for infinite order).
class RenyiOrder {
 public:
  explicit RenyiOrder(double value) : value_(value) {
    if (std::isnan(value_) || value_ < 0.5 || value_ == 1.0) {
      throw ValidationError("RenyiOrder: alpha must lie in [1/2, 1) u (1, inf], got " +
                            std::to_string(value));
    }
  }

  static RenyiOrder infinity() { return RenyiOrder(std::numeric_limits<double>::infinity()); }

  // accepts a decimal literal or "inf"
  static std::optional<RenyiOrder> parse(const std::string& text);

  double value() const { return value_; }
  bool is_infinite() const { return std::isinf(value_); }
  double alpha_prime() const { return is_infinite() ? 1.0 : (value_ - 1.0) / value_; }

  // dual order beta with 1/alpha + 1/beta = 2 (involutive; inf <-> 1/2)
  RenyiOrder dual() const {
    if (is_infinite()) return RenyiOrder(0.5);
    if (value_ == 0.5) return infinity();
    return RenyiOrder(value_ / (2.0 * value_ - 1.0));
  }

  friend bool operator==(const RenyiOrder& a, const RenyiOrder& b) {
    return a.value_ == b.value_;
  }

 private:
  double value_;
};

}  // namespace renyi
