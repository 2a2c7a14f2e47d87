#pragma once

#include <compare>
#include <iosfwd>
#include <limits>

namespace rockrelax {

/// Extended real number in [-inf, +inf].
///
/// Arithmetic follows the conventions used for expectation functions with
/// extended values: 0 * (+-inf) = 0 and inf - inf = inf. NaN is never
/// representable; constructing from NaN throws.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  // Implicit so finite doubles read naturally in arithmetic.
  ExtReal(double value);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal pos_inf() { return ExtReal(kTag, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal neg_inf() { return ExtReal(kTag, -std::numeric_limits<double>::infinity()); }

  constexpr bool is_finite() const { return value_ > -kInf && value_ < kInf; }
  constexpr bool is_pos_inf() const { return value_ == kInf; }
  constexpr bool is_neg_inf() const { return value_ == -kInf; }

  /// The underlying double; +-inf for the infinite values.
  constexpr double value() const { return value_; }

  ExtReal operator-() const { return ExtReal(kTag, -value_); }
  ExtReal& operator+=(ExtReal other);
  ExtReal& operator*=(ExtReal other);

  friend ExtReal operator+(ExtReal a, ExtReal b);
  friend ExtReal operator*(ExtReal a, ExtReal b);
  /// a + (-b), so inf - inf = inf.
  friend ExtReal operator-(ExtReal a, ExtReal b) { return a + (-b); }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.value_ == b.value_; }
  friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) {
    return a.value_ <=> b.value_;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  struct Tag {};
  static constexpr Tag kTag{};
  constexpr ExtReal(Tag, double v) : value_(v) {}

  double value_ = 0.0;
};

enum class ExtOp { kAdd, kMul };

/// Total binary operation on extended reals; never produces NaN.
ExtReal ext_combine(ExtOp op, ExtReal a, ExtReal b);

std::ostream& operator<<(std::ostream& os, ExtReal x);

}  // namespace rockrelax
