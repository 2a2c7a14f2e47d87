#include "rockrelax/extreal.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rockrelax {

ExtReal::ExtReal(double value) : value_(value) {
  if (std::isnan(value)) throw std::invalid_argument("ExtReal: NaN is not an extended real");
}

ExtReal operator+(ExtReal a, ExtReal b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(ExtReal::kTag, a.value_ + b.value_);
}

ExtReal operator*(ExtReal a, ExtReal b) {
  if (a.value_ == 0.0 || b.value_ == 0.0) return ExtReal(0.0);
  return ExtReal(ExtReal::kTag, a.value_ * b.value_);
}

ExtReal& ExtReal::operator+=(ExtReal other) { return *this = *this + other; }
ExtReal& ExtReal::operator*=(ExtReal other) { return *this = *this * other; }

ExtReal ext_combine(ExtOp op, ExtReal a, ExtReal b) {
  return op == ExtOp::kAdd ? a + b : a * b;
}

std::ostream& operator<<(std::ostream& os, ExtReal x) {
  if (x.is_pos_inf()) return os << "+inf";
  if (x.is_neg_inf()) return os << "-inf";
  return os << x.value();
}

}  // namespace rockrelax
