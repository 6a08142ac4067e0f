#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace bumpdirac {

using Vec2 = std::array<double, 2>;

struct Matrix2 {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

  static constexpr Matrix2 identity() { return {}; }

  constexpr double det() const { return m11 * m22 - m12 * m21; }
  constexpr Matrix2 transposed() const { return {m11, m21, m12, m22}; }
  double max_abs() const {
    return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)});
  }

  friend constexpr Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend constexpr Vec2 operator*(const Matrix2& a, const Vec2& v) {
    return {a.m11 * v[0] + a.m12 * v[1], a.m21 * v[0] + a.m22 * v[1]};
  }
};

inline double max_abs_difference(const Matrix2& a, const Matrix2& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

}  // namespace bumpdirac
