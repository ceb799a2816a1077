#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nlus {

using Vec3 = std::array<double, 3>;

/// Dense 3x3 second-order tensor, row-major.
struct Tensor2 {
  std::array<double, 9> c{};

  constexpr double& operator()(std::size_t i, std::size_t j) { return c[3 * i + j]; }
  constexpr double operator()(std::size_t i, std::size_t j) const { return c[3 * i + j]; }

  static constexpr Tensor2 zero() { return {}; }

  static constexpr Tensor2 identity() {
    Tensor2 t;
    t(0, 0) = t(1, 1) = t(2, 2) = 1.0;
    return t;
  }

  static constexpr Tensor2 diag(double a, double b, double c3) {
    Tensor2 t;
    t(0, 0) = a;
    t(1, 1) = b;
    t(2, 2) = c3;
    return t;
  }

  constexpr Tensor2& operator+=(const Tensor2& o) {
    for (std::size_t k = 0; k < 9; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Tensor2& operator-=(const Tensor2& o) {
    for (std::size_t k = 0; k < 9; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Tensor2& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }

  friend constexpr Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
  friend constexpr Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
  friend constexpr Tensor2 operator*(Tensor2 a, double s) { return a *= s; }
  friend constexpr Tensor2 operator*(double s, Tensor2 a) { return a *= s; }
  friend constexpr bool operator==(const Tensor2&, const Tensor2&) = default;
};

constexpr Tensor2 transpose(const Tensor2& a) {
  Tensor2 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t(i, j) = a(j, i);
  return t;
}

constexpr Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  Tensor2 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
      t(i, j) = s;
    }
  return t;
}

constexpr double trace(const Tensor2& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

constexpr double determinant(const Tensor2& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

/// sqrt of the sum of squared components.
inline double frobenius_norm(const Tensor2& a) {
  double s = 0.0;
  for (double v : a.c) s += v * v;
  return std::sqrt(s);
}

/// Largest |A - A^T| component.
inline double asymmetry(const Tensor2& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) m = std::fmax(m, std::fabs(a(i, j) - a(j, i)));
  return m;
}

inline bool all_finite(const Tensor2& a) {
  for (double v : a.c)
    if (!std::isfinite(v)) return false;
  return true;
}

constexpr Vec3 apply(const Tensor2& a, const Vec3& v) {
  Vec3 r{};
  for (std::size_t i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
  return r;
}

constexpr double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// a (x) b
constexpr Tensor2 outer(const Vec3& a, const Vec3& b) {
  Tensor2 t;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t(i, j) = a[i] * b[j];
  return t;
}

}  // namespace nlus
