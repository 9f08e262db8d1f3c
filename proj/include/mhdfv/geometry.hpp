#pragma once
#include <cmath>
#include <vector>

namespace mhdfv {

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
// z-component of the 3D cross product of two in-plane vectors
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }
// rotate by -90 degrees: tangent -> normal under the left-to-right convention
inline Vec2 rot_minus90(const Vec2& v) { return {v.y, -v.x}; }

// 2x2 matrix, row-major; m(r,c)
struct Mat2 {
  double a[4] = {0, 0, 0, 0};
  double& operator()(int r, int c) { return a[2 * r + c]; }
  double operator()(int r, int c) const { return a[2 * r + c]; }
  Mat2 operator+(const Mat2& o) const {
    Mat2 m; for (int i = 0; i < 4; ++i) m.a[i] = a[i] + o.a[i]; return m;
  }
  Mat2 operator-(const Mat2& o) const {
    Mat2 m; for (int i = 0; i < 4; ++i) m.a[i] = a[i] - o.a[i]; return m;
  }
  Mat2 operator*(double s) const {
    Mat2 m; for (int i = 0; i < 4; ++i) m.a[i] = a[i] * s; return m;
  }
  Vec2 operator*(const Vec2& v) const {
    return {a[0] * v.x + a[1] * v.y, a[2] * v.x + a[3] * v.y};
  }
  Mat2 transposed() const { Mat2 m; m.a[0] = a[0]; m.a[1] = a[2]; m.a[2] = a[1]; m.a[3] = a[3]; return m; }
  double trace() const { return a[0] + a[3]; }
};

inline double tri_area(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  return 0.5 * cross(p1 - p0, p2 - p0);
}

inline double polygon_area(const std::vector<Vec2>& p) {
  double s = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    const Vec2& a = p[k];
    const Vec2& b = p[(k + 1) % p.size()];
    s += cross(a, b);
  }
  return 0.5 * s;
}

}  // namespace mhdfv
