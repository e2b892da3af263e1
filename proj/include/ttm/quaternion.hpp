#pragma once

#include <array>
#include <cmath>

#include "ttm/errors.hpp"

namespace ttm {

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Unit quaternion a + b i + c j + d k; q and -q denote the same rotation.
struct Quat {
    double a = 1.0, b = 0.0, c = 0.0, d = 0.0;

    static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

    double norm2() const { return a * a + b * b + c * c + d * d; }
    double norm() const { return std::sqrt(norm2()); }

    Quat normalized() const {
        double n = norm();
        require(n > 0.0, errc::validation, "cannot normalize zero quaternion");
        return {a / n, b / n, c / n, d / n};
    }

    Quat conjugate() const { return {a, -b, -c, -d}; }
    Quat operator-() const { return {-a, -b, -c, -d}; }

    /// Hamilton product.
    Quat operator*(const Quat& o) const {
        return {a * o.a - b * o.b - c * o.c - d * o.d,
                a * o.b + b * o.a + c * o.d - d * o.c,
                a * o.c - b * o.d + c * o.a + d * o.b,
                a * o.d + b * o.c - c * o.b + d * o.a};
    }

    std::array<double, 4> components() const { return {a, b, c, d}; }

    /// Antipodal representative with a >= 0 (first nonzero positive when a == 0).
    Quat canonical() const {
        const double eps = 1e-15;
        if (a > eps || (std::abs(a) <= eps && (b > eps || (std::abs(b) <= eps && (c > eps || (std::abs(c) <= eps && d >= 0.0))))))
            return *this;
        return -*this;
    }
};

inline double dot(const Quat& x, const Quat& y) {
    return x.a * y.a + x.b * y.b + x.c * y.c + x.d * y.d;
}

inline void require_unit(const Quat& q, const char* who) {
    require(std::abs(q.norm2() - 1.0) <= 1e-9, errc::validation, std::string(who) + ": quaternion is not unit-norm");
}

/// Rotation matrix of q acting on vectors: v' = M v (v' = q v q*).
inline Mat3 quat_to_matrix(const Quat& q) {
    require_unit(q, "quat_to_matrix");
    const double a = q.a, b = q.b, c = q.c, d = q.d;
    return {{{a * a + b * b - c * c - d * d, 2.0 * (b * c - a * d), 2.0 * (b * d + a * c)},
             {2.0 * (b * c + a * d), a * a - b * b + c * c - d * d, 2.0 * (c * d - a * b)},
             {2.0 * (b * d - a * c), 2.0 * (c * d + a * b), a * a - b * b - c * c + d * d}}};
}

inline std::array<double, 3> apply(const Mat3& m, const std::array<double, 3>& v) {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

inline Mat3 matmul(const Mat3& x, const Mat3& y) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += x[i][k] * y[k][j];
            r[i][j] = s;
        }
    return r;
}

/// Rotation angle between p and q in radians, in [0, pi]; antipodal-invariant.
inline double angular_distance(const Quat& p, const Quat& q) {
    require_unit(p, "angular_distance");
    require_unit(q, "angular_distance");
    double c = std::abs(dot(p, q));
    if (c > 1.0) c = 1.0;
    return 2.0 * std::acos(c);
}

} // namespace ttm
