#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace symchord {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Phase-space point (q1, q2, p1, p2) in model units.
using PhasePoint = Vec4;

inline Vec2 position(const PhasePoint& x) { return x.head<2>(); }
inline Vec2 momentum(const PhasePoint& x) { return x.tail<2>(); }

/// Matrix of the standard symplectic form: w(u,v) = u^T * Omega * v
/// = u_p . v_q - u_q . v_p  (dp ^ dq on (q1,q2,p1,p2)).
inline const Mat4& symplectic_form()
{
    static const Mat4 Om = [] {
        Mat4 m = Mat4::Zero();
        m(0, 2) = -1.0;
        m(1, 3) = -1.0;
        m(2, 0) = 1.0;
        m(3, 1) = 1.0;
        return m;
    }();
    return Om;
}

/// Wrap an angle difference to (-pi/2, pi/2]; lines in RP^1 differ by
/// multiples of pi, so this is the signed angular distance between lines.
inline double wrap_line_angle(double d)
{
    return std::remainder(d, M_PI);
}

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Integration abort (step-size underflow, collision guard); carries the
/// last time that was reached successfully.
struct integration_error : numerical_error {
    integration_error(const std::string& msg, double last_time)
        : numerical_error(msg), last_good_time(last_time)
    {
    }
    double last_good_time;
};

}  // namespace symchord
