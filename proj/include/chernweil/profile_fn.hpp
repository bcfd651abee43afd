#pragma once

#include <algorithm>
#include <cmath>

namespace cw {

// Polynomial smoothstep transitions on [0,1]: S(0)=0, S(1)=1, with the first
// k derivatives vanishing at both ends. order 5 is C^2 (the quintic used by
// truncation profiles), order 9 is C^4 (used by partition-of-unity bumps
// where quadrature error is dominated by the transition's smoothness class).
inline double smoothstep(double s, int order = 5) {
    s = std::clamp(s, 0.0, 1.0);
    if (order <= 3) return s * s * (3.0 - 2.0 * s);
    if (order <= 5) return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
    if (order <= 7) return s * s * s * s * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
    return s * s * s * s * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + 70.0 * s))));
}

inline double smoothstep_deriv(double s, int order = 5) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (order <= 3) return 6.0 * s * (1.0 - s);
    if (order <= 5) return 30.0 * s * s * (1.0 - s) * (1.0 - s);
    if (order <= 7) {
        double u = 1.0 - s;
        return 140.0 * s * s * s * u * u * u;
    }
    double u = 1.0 - s;
    return 630.0 * s * s * s * s * u * u * u * u;
}

// Ramp 0 -> 1 across [a, b] (the truncation profile rho of the deformed
// connection: 0 on the zero set, 1 outside the tube).
struct RampProfile {
    double a = 0.0;
    double b = 1.0;
    int order = 5;

    double operator()(double t) const {
        if (t <= a) return 0.0;
        if (t >= b) return 1.0;
        return smoothstep((t - a) / (b - a), order);
    }
    double deriv(double t) const {
        if (t <= a || t >= b) return 0.0;
        return smoothstep_deriv((t - a) / (b - a), order) / (b - a);
    }
};

// Bump 1 -> 0 across [a, b] (radial chart bumps of the partition of unity).
struct BumpProfile {
    double a = 0.0;
    double b = 1.0;
    int order = 5;

    double operator()(double t) const {
        if (t <= a) return 1.0;
        if (t >= b) return 0.0;
        return 1.0 - smoothstep((t - a) / (b - a), order);
    }
    double deriv(double t) const {
        if (t <= a || t >= b) return 0.0;
        return -smoothstep_deriv((t - a) / (b - a), order) / (b - a);
    }
};

} // namespace cw
