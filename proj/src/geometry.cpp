#include "rissim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rissim {

bool Vec3::finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

Eigen::VectorXcd ula_steering(double u, int n) {
    Eigen::VectorXcd a(n);
    for (int k = 0; k < n; ++k)
        a[k] = std::polar(1.0, static_cast<double>(k) * u);
    return a;
}

Eigen::VectorXcd ura_steering(double u, double v, const UraGeometry& g) {
    const Eigen::VectorXcd ay = ula_steering(u, g.m_y);
    const Eigen::VectorXcd az = ula_steering(v, g.m_z);
    Eigen::VectorXcd b(g.count());
    for (int iy = 0; iy < g.m_y; ++iy)
        for (int iz = 0; iz < g.m_z; ++iz)
            b[iy * g.m_z + iz] = ay[iy] * az[iz];
    return b;
}

EffectiveAnglePair effective_angles_between(const Vec3& from, const Vec3& to) {
    const Vec3 d = to - from;
    const double dist = d.norm();
    if (dist <= 0.0 || !std::isfinite(dist))
        throw std::invalid_argument("effective_angles_between: degenerate direction");
    double u = std::numbers::pi * d.y / dist;
    double v = std::numbers::pi * d.z / dist;
    // endfire directions land on the branch boundary; keep angles in (-pi, pi]
    if (u <= -std::numbers::pi) u = std::numbers::pi;
    if (v <= -std::numbers::pi) v = std::numbers::pi;
    return {u, v};
}

double ue_effective_aod(const Vec3& ue, const Vec3& target) {
    return effective_angles_between(ue, target).u;
}

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);
    if (a <= -std::numbers::pi) a = std::numbers::pi;
    return a;
}

}  // namespace rissim
