#pragma once

#include <complex>
#include <Eigen/Dense>

namespace rissim {

using cd = std::complex<double>;

/// Position in meters. The service half-space of the RIS is x > 0.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const;
};

/// Uniform linear array along the y axis. Spacing is in carrier
/// wavelengths (half-wavelength by default).
struct UlaGeometry {
    int n_elements = 1;
    double spacing = 0.5;
};

/// Uniform rectangular array in the y-o-z plane. Elements are flattened
/// y-major: element (iy, iz) maps to index iy * m_z + iz. This ordering is
/// fixed repo-wide; every steering vector, snapshot and selection matrix
/// uses it.
struct UraGeometry {
    int m_y = 1;
    int m_z = 1;
    double spacing = 0.5;

    int count() const { return m_y * m_z; }
};

/// Effective angles: inter-element phase progression along y (u) and z (v).
/// With half-wavelength spacing, u = pi * (direction cosine along y), so a
/// physical direction satisfies (u/pi)^2 + (v/pi)^2 <= 1.
struct EffectiveAnglePair {
    double u = 0.0;
    double v = 0.0;
};

/// ULA array response: entry k is e^{j k u}, k = 0..n-1.
Eigen::VectorXcd ula_steering(double u, int n);

/// URA array response: kron(ula(u, m_y), ula(v, m_z)) under the y-major
/// flattening.
Eigen::VectorXcd ura_steering(double u, double v, const UraGeometry& g);

/// Effective angles seen at `from`'s array of the direction pointing to
/// `to`, scaled for half-wavelength spacing: u = pi*(to.y - from.y)/d,
/// v = pi*(to.z - from.z)/d. Serves both AoA (to = source) and AoD
/// (to = target). Throws on coincident points.
EffectiveAnglePair effective_angles_between(const Vec3& from, const Vec3& to);

/// Effective AoD at a ULA UE towards `target` (scalar u component). Equals
/// the negated effective AoA of the reverse link.
double ue_effective_aod(const Vec3& ue, const Vec3& target);

/// Wrap an angle difference into (-pi, pi].
double wrap_angle(double a);

}  // namespace rissim
