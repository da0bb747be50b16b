#pragma once

#include <span>
#include <vector>

#include "rissim/signal.hpp"

namespace rissim {

/// Sliding micro-surface layout over a q_y x q_z window of an m_y x m_z
/// sub-surface. Each micro-surface is shifted by one row/column from the
/// previous one, giving (m_y-q_y+1)*(m_z-q_z+1) of them.
struct MicroSurfaceConfig {
    int q_y = 0;
    int q_z = 0;
    int m_y = 0;
    int m_z = 0;

    int l_micro() const { return q_y * q_z; }
    int n_micro() const { return (m_y - q_y + 1) * (m_z - q_z + 1); }

    /// Largest window: q = m - 1 per axis, which yields 4 micro-surfaces.
    static MicroSurfaceConfig default_for(const UraGeometry& g);
    void validate() const;
};

/// Forward-backward smoothed sample auto-correlation matrix.
struct CorrelationMatrix {
    Eigen::MatrixXcd r_hat;
    int phase_index = 1;
};

struct SubspacePair {
    Eigen::MatrixXcd u_s;         // l_micro x 2
    Eigen::MatrixXcd u_n;         // l_micro x (l_micro - 2)
    Eigen::VectorXd eigenvalues;  // descending
};

struct AoaPair {
    EffectiveAnglePair angles;
    double music_residual = 0.0;
};

struct LocationEstimate {
    Vec3 position;
    AoaPair aoa_sub2;
    AoaPair aoa_sub3;
    int phase_index = 1;
};

enum class EspritAxis { y, z };

/// FBSS estimate of the micro-surface auto-correlation matrix:
/// R = 1/(2*T*n_micro) * sum_t sum_m (x x^H + J x* x^T J), pooled over all
/// given batches. Hermitian by construction.
CorrelationMatrix fbss_covariance(std::span<const SnapshotBatch> batches,
                                  const MicroSurfaceConfig& cfg);
CorrelationMatrix fbss_covariance(const SnapshotBatch& batch, const MicroSurfaceConfig& cfg);

/// Eigendecomposition split: the two dominant eigenvectors span the signal
/// subspace, the rest the noise subspace.
SubspacePair signal_noise_subspaces(const CorrelationMatrix& r);

/// TLS-ESPRIT over the chosen axis of the first micro-surface. Returns the
/// two eigenvalue angles of Phi_TLS = -V12 V22^{-1}.
std::array<double, 2> esprit_axis(const SubspacePair& subspaces, const MicroSurfaceConfig& cfg,
                                  EspritAxis axis);

/// Pair the per-axis estimates by the MUSIC residual
/// f(u, v) = || U_N^H b_micro(u, v) ||^2: keeps the bijective pairing with
/// the smaller residual sum (ties resolve to identity order).
std::array<AoaPair, 2> music_pair(const std::array<double, 2>& u_candidates,
                                  const std::array<double, 2>& v_candidates,
                                  const SubspacePair& subspaces,
                                  const MicroSurfaceConfig& cfg);

/// Drop the candidate closer (in (u, v) Euclidean distance) to the known
/// reflect-path arrival direction from the reflecting sub-surface.
AoaPair disambiguate(const std::array<AoaPair, 2>& pairs, const Vec3& sub_pos,
                     const Vec3& ris_pos);

/// Least-squares intersection (midpoint of the common perpendicular) of the
/// two arrival rays. Ray directions are (n_x, u/pi, v/pi) with
/// n_x = +sqrt(1 - (u/pi)^2 - (v/pi)^2), pointing into the x > 0 half-space.
LocationEstimate triangulate(const AoaPair& pair2, const Vec3& sub2_pos, const AoaPair& pair3,
                             const Vec3& sub3_pos);

/// Full localization pipeline for one phase: FBSS covariance -> subspace
/// split -> per-axis TLS-ESPRIT -> MUSIC pairing -> disambiguation per
/// sub-surface -> two-ray triangulation.
LocationEstimate sense_location(std::span<const SnapshotBatch> batches_sub2,
                                std::span<const SnapshotBatch> batches_sub3,
                                const MicroSurfaceConfig& cfg, const Vec3& sub2_pos,
                                const Vec3& sub3_pos, const Vec3& ris_pos, int phase_index);

}  // namespace rissim
