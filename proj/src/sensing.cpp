#include "rissim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rissim {

MicroSurfaceConfig MicroSurfaceConfig::default_for(const UraGeometry& g) {
    MicroSurfaceConfig cfg{std::max(1, g.m_y - 1), std::max(1, g.m_z - 1), g.m_y, g.m_z};
    cfg.validate();
    return cfg;
}

void MicroSurfaceConfig::validate() const {
    if (q_y < 1 || q_z < 1 || q_y > m_y || q_z > m_z)
        throw std::invalid_argument("micro-surface window exceeds sub-surface");
    if (l_micro() <= 2)
        throw std::invalid_argument("micro-surface too small for a 2-source noise subspace");
}

namespace {

// Rows of the full y-major snapshot belonging to the micro-surface at
// offsets (oy, oz), in the micro-surface's own y-major order.
std::vector<int> micro_indices(const MicroSurfaceConfig& cfg, int oy, int oz) {
    std::vector<int> idx(static_cast<size_t>(cfg.l_micro()));
    int j = 0;
    for (int qy = 0; qy < cfg.q_y; ++qy)
        for (int qz = 0; qz < cfg.q_z; ++qz)
            idx[j++] = (oy + qy) * cfg.m_z + (oz + qz);
    return idx;
}

Eigen::VectorXcd micro_steering(const MicroSurfaceConfig& cfg, double u, double v) {
    return ura_steering(u, v, UraGeometry{cfg.q_y, cfg.q_z});
}

}  // namespace

CorrelationMatrix fbss_covariance(std::span<const SnapshotBatch> batches,
                                  const MicroSurfaceConfig& cfg) {
    cfg.validate();
    if (batches.empty()) throw std::invalid_argument("fbss_covariance: no batches");
    const int l = cfg.l_micro();
    int n_slots = 0;
    int phase = 1;
    for (const SnapshotBatch& b : batches) {
        if (b.samples.rows() != cfg.m_y * cfg.m_z)
            throw std::invalid_argument("fbss_covariance: snapshot size does not match layout");
        n_slots += static_cast<int>(b.samples.cols());
        phase = std::max(phase, b.phase_index);
    }
    if (n_slots < 1) throw std::invalid_argument("fbss_covariance: no snapshots");

    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(l, l);
    Eigen::VectorXcd x(l), xb(l);
    for (int oy = 0; oy + cfg.q_y <= cfg.m_y; ++oy) {
        for (int oz = 0; oz + cfg.q_z <= cfg.m_z; ++oz) {
            const std::vector<int> idx = micro_indices(cfg, oy, oz);
            for (const SnapshotBatch& b : batches) {
                for (int t = 0; t < b.samples.cols(); ++t) {
                    for (int j = 0; j < l; ++j) x[j] = b.samples(idx[j], t);
                    // backward snapshot: J x*
                    for (int j = 0; j < l; ++j) xb[j] = std::conj(x[l - 1 - j]);
                    r.noalias() += x * x.adjoint();
                    r.noalias() += xb * xb.adjoint();
                }
            }
        }
    }
    r /= 2.0 * static_cast<double>(n_slots) * static_cast<double>(cfg.n_micro());
    r = 0.5 * (r + r.adjoint()).eval();  // remove rounding asymmetry
    return {std::move(r), phase};
}

CorrelationMatrix fbss_covariance(const SnapshotBatch& batch, const MicroSurfaceConfig& cfg) {
    return fbss_covariance(std::span<const SnapshotBatch>(&batch, 1), cfg);
}

SubspacePair signal_noise_subspaces(const CorrelationMatrix& r) {
    if (!r.r_hat.allFinite())
        throw std::invalid_argument("signal_noise_subspaces: non-finite correlation matrix");
    const int l = static_cast<int>(r.r_hat.rows());
    if (l < 3) throw std::invalid_argument("signal_noise_subspaces: matrix too small");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.r_hat);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("signal_noise_subspaces: eigendecomposition failed");

    // Eigen sorts ascending; flip to descending.
    SubspacePair out;
    out.eigenvalues = es.eigenvalues().reverse();
    Eigen::MatrixXcd vecs(l, l);
    for (int i = 0; i < l; ++i) vecs.col(i) = es.eigenvectors().col(l - 1 - i);
    out.u_s = vecs.leftCols(2);
    out.u_n = vecs.rightCols(l - 2);
    return out;
}

std::array<double, 2> esprit_axis(const SubspacePair& subspaces, const MicroSurfaceConfig& cfg,
                                  EspritAxis axis) {
    const int qy = cfg.q_y, qz = cfg.q_z;
    if ((axis == EspritAxis::y && qy < 2) || (axis == EspritAxis::z && qz < 2))
        throw std::invalid_argument("esprit_axis: axis aperture too small");

    // Auxiliary sub-surfaces of the first micro-surface: drop the last or
    // first row (axis y) / column (axis z) under y-major flattening.
    const int l_aux = (axis == EspritAxis::y) ? (qy - 1) * qz : qy * (qz - 1);
    Eigen::MatrixXcd us1(l_aux, 2), us2(l_aux, 2);
    int r = 0;
    for (int iy = 0; iy < qy; ++iy) {
        for (int iz = 0; iz < qz; ++iz) {
            if (axis == EspritAxis::y && iy >= qy - 1) continue;
            if (axis == EspritAxis::z && iz >= qz - 1) continue;
            const int j1 = iy * qz + iz;
            const int j2 = (axis == EspritAxis::y) ? (iy + 1) * qz + iz : iy * qz + iz + 1;
            us1.row(r) = subspaces.u_s.row(j1);
            us2.row(r) = subspaces.u_s.row(j2);
            ++r;
        }
    }

    Eigen::MatrixXcd stacked(l_aux, 4);
    stacked << us1, us2;
    const Eigen::MatrixXcd c = stacked.adjoint() * stacked;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
    if (es.info() != Eigen::Success) throw std::runtime_error("esprit_axis: eigen failure");
    Eigen::MatrixXcd v(4, 4);
    for (int i = 0; i < 4; ++i) v.col(i) = es.eigenvectors().col(3 - i);  // descending

    const Eigen::Matrix2cd v12 = v.block<2, 2>(0, 2);
    const Eigen::Matrix2cd v22 = v.block<2, 2>(2, 2);
    const double det_scale = std::sqrt(v22.squaredNorm() / 2.0);
    if (std::abs(v22.determinant()) < 1e-12 * std::max(1.0, det_scale * det_scale))
        throw std::runtime_error("esprit_axis: TLS degenerate");

    const Eigen::Matrix2cd phi = -v12 * v22.inverse();
    const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> ces(phi, false);
    return {std::arg(ces.eigenvalues()[0]), std::arg(ces.eigenvalues()[1])};
}

std::array<AoaPair, 2> music_pair(const std::array<double, 2>& u_candidates,
                                  const std::array<double, 2>& v_candidates,
                                  const SubspacePair& subspaces,
                                  const MicroSurfaceConfig& cfg) {
    for (double a : u_candidates)
        if (!std::isfinite(a)) throw std::invalid_argument("music_pair: non-finite candidate");
    for (double a : v_candidates)
        if (!std::isfinite(a)) throw std::invalid_argument("music_pair: non-finite candidate");

    double f[2][2];
    for (int l = 0; l < 2; ++l) {
        for (int s = 0; s < 2; ++s) {
            const Eigen::VectorXcd b = micro_steering(cfg, u_candidates[l], v_candidates[s]);
            f[l][s] = (subspaces.u_n.adjoint() * b).squaredNorm();
        }
    }

    // Two bijective pairings; identity wins ties.
    const double identity = f[0][0] + f[1][1];
    const double swapped = f[0][1] + f[1][0];
    if (identity <= swapped)
        return {AoaPair{{u_candidates[0], v_candidates[0]}, f[0][0]},
                AoaPair{{u_candidates[1], v_candidates[1]}, f[1][1]}};
    return {AoaPair{{u_candidates[0], v_candidates[1]}, f[0][1]},
            AoaPair{{u_candidates[1], v_candidates[0]}, f[1][0]}};
}

AoaPair disambiguate(const std::array<AoaPair, 2>& pairs, const Vec3& sub_pos,
                     const Vec3& ris_pos) {
    const EffectiveAnglePair known = effective_angles_between(sub_pos, ris_pos);
    // effective angles are phase progressions, so distances wrap mod 2*pi
    // (the reflect path often arrives endfire, right on the branch cut)
    const auto dist2 = [&](const AoaPair& p) {
        const double du = wrap_angle(p.angles.u - known.u);
        const double dv = wrap_angle(p.angles.v - known.v);
        return du * du + dv * dv;
    };
    // The candidate matching the reflect path is removed; the other one is
    // the direct arrival from the UE.
    return dist2(pairs[0]) < dist2(pairs[1]) ? pairs[1] : pairs[0];
}

namespace {

Vec3 ray_direction(const AoaPair& pair) {
    const double uy = pair.angles.u / std::numbers::pi;
    const double vz = pair.angles.v / std::numbers::pi;
    double rem = 1.0 - uy * uy - vz * vz;
    if (rem < -1e-6) throw std::invalid_argument("triangulate: non-physical angles");
    rem = std::max(rem, 0.0);
    return {std::sqrt(rem), uy, vz};
}

}  // namespace

LocationEstimate triangulate(const AoaPair& pair2, const Vec3& sub2_pos, const AoaPair& pair3,
                             const Vec3& sub3_pos) {
    const Vec3 d2 = ray_direction(pair2);
    const Vec3 d3 = ray_direction(pair3);
    if (d2.cross(d3).norm() < 1e-9)
        throw std::runtime_error("triangulate: rays parallel");

    // Closest points p2 + s2*d2, p3 + s3*d3 of the two lines; the location
    // estimate is the midpoint of the common perpendicular.
    const Vec3 w = sub2_pos - sub3_pos;
    const double b = d2.dot(d3);
    const double d = d2.dot(w);
    const double e = d3.dot(w);
    const double denom = 1.0 - b * b;
    if (std::abs(denom) < 1e-18) throw std::runtime_error("triangulate: rays parallel");
    const double s2 = (b * e - d) / denom;
    const double s3 = (e - b * d) / denom;

    const Vec3 p2 = sub2_pos + d2 * s2;
    const Vec3 p3 = sub3_pos + d3 * s3;
    LocationEstimate est;
    est.position = (p2 + p3) * 0.5;
    est.aoa_sub2 = pair2;
    est.aoa_sub3 = pair3;
    return est;
}

namespace {

AoaPair sense_one_surface(std::span<const SnapshotBatch> batches, const MicroSurfaceConfig& cfg,
                          const Vec3& sub_pos, const Vec3& ris_pos) {
    const CorrelationMatrix r = fbss_covariance(batches, cfg);
    const SubspacePair sub = signal_noise_subspaces(r);
    const std::array<double, 2> us = esprit_axis(sub, cfg, EspritAxis::y);
    const std::array<double, 2> vs = esprit_axis(sub, cfg, EspritAxis::z);
    const std::array<AoaPair, 2> pairs = music_pair(us, vs, sub, cfg);
    return disambiguate(pairs, sub_pos, ris_pos);
}

}  // namespace

LocationEstimate sense_location(std::span<const SnapshotBatch> batches_sub2,
                                std::span<const SnapshotBatch> batches_sub3,
                                const MicroSurfaceConfig& cfg, const Vec3& sub2_pos,
                                const Vec3& sub3_pos, const Vec3& ris_pos, int phase_index) {
    AoaPair p2, p3;
    try {
        p2 = sense_one_surface(batches_sub2, cfg, sub2_pos, ris_pos);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("sense_location[sub2]: ") + e.what());
    }
    try {
        p3 = sense_one_surface(batches_sub3, cfg, sub3_pos, ris_pos);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("sense_location[sub3]: ") + e.what());
    }
    LocationEstimate est;
    try {
        est = triangulate(p2, sub2_pos, p3, sub3_pos);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("sense_location[triangulate]: ") + e.what());
    }
    est.phase_index = phase_index;
    return est;
}

}  // namespace rissim
