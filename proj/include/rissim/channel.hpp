#pragma once

#include "rissim/geometry.hpp"
#include "rissim/rng.hpp"

namespace rissim {

/// Log-distance path-loss model. pl0_db is the loss at the 1 m reference
/// distance; one exponent per link class.
struct PathlossModel {
    double pl0_db = 30.0;
    double exp_r2b = 2.3;
    double exp_u2r = 2.2;
    double exp_r2r = 2.1;
};

struct ComplexGain {
    cd value{1.0, 0.0};
};

/// Rank-1 LoS channel: matrix = gain * (rx steering) * (tx steering)^H.
/// rx_angles/tx_angles keep the generating effective angles (v unused for
/// ULA ends).
struct LosChannel {
    Eigen::MatrixXcd matrix;
    ComplexGain gain;
    EffectiveAnglePair rx_angles;
    EffectiveAnglePair tx_angles;
};

/// 10^(-pl0_db/10) * d^(-exponent). Throws for d < 1 m (inside the
/// reference distance).
double linear_path_gain(double d, double exponent, const PathlossModel& model);

/// Gain with deterministic magnitude sqrt(linear_path_gain) and phase
/// uniform on [0, 2*pi).
ComplexGain draw_gain(double d, double exponent, const PathlossModel& model, Rng& rng);

/// UE (ULA) -> sub-surface (URA) channel, shape (m_y*m_z) x n_ue.
LosChannel build_u2r(const UlaGeometry& ue_geom, const UraGeometry& sub_geom,
                     const Vec3& ue_pos, const Vec3& sub_pos, const ComplexGain& gain);

/// Reflecting sub-surface (URA) -> BS (ULA) channel, shape n_bs x (m_y*m_z).
LosChannel build_r2b(const UlaGeometry& bs_geom, const UraGeometry& ris_geom,
                     const Vec3& bs_pos, const Vec3& ris_pos, const ComplexGain& gain);

/// Reflecting sub-surface (URA) -> sensing sub-surface (URA) channel,
/// shape m_s x m_1.
LosChannel build_r2r(const UraGeometry& ris_geom, const UraGeometry& sub_geom,
                     const Vec3& ris_pos, const Vec3& sub_pos, const ComplexGain& gain);

}  // namespace rissim
