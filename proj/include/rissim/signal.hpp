#pragma once

#include <string>
#include <vector>

#include "rissim/channel.hpp"

namespace rissim {

/// Active/passive beamformer triple for one phase: BS combiner (unit
/// norm), RIS phase vector (unit-modulus entries), UE precoder (unit norm).
struct BeamformerSet {
    Eigen::VectorXcd w_bs;
    Eigen::VectorXcd xi;
    Eigen::VectorXcd w_ue;
};

/// Received samples at one sensing sub-surface over one phase; one column
/// per time slot.
struct SnapshotBatch {
    Eigen::MatrixXcd samples;
    int phase_index = 1;
    double noise_power = 0.0;
};

enum class EcsiMethod { perfect, ls_pilot };

/// Estimate of the effective UE-BS channel through the reflecting
/// sub-surface for a fixed RIS phase vector.
struct EcsiEstimate {
    Eigen::MatrixXcd h_eff;
    EcsiMethod method = EcsiMethod::perfect;
};

/// Channels of one coherence block. u2r[0] is the reflecting sub-surface
/// link; u2r[1], u2r[2] and r2r[0], r2r[1] belong to sensing sub-surfaces
/// 2 and 3.
struct BlockChannels {
    LosChannel r2b;
    std::vector<LosChannel> u2r;
    std::vector<LosChannel> r2r;
};

/// Snapshots at sensing sub-surface `sub_index` (0 -> sub-surface 2):
/// x(t) = sqrt(rho) * H_u2r * w_ue * s(t)
///      + sqrt(rho) * H_r2r * diag(xi) * H_u2r1 * w_ue * s(t) + n(t),
/// with unit-modulus random-phase data symbols s(t) and i.i.d. circular
/// complex Gaussian noise of variance sigma0_sq.
SnapshotBatch synthesize_sensing_snapshots(const BlockChannels& channels, int sub_index,
                                           const BeamformerSet& bf, double rho,
                                           double sigma0_sq, int n_slots, int phase_index,
                                           Rng& rng);

/// Combined BS output y(t) over n_slots, combiner already applied.
Eigen::VectorXcd synthesize_bs_signal(const BlockChannels& channels, const BeamformerSet& bf,
                                      double rho, double sigma0_sq, int n_slots, Rng& rng);

/// ECSI acquisition. perfect returns the exact effective channel; ls_pilot
/// sends n_ue orthogonal unit-power pilots repeated floor(delta_tau1/n_ue)
/// times and least-squares averages.
EcsiEstimate estimate_ecsi(const BlockChannels& channels, const Eigen::VectorXcd& xi,
                           double rho, double sigma0_sq, int delta_tau1, Rng& rng,
                           EcsiMethod method);

/// (rho/sigma0^2) |w_bs^H H_r2b diag(xi) H_u2r1 w_ue|^2
double snr_com(const BlockChannels& channels, const BeamformerSet& bf, double rho,
               double sigma0_sq);

struct SensingSnr {
    double total = 0.0;
    double sub2 = 0.0;
    double sub3 = 0.0;
};

/// Per-sub-surface direct-link SNR (rho/sigma0^2) ||H_u2r,i w_ue||^2 and
/// their sum over i = 2,3.
SensingSnr snr_sen(const BlockChannels& channels, const BeamformerSet& bf, double rho,
                   double sigma0_sq);

inline double rate(double snr) { return std::log2(1.0 + snr); }

}  // namespace rissim
