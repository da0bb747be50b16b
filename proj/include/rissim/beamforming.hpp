#pragma once

#include <optional>

#include "rissim/sdp.hpp"
#include "rissim/sensing.hpp"

namespace rissim {

/// Fixed positions and array layouts of the deployment. sub2/sub3 are the
/// sensing sub-surfaces; ris is the reflecting sub-surface.
struct SceneGeometry {
    UlaGeometry bs;
    UlaGeometry ue;
    UraGeometry ris;
    UraGeometry sub;
    Vec3 bs_pos;
    Vec3 ris_pos;
    Vec3 sub2_pos;
    Vec3 sub3_pos;
};

/// Weights and derived constants of the joint communication-sensing
/// trade-off problem.
struct TradeoffConfig {
    double rho_tradeoff = 0.5;  // 0 = communication only, 1 = sensing only
    double epsilon = 0.0;       // SNR-difference threshold (raw SNR units)
    double zeta_s = 1.0;
    double zeta_c = 1.0;
    double kappa = 1.0;
    double epsilon1 = 0.0;
    double eta2 = 1.0;
    double eta3 = 1.0;
};

/// Rank-1 quadratic forms of the UE precoder problem: p_i = c_i c_i^H for
/// the steering vectors towards the three sub-surfaces, and
/// p_kappa = p2 - kappa * p3 for the SNR-balance constraint.
struct QcqpProblem {
    Eigen::MatrixXcd p1;
    Eigen::MatrixXcd p2;
    Eigen::MatrixXcd p3;
    Eigen::MatrixXcd p_kappa;
    Eigen::VectorXcd c1;
    Eigen::VectorXcd c2;
    Eigen::VectorXcd c3;
    TradeoffConfig weights;

    /// P7 objective: rho*(eta2*F2 + eta3*F3) + (1-rho)*F1.
    double objective(const Eigen::VectorXcd& w) const;
    /// Balance value F2 - kappa*F3; feasible when in [0, epsilon1].
    double balance(const Eigen::VectorXcd& w) const;
};

struct PsoConfig {
    int n_particles = 50;
    int n_iters = 100;
    double c1 = 0.72;
    double c2 = 1.49;
    double c3 = 1.49;
    double v_min = -0.2;
    double v_max = 0.2;
    /// Penalize only actual constraint violation instead of the signed
    /// difference (off reproduces the published fitness exactly).
    bool hinge_penalty = false;
};

struct SdrDiagnostics {
    double sdp_objective = 0.0;
    double chosen_objective = 0.0;
    int n_feasible_samples = 0;
    double rank1_gap = 0.0;  // second/first eigenvalue of the SDP solution
};

struct SdrSolution {
    Eigen::VectorXcd w_ue;
    SdrDiagnostics diagnostics;
};

struct PsoSolution {
    Eigen::VectorXcd w_ue;
    Eigen::Vector3d weights;
    std::vector<double> best_fitness_trace;
};

/// MRT at the UE and MRC at the BS for the effective channel: w_ue is the
/// principal eigenvector of H^H H, w_bs the matched combiner.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> mrt_mrc(const EcsiEstimate& ecsi);

/// Closed-form phase-2 BS combiner and RIS phase vector from the sensed UE
/// location: matched steering at the BS, phase-aligned reflection at the
/// reflecting sub-surface.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> closed_form_bs_ris(const LocationEstimate& sensed,
                                                                 const SceneGeometry& geometry);

/// Assemble the UE precoder QCQP from the sensed location. Gains are
/// estimated from the path-loss model at sensed distances. epsilon <= 0
/// selects the default threshold epsilon1 = 0.05 * n_ue.
std::pair<QcqpProblem, TradeoffConfig> build_qcqp(const LocationEstimate& sensed,
                                                  const SceneGeometry& geometry,
                                                  const PathlossModel& pathloss,
                                                  double rho_tradeoff, double epsilon,
                                                  double rho, double sigma0_sq);

/// Derived trade-off constants from (estimated) link gains; epsilon1 and
/// epsilon are tied through epsilon1 = epsilon*sigma0^2/(rho*|a2|^2*m_s).
TradeoffConfig tradeoff_from_gains(double a2_sq, double a3_sq, double acom_sq, double gamma,
                                   int m_s, int n_ue, double rho_tradeoff, double epsilon,
                                   double rho, double sigma0_sq);

/// S-SDR scheme: semidefinite relaxation of the QCQP plus Gaussian
/// randomization over l_gr samples (feasible samples preferred, penalized
/// objective as fallback).
SdrSolution solve_sdr(const QcqpProblem& q, int l_gr, Rng& rng,
                      const SdpOptions& sdp_options = {});

/// S-MBS scheme: particle swarm over the three steered-beam weights with
/// the penalized fitness (penalty parameter 2*rho_tradeoff).
PsoSolution solve_mbs_pso(const QcqpProblem& q, const PsoConfig& cfg, Rng& rng);

/// Matched beamforming from the true UE position; stands in for the
/// perfect-CSI baseline (optimal under rank-1 LoS channels).
BeamformerSet oracle_baseline(const Vec3& true_ue_pos, const SceneGeometry& geometry);

}  // namespace rissim
