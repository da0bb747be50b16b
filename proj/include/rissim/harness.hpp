#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rissim/beamforming.hpp"

namespace rissim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Algorithm { s_sdr, s_mbs, oracle };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// Everything one run needs: deployment, array sizes, protocol slot split,
/// powers, path loss, optimizer settings, Monte Carlo depth and seed.
/// Powers are carried in dBm at this boundary and converted to watts
/// internally.
struct ScenarioConfig {
    std::string id = "default";

    Vec3 bs_pos{46.4973117, 7.0, 20.0};  // 50 m from the reflecting sub-surface
    Vec3 ris_pos{0.0, 0.0, 3.0};
    double d_s2s = 5.0;  // sensing sub-surfaces sit at ris_pos.y +- d_s2s/2

    bool ue_random = false;
    Vec3 ue_pos{3.46, -2.0, 0.0};
    double ue_dist_min = 5.0;
    double ue_dist_max = 10.0;
    double ue_az_min_deg = -45.0;
    double ue_az_max_deg = 45.0;

    int n_bs = 16;
    int n_ue = 4;
    int m1_y = 20;
    int m1_z = 20;
    int ms_y = 6;
    int ms_z = 6;

    int delta_tau1 = 0;  // pilot slots; 0 is enough for perfect ECSI
    int tau1 = 5;
    int tau2 = 95;

    double rho_dbm = 20.0;
    double sigma0_dbm = -80.0;
    PathlossModel pathloss{};

    std::vector<double> rho_grid{0.0, 0.25, 0.5, 0.75, 1.0};
    double rho_tradeoff = 0.5;
    double epsilon = 0.0;  // <= 0 selects the default epsilon1 = 0.05*n_ue
    EcsiMethod ecsi = EcsiMethod::perfect;
    int l_gr = 200;
    PsoConfig pso{};

    int n_trials = 200;
    uint64_t seed = 1;

    // mobility (long-term protocol); the default direction walks away from
    // the RIS boresight so speed degrades both staleness and path loss
    int n_blocks = 10;
    double block_duration_s = 0.01;
    Vec3 ue_velocity_dir{0.0, -1.0, 0.0};

    int total_slots() const { return delta_tau1 + tau1 + tau2; }
    double rho_w() const { return std::pow(10.0, (rho_dbm - 30.0) / 10.0); }
    double sigma0_w() const { return std::pow(10.0, (sigma0_dbm - 30.0) / 10.0); }

    SceneGeometry scene_geometry() const;
    MicroSurfaceConfig micro_config() const;
    void validate() const;
};

struct TrialResult {
    double rmse1 = 0.0;  // per-trial position error after phase 1 (m)
    double rmse2 = 0.0;  // per-trial position error after phase 2 (m)
    double rate_phase1 = 0.0;
    double rate_phase2 = 0.0;
    double rate_avg = 0.0;
    SensingSnr snr_sen_phase2{};
    std::optional<SdrDiagnostics> sdr;
    std::optional<LocationEstimate> fine_estimate;
    bool failed = false;
    std::string failure_stage;
};

struct MetricsRow {
    std::string scenario;
    std::string algorithm;
    double rho_tradeoff = 0.0;
    double rate_avg = 0.0;
    double rate_phase2 = 0.0;
    double rmse1_m = 0.0;
    double rmse2_m = 0.0;
    double stderr_rate = 0.0;
    double stderr_rmse2 = 0.0;
    int n_trials = 0;
    int n_failed = 0;
};

struct MetricsTable {
    std::vector<MetricsRow> rows;
};

/// One coherence block of the two-phase protocol: draw channels, phase-1
/// ECSI beamforming plus coarse sensing, sensing-based phase-2 beamforming,
/// fine sensing on the pooled covariance, rates.
TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, Rng& rng);

/// Seeded independent trials aggregated into one row. Throws
/// SimulationError when more than half the trials fail.
MetricsRow run_monte_carlo(const ScenarioConfig& cfg, Algorithm algorithm);

/// One Monte Carlo batch per trade-off factor per algorithm.
MetricsTable sweep_tradeoff(const ScenarioConfig& cfg, const std::vector<Algorithm>& algorithms);

/// Long-term protocol over n_blocks coherence blocks: block 1 runs the
/// two-phase protocol, later blocks drop phase 1 and reuse the previous
/// block's fine location estimate while the UE moves at `speed`. Emits one
/// row per block (rmse1_m carries the staleness error of the reused
/// estimate, rmse2_m the block's own fine estimate error).
MetricsTable run_mobility(const ScenarioConfig& cfg, Algorithm algorithm, double speed,
                          int n_blocks);

/// UTF-8 CSV with the fixed header; floating values in shortest
/// round-trip decimal form.
void emit_csv(const MetricsTable& table, const std::string& path);
std::string csv_string(const MetricsTable& table);

/// Uniform draw from the UE service region (distance and azimuth bounds,
/// on the floor z = 0).
Vec3 sample_ue_position(const ScenarioConfig& cfg, Rng& rng);

/// Channels of one coherence block for a given UE position.
BlockChannels draw_block_channels(const ScenarioConfig& cfg, const Vec3& ue_pos, Rng& rng);

}  // namespace rissim
