#include "rissim/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rissim {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::s_sdr: return "s_sdr";
        case Algorithm::s_mbs: return "s_mbs";
        case Algorithm::oracle: return "oracle";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "s_sdr") return Algorithm::s_sdr;
    if (s == "s_mbs") return Algorithm::s_mbs;
    if (s == "oracle") return Algorithm::oracle;
    throw ConfigError("unknown algorithm: " + s);
}

SceneGeometry ScenarioConfig::scene_geometry() const {
    SceneGeometry g;
    g.bs = UlaGeometry{n_bs};
    g.ue = UlaGeometry{n_ue};
    g.ris = UraGeometry{m1_y, m1_z};
    g.sub = UraGeometry{ms_y, ms_z};
    g.bs_pos = bs_pos;
    g.ris_pos = ris_pos;
    g.sub2_pos = ris_pos + Vec3{0.0, d_s2s / 2.0, 0.0};
    g.sub3_pos = ris_pos - Vec3{0.0, d_s2s / 2.0, 0.0};
    return g;
}

MicroSurfaceConfig ScenarioConfig::micro_config() const {
    return MicroSurfaceConfig::default_for(UraGeometry{ms_y, ms_z});
}

void ScenarioConfig::validate() const {
    const auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (n_bs < 1 || n_ue < 1 || m1_y < 1 || m1_z < 1 || ms_y < 2 || ms_z < 2)
        fail("array sizes must be positive (sensing sub-surfaces at least 2x2)");
    if (tau1 < 1 || tau2 < 1 || delta_tau1 < 0) fail("slot counts invalid");
    if (ecsi == EcsiMethod::ls_pilot && delta_tau1 < n_ue)
        fail("ls_pilot needs delta_tau1 >= n_ue");
    if (!(d_s2s > 0.0)) fail("d_s2s must be positive");
    if (!(pathloss.pl0_db > 0.0)) fail("pl0_db must be positive");
    for (double e : {pathloss.exp_r2b, pathloss.exp_u2r, pathloss.exp_r2r})
        if (e < 1.5 || e > 4.0) fail("path-loss exponent outside [1.5, 4]");
    for (double r : rho_grid)
        if (r < 0.0 || r > 1.0) fail("rho grid values must lie in [0, 1]");
    if (rho_grid.empty()) fail("rho grid empty");
    if (rho_tradeoff < 0.0 || rho_tradeoff > 1.0) fail("rho_tradeoff outside [0, 1]");
    if (n_trials < 1) fail("n_trials must be >= 1");
    if (l_gr < 1) fail("l_gr must be >= 1");
    if (ue_random) {
        if (!(ue_dist_min > ris_pos.z) || !(ue_dist_max >= ue_dist_min))
            fail("UE distance range invalid (must clear the RIS height)");
    } else if (!(ue_pos.x > 0.0)) {
        fail("UE must lie in the x > 0 service half-space");
    }
    if (n_blocks < 1 || !(block_duration_s > 0.0)) fail("mobility settings invalid");
    MicroSurfaceConfig::default_for(UraGeometry{ms_y, ms_z});  // throws if unusable
}

Vec3 sample_ue_position(const ScenarioConfig& cfg, Rng& rng) {
    std::uniform_real_distribution<double> ud(cfg.ue_dist_min, cfg.ue_dist_max);
    std::uniform_real_distribution<double> ua(cfg.ue_az_min_deg, cfg.ue_az_max_deg);
    const double d = ud(rng);
    const double az = ua(rng) * std::numbers::pi / 180.0;
    const double h = cfg.ris_pos.z;  // UE is on the floor
    const double r = std::sqrt(std::max(d * d - h * h, 1e-12));
    return {cfg.ris_pos.x + r * std::cos(az), cfg.ris_pos.y + r * std::sin(az), 0.0};
}

BlockChannels draw_block_channels(const ScenarioConfig& cfg, const Vec3& ue_pos, Rng& rng) {
    const SceneGeometry g = cfg.scene_geometry();
    const PathlossModel& pl = cfg.pathloss;
    // the log-distance model saturates at its 1 m reference; closely spaced
    // sub-surfaces (small d_s2s) would otherwise fall inside it
    const auto gain = [&](double d, double exponent) {
        return draw_gain(std::max(d, 1.0), exponent, pl, rng);
    };
    BlockChannels ch;
    ch.r2b = build_r2b(g.bs, g.ris, g.bs_pos, g.ris_pos,
                       gain((g.bs_pos - g.ris_pos).norm(), pl.exp_r2b));
    const Vec3 subs[3] = {g.ris_pos, g.sub2_pos, g.sub3_pos};
    for (int i = 0; i < 3; ++i) {
        const UraGeometry& sg = (i == 0) ? g.ris : g.sub;
        ch.u2r.push_back(
            build_u2r(g.ue, sg, ue_pos, subs[i], gain((ue_pos - subs[i]).norm(), pl.exp_u2r)));
    }
    for (int i = 1; i < 3; ++i) {
        ch.r2r.push_back(build_r2r(g.ris, g.sub, g.ris_pos, subs[i],
                                   gain((g.ris_pos - subs[i]).norm(), pl.exp_r2r)));
    }
    return ch;
}

namespace {

Eigen::VectorXcd random_ris_phases(int m, Rng& rng) {
    Eigen::VectorXcd xi(m);
    for (int i = 0; i < m; ++i) xi[i] = random_phase(rng);
    return xi;
}

struct Phase2Setup {
    BeamformerSet bf;
    std::optional<SdrDiagnostics> sdr;
};

Phase2Setup phase2_beamformers(const ScenarioConfig& cfg, Algorithm alg,
                               const SceneGeometry& geom, const Vec3& true_ue,
                               const LocationEstimate& sensed, Rng& rng) {
    Phase2Setup out;
    if (alg == Algorithm::oracle) {
        out.bf = oracle_baseline(true_ue, geom);
        return out;
    }
    auto [w_bs, xi] = closed_form_bs_ris(sensed, geom);
    auto [qcqp, tcfg] = build_qcqp(sensed, geom, cfg.pathloss, cfg.rho_tradeoff, cfg.epsilon,
                                   cfg.rho_w(), cfg.sigma0_w());
    Eigen::VectorXcd w_ue;
    if (alg == Algorithm::s_sdr) {
        SdrSolution sol = solve_sdr(qcqp, cfg.l_gr, rng);
        w_ue = std::move(sol.w_ue);
        out.sdr = sol.diagnostics;
    } else {
        PsoSolution sol = solve_mbs_pso(qcqp, cfg.pso, rng);
        w_ue = std::move(sol.w_ue);
    }
    out.bf = BeamformerSet{std::move(w_bs), std::move(xi), std::move(w_ue)};
    return out;
}

double err_norm(const LocationEstimate& est, const Vec3& truth) {
    return (est.position - truth).norm();
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg, Algorithm algorithm, Rng& rng) {
    cfg.validate();
    const SceneGeometry geom = cfg.scene_geometry();
    const MicroSurfaceConfig micro = cfg.micro_config();
    const double rho = cfg.rho_w();
    const double sigma0 = cfg.sigma0_w();

    TrialResult res;
    std::string stage = "setup";
    try {
        const Vec3 ue = cfg.ue_random ? sample_ue_position(cfg, rng) : cfg.ue_pos;

        stage = "channels";
        const BlockChannels ch = draw_block_channels(cfg, ue, rng);

        stage = "phase1_beamforming";
        const Eigen::VectorXcd xi1 = random_ris_phases(geom.ris.count(), rng);
        const EcsiEstimate ecsi =
            estimate_ecsi(ch, xi1, rho, sigma0, cfg.delta_tau1, rng, cfg.ecsi);
        auto [w_ue1, w_bs1] = mrt_mrc(ecsi);
        const BeamformerSet bf1{w_bs1, xi1, w_ue1};
        res.rate_phase1 = rate(snr_com(ch, bf1, rho, sigma0));

        stage = "phase1_sensing";
        std::vector<SnapshotBatch> sub2, sub3;
        sub2.push_back(synthesize_sensing_snapshots(ch, 0, bf1, rho, sigma0, cfg.tau1, 1, rng));
        sub3.push_back(synthesize_sensing_snapshots(ch, 1, bf1, rho, sigma0, cfg.tau1, 1, rng));
        const LocationEstimate est1 = sense_location(sub2, sub3, micro, geom.sub2_pos,
                                                     geom.sub3_pos, geom.ris_pos, 1);
        res.rmse1 = err_norm(est1, ue);

        stage = "phase2_beamforming";
        const Phase2Setup p2 = phase2_beamformers(cfg, algorithm, geom, ue, est1, rng);
        res.sdr = p2.sdr;
        res.rate_phase2 = rate(snr_com(ch, p2.bf, rho, sigma0));
        res.snr_sen_phase2 = snr_sen(ch, p2.bf, rho, sigma0);

        stage = "phase2_sensing";
        sub2.push_back(synthesize_sensing_snapshots(ch, 0, p2.bf, rho, sigma0, cfg.tau2, 2, rng));
        sub3.push_back(synthesize_sensing_snapshots(ch, 1, p2.bf, rho, sigma0, cfg.tau2, 2, rng));
        const LocationEstimate est2 = sense_location(sub2, sub3, micro, geom.sub2_pos,
                                                     geom.sub3_pos, geom.ris_pos, 2);
        res.rmse2 = err_norm(est2, ue);
        res.fine_estimate = est2;

        const double slots = static_cast<double>(cfg.total_slots());
        res.rate_avg = (cfg.tau1 * res.rate_phase1 + cfg.tau2 * res.rate_phase2) / slots;
    } catch (const std::exception& e) {
        res.failed = true;
        res.failure_stage = stage + ": " + e.what();
    }
    return res;
}

namespace {

struct Aggregate {
    int n = 0;
    int failed = 0;
    double sum_rate = 0.0, sum_rate_sq = 0.0;
    double sum_rate2 = 0.0;
    double sum_e1_sq = 0.0;
    double sum_e2_sq = 0.0, sum_e2_4 = 0.0;

    void add(const TrialResult& t) {
        if (t.failed) {
            ++failed;
            return;
        }
        ++n;
        sum_rate += t.rate_avg;
        sum_rate_sq += t.rate_avg * t.rate_avg;
        sum_rate2 += t.rate_phase2;
        sum_e1_sq += t.rmse1 * t.rmse1;
        const double e2s = t.rmse2 * t.rmse2;
        sum_e2_sq += e2s;
        sum_e2_4 += e2s * e2s;
    }

    MetricsRow finish(const ScenarioConfig& cfg, Algorithm alg) const {
        MetricsRow row;
        row.scenario = cfg.id;
        row.algorithm = to_string(alg);
        row.rho_tradeoff = cfg.rho_tradeoff;
        row.n_trials = n + failed;
        row.n_failed = failed;
        if (n == 0) return row;
        const double dn = static_cast<double>(n);
        row.rate_avg = sum_rate / dn;
        row.rate_phase2 = sum_rate2 / dn;
        row.rmse1_m = std::sqrt(sum_e1_sq / dn);
        row.rmse2_m = std::sqrt(sum_e2_sq / dn);
        if (n > 1) {
            const double var_rate =
                std::max(0.0, (sum_rate_sq - sum_rate * sum_rate / dn) / (dn - 1.0));
            row.stderr_rate = std::sqrt(var_rate / dn);
            // delta method: Var(sqrt(m)) ~ Var(m) / (4 m)
            const double mean_e2 = sum_e2_sq / dn;
            const double var_e2 =
                std::max(0.0, (sum_e2_4 - sum_e2_sq * sum_e2_sq / dn) / (dn - 1.0));
            if (mean_e2 > 0.0) row.stderr_rmse2 = std::sqrt(var_e2 / dn / (4.0 * mean_e2));
        }
        return row;
    }
};

}  // namespace

MetricsRow run_monte_carlo(const ScenarioConfig& cfg, Algorithm algorithm) {
    cfg.validate();
    Aggregate agg;
    // neither the algorithm nor the trade-off factor enters the seed:
    // points of a sweep see paired realizations (common random numbers)
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
        Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial)));
        agg.add(run_trial(cfg, algorithm, rng));
    }
    if (agg.failed * 2 > cfg.n_trials)
        throw SimulationError("run_monte_carlo: more than half the trials failed (" +
                              std::to_string(agg.failed) + "/" + std::to_string(cfg.n_trials) +
                              ")");
    return agg.finish(cfg, algorithm);
}

MetricsTable sweep_tradeoff(const ScenarioConfig& cfg,
                            const std::vector<Algorithm>& algorithms) {
    cfg.validate();
    MetricsTable table;
    for (double rho : cfg.rho_grid) {
        for (Algorithm alg : algorithms) {
            ScenarioConfig point = cfg;
            point.rho_tradeoff = rho;
            table.rows.push_back(run_monte_carlo(point, alg));
        }
    }
    return table;
}

MetricsTable run_mobility(const ScenarioConfig& cfg, Algorithm algorithm, double speed,
                          int n_blocks) {
    cfg.validate();
    if (n_blocks < 2) throw ConfigError("run_mobility: n_blocks must be >= 2");

    const SceneGeometry geom = cfg.scene_geometry();
    const MicroSurfaceConfig micro = cfg.micro_config();
    const double rho = cfg.rho_w();
    const double sigma0 = cfg.sigma0_w();
    const double dir_norm = cfg.ue_velocity_dir.norm();
    if (dir_norm <= 0.0) throw ConfigError("run_mobility: zero velocity direction");
    const Vec3 step = cfg.ue_velocity_dir * (speed * cfg.block_duration_s / dir_norm);

    std::vector<Aggregate> per_block(static_cast<size_t>(n_blocks));

    for (int trial = 0; trial < cfg.n_trials; ++trial) {
        // speed is deliberately not mixed into the seed: speed grids compare
        // paired realizations (common random numbers)
        Rng rng(derive_seed(cfg.seed, static_cast<uint64_t>(trial),
                            0x1357 + static_cast<uint64_t>(algorithm)));
        const Vec3 ue0 = cfg.ue_random ? sample_ue_position(cfg, rng) : cfg.ue_pos;

        // Block 1 runs the full two-phase protocol; its fine estimate seeds
        // the long-term chain.
        LocationEstimate prev_est;
        bool alive = true;
        {
            ScenarioConfig b1 = cfg;
            b1.ue_random = false;
            b1.ue_pos = ue0;
            const TrialResult first = run_trial(b1, algorithm, rng);
            per_block[0].add(first);
            alive = !first.failed && first.fine_estimate.has_value();
            if (alive) prev_est = *first.fine_estimate;
        }

        for (int b = 1; b < n_blocks && alive; ++b) {
            const Vec3 ue_b = ue0 + step * static_cast<double>(b);
            TrialResult tr;
            const std::string block_stage = "mobility_block";
            try {
                if (!(ue_b.x > 0.0)) throw std::runtime_error("UE left the service region");
                const BlockChannels ch = draw_block_channels(cfg, ue_b, rng);
                const Phase2Setup p2 =
                    phase2_beamformers(cfg, algorithm, geom, ue_b, prev_est, rng);
                tr.rate_phase2 = rate(snr_com(ch, p2.bf, rho, sigma0));
                tr.rate_avg = tr.rate_phase2;  // whole block carries data
                tr.snr_sen_phase2 = snr_sen(ch, p2.bf, rho, sigma0);
                tr.rmse1 = (prev_est.position - ue_b).norm();  // staleness error

                const int slots = cfg.total_slots();
                std::vector<SnapshotBatch> s2{
                    synthesize_sensing_snapshots(ch, 0, p2.bf, rho, sigma0, slots, 2, rng)};
                std::vector<SnapshotBatch> s3{
                    synthesize_sensing_snapshots(ch, 1, p2.bf, rho, sigma0, slots, 2, rng)};
                const LocationEstimate est = sense_location(s2, s3, micro, geom.sub2_pos,
                                                            geom.sub3_pos, geom.ris_pos, 2);
                tr.rmse2 = (est.position - ue_b).norm();
                prev_est = est;
            } catch (const std::exception& e) {
                tr.failed = true;
                tr.failure_stage = block_stage + ": " + e.what();
                alive = false;
            }
            per_block[static_cast<size_t>(b)].add(tr);
        }
    }

    MetricsTable table;
    for (int b = 0; b < n_blocks; ++b) {
        ScenarioConfig labeled = cfg;
        labeled.id = cfg.id + "_b" + std::to_string(b + 1);
        table.rows.push_back(per_block[static_cast<size_t>(b)].finish(labeled, algorithm));
    }
    return table;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string csv_string(const MetricsTable& table) {
    std::ostringstream out;
    out << "scenario,algorithm,rho_tradeoff,rate_avg,rate_phase2,rmse1_m,rmse2_m,"
           "stderr_rate,stderr_rmse2,n_trials,n_failed\n";
    for (const MetricsRow& r : table.rows) {
        out << r.scenario << ',' << r.algorithm << ',' << format_double(r.rho_tradeoff) << ','
            << format_double(r.rate_avg) << ',' << format_double(r.rate_phase2) << ','
            << format_double(r.rmse1_m) << ',' << format_double(r.rmse2_m) << ','
            << format_double(r.stderr_rate) << ',' << format_double(r.stderr_rmse2) << ','
            << r.n_trials << ',' << r.n_failed << '\n';
    }
    return out.str();
}

void emit_csv(const MetricsTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimulationError("emit_csv: cannot open " + path);
    f << csv_string(table);
    if (!f) throw SimulationError("emit_csv: write failed for " + path);
}

}  // namespace rissim
