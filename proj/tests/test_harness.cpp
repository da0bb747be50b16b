#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "rissim/config.hpp"
#include "rissim/harness.hpp"

using namespace rissim;

TEST_SUITE_BEGIN("harness");

TEST_CASE("oracle trial reproduces the closed-form phase-2 rate") {
    ScenarioConfig cfg;
    Rng rng(101);
    const TrialResult t = run_trial(cfg, Algorithm::oracle, rng);
    REQUIRE_FALSE(t.failed);

    // magnitudes of the drawn gains are deterministic functions of distance
    const SceneGeometry geom = cfg.scene_geometry();
    const double acom_sq =
        linear_path_gain((geom.bs_pos - geom.ris_pos).norm(), cfg.pathloss.exp_r2b,
                         cfg.pathloss) *
        linear_path_gain((cfg.ue_pos - geom.ris_pos).norm(), cfg.pathloss.exp_u2r, cfg.pathloss);
    const double snr = cfg.rho_w() / cfg.sigma0_w() * acom_sq * 16.0 * 400.0 * 400.0 * 4.0;
    CHECK(t.rate_phase2 == doctest::Approx(rate(snr)).epsilon(1e-9));
    CHECK(t.rate_avg ==
          doctest::Approx((5.0 * t.rate_phase1 + 95.0 * t.rate_phase2) / 100.0).epsilon(1e-12));
}

TEST_CASE("trials are deterministic for a fixed seed") {
    ScenarioConfig cfg;
    Rng a(55), b(55);
    const TrialResult ta = run_trial(cfg, Algorithm::s_sdr, a);
    const TrialResult tb = run_trial(cfg, Algorithm::s_sdr, b);
    CHECK(ta.rmse1 == tb.rmse1);
    CHECK(ta.rmse2 == tb.rmse2);
    CHECK(ta.rate_phase2 == tb.rate_phase2);
    CHECK(ta.rate_avg == tb.rate_avg);
}

TEST_CASE("sensing weight improves fine accuracy, communication weight the rate") {
    ScenarioConfig cfg;
    cfg.n_trials = 30;
    cfg.rho_tradeoff = 0.0;
    const MetricsRow com = run_monte_carlo(cfg, Algorithm::s_sdr);
    cfg.rho_tradeoff = 1.0;
    const MetricsRow sen = run_monte_carlo(cfg, Algorithm::s_sdr);
    CHECK(sen.rmse2_m <= com.rmse2_m);
    CHECK(com.rate_avg >= sen.rate_avg);
}

TEST_CASE("monte carlo aggregation basics") {
    ScenarioConfig cfg;
    cfg.n_trials = 1;
    const MetricsRow one = run_monte_carlo(cfg, Algorithm::oracle);
    CHECK(one.n_trials == 1);
    CHECK(one.n_failed == 0);
    CHECK(one.stderr_rate == 0.0);

    cfg.n_trials = 8;
    const MetricsRow a = run_monte_carlo(cfg, Algorithm::oracle);
    const MetricsRow b = run_monte_carlo(cfg, Algorithm::oracle);
    CHECK(a.rate_avg == b.rate_avg);  // full determinism
    CHECK(a.rmse2_m == b.rmse2_m);
}

TEST_CASE("standard error shrinks roughly as one over sqrt(n)") {
    ScenarioConfig cfg;
    cfg.ue_random = true;  // placement spread dominates the variance
    cfg.n_trials = 50;
    const MetricsRow small = run_monte_carlo(cfg, Algorithm::oracle);
    cfg.n_trials = 200;
    const MetricsRow big = run_monte_carlo(cfg, Algorithm::oracle);
    CHECK(big.stderr_rate == doctest::Approx(small.stderr_rate * 0.5).epsilon(0.5));
    CHECK(big.stderr_rate < small.stderr_rate);
}

TEST_CASE("sweep emits one row per grid point and algorithm") {
    ScenarioConfig cfg;
    cfg.n_trials = 2;
    cfg.rho_grid = {0.0, 1.0};
    const MetricsTable t = sweep_tradeoff(cfg, {Algorithm::s_sdr, Algorithm::s_mbs});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.rows[0].rho_tradeoff == 0.0);
    CHECK(t.rows[0].algorithm == "s_sdr");
    CHECK(t.rows[1].algorithm == "s_mbs");
    CHECK(t.rows[2].rho_tradeoff == 1.0);
}

TEST_CASE("oracle mean rate dominates the sensing-based schemes") {
    ScenarioConfig cfg;
    cfg.m1_y = cfg.m1_z = 10;  // lighter RIS for a quick aggregate
    cfg.n_trials = 100;
    cfg.rho_tradeoff = 0.3;
    const MetricsRow oracle = run_monte_carlo(cfg, Algorithm::oracle);
    const MetricsRow sdr = run_monte_carlo(cfg, Algorithm::s_sdr);
    const MetricsRow mbs = run_monte_carlo(cfg, Algorithm::s_mbs);
    CHECK(sdr.rate_avg <= oracle.rate_avg);
    CHECK(mbs.rate_avg <= oracle.rate_avg);
}

TEST_CASE("more sensing elements sharpen the fine location estimate") {
    ScenarioConfig cfg;
    cfg.n_trials = 50;
    cfg.rho_tradeoff = 1.0;
    cfg.ms_y = cfg.ms_z = 4;
    const MetricsRow small = run_monte_carlo(cfg, Algorithm::s_sdr);
    cfg.ms_y = cfg.ms_z = 6;
    const MetricsRow big = run_monte_carlo(cfg, Algorithm::s_sdr);
    CHECK(big.rmse2_m <= small.rmse2_m);
    CHECK(big.rmse1_m <= small.rmse1_m);
}

TEST_CASE("a mostly-failing scenario aborts the batch") {
    ScenarioConfig cfg;
    cfg.ue_pos = {0.02, -2.0, 0.0};  // barely inside the service half-space
    cfg.sigma0_dbm = -30.0;          // coarse estimates land behind the plane
    cfg.n_trials = 12;
    CHECK_THROWS_AS(run_monte_carlo(cfg, Algorithm::s_sdr), SimulationError);
}

TEST_CASE("S-SDR beats S-MBS in the balance region, gap trivial at the corners") {
    ScenarioConfig cfg;
    cfg.n_trials = 200;
    cfg.rho_grid = {0.0, 0.25, 0.5, 1.0};
    const MetricsTable sdr = sweep_tradeoff(cfg, {Algorithm::s_sdr});
    const MetricsTable mbs = sweep_tradeoff(cfg, {Algorithm::s_mbs});

    // balance region: the matched-weight S-SDR point weakly dominates
    for (size_t i : {size_t(1), size_t(2)}) {
        CHECK(sdr.rows[i].rate_phase2 >= mbs.rows[i].rate_phase2 * (1.0 - 5e-3));
        CHECK(sdr.rows[i].rmse2_m <= mbs.rows[i].rmse2_m * (1.0 + 5e-2));
    }
    // saturation corners: the rate gap narrows to under one percent
    for (size_t i : {size_t(0), size_t(3)}) {
        const double gap = std::abs(sdr.rows[i].rate_phase2 - mbs.rows[i].rate_phase2) /
                           mbs.rows[i].rate_phase2;
        CHECK(gap < 0.01);
    }
}

TEST_CASE("mobility: zero speed holds the long-term rate flat") {
    ScenarioConfig cfg = preset_config("fig13");
    cfg.n_trials = 5;
    const MetricsTable t = run_mobility(cfg, Algorithm::s_sdr, 0.0, 6);
    REQUIRE(t.rows.size() == 6);
    for (const MetricsRow& r : t.rows) CHECK(r.n_failed == 0);
    // the stale estimate is exact up to estimator noise, so later blocks sit
    // at the block-1 phase-2 level
    const double ref = t.rows[1].rate_avg;
    for (size_t b = 1; b < t.rows.size(); ++b)
        CHECK(t.rows[b].rate_avg == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("mobility: faster motion never helps the mean rate") {
    ScenarioConfig cfg = preset_config("fig13");
    cfg.n_trials = 10;
    double prev = 1e9;
    for (double speed : {1.0, 5.0, 10.0, 20.0}) {
        const MetricsTable t = run_mobility(cfg, Algorithm::s_sdr, speed, 6);
        double mean = 0.0;
        for (size_t b = 1; b < t.rows.size(); ++b) mean += t.rows[b].rate_avg;
        mean /= double(t.rows.size() - 1);
        CHECK(mean <= prev * (1.0 + 1e-9));
        prev = mean;
    }
}

TEST_CASE("mobility: a UE walking out of the service region is flagged") {
    ScenarioConfig cfg = preset_config("fig13");
    cfg.n_trials = 2;
    cfg.ue_velocity_dir = {-1.0, 0.0, 0.0};  // straight into the RIS plane
    const MetricsTable t = run_mobility(cfg, Algorithm::s_sdr, 40.0, 10);
    int failed = 0;
    for (const MetricsRow& r : t.rows) failed += r.n_failed;
    CHECK(failed > 0);
}

TEST_CASE("csv emission: header, rows, and exact round-trip") {
    const MetricsTable empty;
    CHECK(csv_string(empty) ==
          "scenario,algorithm,rho_tradeoff,rate_avg,rate_phase2,rmse1_m,rmse2_m,"
          "stderr_rate,stderr_rmse2,n_trials,n_failed\n");

    MetricsTable one;
    MetricsRow row;
    row.scenario = "default";
    row.algorithm = "s_sdr";
    row.rho_tradeoff = 0.25;
    row.rate_avg = 17.123456789012345;
    row.rate_phase2 = 1.0 / 3.0;
    row.rmse1_m = 6.02e-23;
    row.rmse2_m = 0.01;
    row.stderr_rate = 0.0;
    row.stderr_rmse2 = 1e-300;
    row.n_trials = 7;
    row.n_failed = 1;
    one.rows.push_back(row);

    const std::string csv = csv_string(one);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    // round-trip: parse the numeric fields back and compare bit-for-bit
    std::stringstream ss(csv);
    std::string header, line;
    std::getline(ss, header);
    std::getline(ss, line);
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    REQUIRE(fields.size() == 11);
    CHECK(std::stod(fields[3]) == row.rate_avg);
    CHECK(std::stod(fields[4]) == row.rate_phase2);
    CHECK(std::stod(fields[5]) == row.rmse1_m);
    CHECK(std::stod(fields[8]) == row.stderr_rmse2);

    const std::string path = "harness_csv_roundtrip.csv";
    emit_csv(one, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(body.str() == csv);
    std::remove(path.c_str());
}

TEST_CASE("config parsing and validation") {
    ScenarioConfig cfg = preset_config("default");
    apply_config_key(cfg, "n_trials", "17");
    apply_config_key(cfg, "rho_grid", "0, 0.5, 1");
    apply_config_key(cfg, "ue_pos", "4.0, -1.0, 0.0");
    CHECK(cfg.n_trials == 17);
    REQUIRE(cfg.rho_grid.size() == 3);
    CHECK(cfg.rho_grid[1] == 0.5);
    CHECK(cfg.ue_pos.y == -1.0);

    CHECK_THROWS_AS(apply_config_key(cfg, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_key(cfg, "n_trials", "lots"), ConfigError);

    apply_config_key(cfg, "tau1", "0");
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const std::string path = "harness_cfg_test.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n n_trials = 3 \nrho_grid = 0.5 # trailing comment\n";
    }
    ScenarioConfig from_file = preset_config("default");
    apply_config(from_file, parse_config_file(path));
    CHECK(from_file.n_trials == 3);
    REQUIRE(from_file.rho_grid.size() == 1);
    CHECK(from_file.rho_grid[0] == 0.5);
    std::remove(path.c_str());

    CHECK_THROWS_AS(preset_config("figX"), ConfigError);
    const SweepPlan plan = preset_sweep("fig12");
    CHECK(plan.scenarios.size() == 4);
}

TEST_SUITE_END();
