#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rissim/config.hpp"

namespace py = pybind11;
using namespace rissim;

namespace {

LocationEstimate localize_noiseless_demo(const ScenarioConfig& cfg_in, uint64_t seed) {
    ScenarioConfig cfg = cfg_in;
    cfg.sigma0_dbm = -std::numeric_limits<double>::infinity();
    const SceneGeometry geom = cfg.scene_geometry();
    Rng rng(derive_seed(seed, 0, 0));
    const Vec3 ue = cfg.ue_random ? sample_ue_position(cfg, rng) : cfg.ue_pos;
    const BlockChannels ch = draw_block_channels(cfg, ue, rng);

    Eigen::VectorXcd xi(geom.ris.count());
    for (int i = 0; i < xi.size(); ++i) xi[i] = random_phase(rng);
    const EcsiEstimate ecsi = estimate_ecsi(ch, xi, cfg.rho_w(), 0.0, cfg.delta_tau1, rng,
                                            EcsiMethod::perfect);
    auto [w_ue, w_bs] = mrt_mrc(ecsi);
    const BeamformerSet bf{w_bs, xi, w_ue};
    std::vector<SnapshotBatch> s2{
        synthesize_sensing_snapshots(ch, 0, bf, cfg.rho_w(), 0.0, cfg.tau1, 1, rng)};
    std::vector<SnapshotBatch> s3{
        synthesize_sensing_snapshots(ch, 1, bf, cfg.rho_w(), 0.0, cfg.tau1, 1, rng)};
    return sense_location(s2, s3, cfg.micro_config(), geom.sub2_pos, geom.sub3_pos,
                          geom.ris_pos, 1);
}

}  // namespace

PYBIND11_MODULE(_rissim, m) {
    m.doc() = "RIS-aided ISAC link simulator core";

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("norm", &Vec3::norm)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });

    py::class_<UlaGeometry>(m, "UlaGeometry")
        .def(py::init<int, double>(), py::arg("n_elements"), py::arg("spacing") = 0.5)
        .def_readwrite("n_elements", &UlaGeometry::n_elements)
        .def_readwrite("spacing", &UlaGeometry::spacing);

    py::class_<UraGeometry>(m, "UraGeometry")
        .def(py::init<int, int, double>(), py::arg("m_y"), py::arg("m_z"),
             py::arg("spacing") = 0.5)
        .def_readwrite("m_y", &UraGeometry::m_y)
        .def_readwrite("m_z", &UraGeometry::m_z)
        .def_readwrite("spacing", &UraGeometry::spacing)
        .def("count", &UraGeometry::count);

    py::class_<EffectiveAnglePair>(m, "EffectiveAnglePair")
        .def(py::init<>())
        .def_readwrite("u", &EffectiveAnglePair::u)
        .def_readwrite("v", &EffectiveAnglePair::v);

    py::class_<PathlossModel>(m, "PathlossModel")
        .def(py::init<>())
        .def_readwrite("pl0_db", &PathlossModel::pl0_db)
        .def_readwrite("exp_r2b", &PathlossModel::exp_r2b)
        .def_readwrite("exp_u2r", &PathlossModel::exp_u2r)
        .def_readwrite("exp_r2r", &PathlossModel::exp_r2r);

    py::class_<MicroSurfaceConfig>(m, "MicroSurfaceConfig")
        .def_readwrite("q_y", &MicroSurfaceConfig::q_y)
        .def_readwrite("q_z", &MicroSurfaceConfig::q_z)
        .def_readwrite("m_y", &MicroSurfaceConfig::m_y)
        .def_readwrite("m_z", &MicroSurfaceConfig::m_z)
        .def("l_micro", &MicroSurfaceConfig::l_micro)
        .def("n_micro", &MicroSurfaceConfig::n_micro);

    py::class_<AoaPair>(m, "AoaPair")
        .def_readwrite("angles", &AoaPair::angles)
        .def_readwrite("music_residual", &AoaPair::music_residual);

    py::class_<LocationEstimate>(m, "LocationEstimate")
        .def(py::init<>())
        .def_readwrite("position", &LocationEstimate::position)
        .def_readwrite("aoa_sub2", &LocationEstimate::aoa_sub2)
        .def_readwrite("aoa_sub3", &LocationEstimate::aoa_sub3)
        .def_readwrite("phase_index", &LocationEstimate::phase_index);

    py::class_<PsoConfig>(m, "PsoConfig")
        .def(py::init<>())
        .def_readwrite("n_particles", &PsoConfig::n_particles)
        .def_readwrite("n_iters", &PsoConfig::n_iters)
        .def_readwrite("c1", &PsoConfig::c1)
        .def_readwrite("c2", &PsoConfig::c2)
        .def_readwrite("c3", &PsoConfig::c3)
        .def_readwrite("v_min", &PsoConfig::v_min)
        .def_readwrite("v_max", &PsoConfig::v_max)
        .def_readwrite("hinge_penalty", &PsoConfig::hinge_penalty);

    py::class_<SdrDiagnostics>(m, "SdrDiagnostics")
        .def_readonly("sdp_objective", &SdrDiagnostics::sdp_objective)
        .def_readonly("chosen_objective", &SdrDiagnostics::chosen_objective)
        .def_readonly("n_feasible_samples", &SdrDiagnostics::n_feasible_samples)
        .def_readonly("rank1_gap", &SdrDiagnostics::rank1_gap);

    py::enum_<Algorithm>(m, "Algorithm")
        .value("s_sdr", Algorithm::s_sdr)
        .value("s_mbs", Algorithm::s_mbs)
        .value("oracle", Algorithm::oracle);

    py::enum_<EcsiMethod>(m, "EcsiMethod")
        .value("perfect", EcsiMethod::perfect)
        .value("ls_pilot", EcsiMethod::ls_pilot);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("id", &ScenarioConfig::id)
        .def_readwrite("bs_pos", &ScenarioConfig::bs_pos)
        .def_readwrite("ris_pos", &ScenarioConfig::ris_pos)
        .def_readwrite("d_s2s", &ScenarioConfig::d_s2s)
        .def_readwrite("ue_random", &ScenarioConfig::ue_random)
        .def_readwrite("ue_pos", &ScenarioConfig::ue_pos)
        .def_readwrite("ue_dist_min", &ScenarioConfig::ue_dist_min)
        .def_readwrite("ue_dist_max", &ScenarioConfig::ue_dist_max)
        .def_readwrite("ue_az_min_deg", &ScenarioConfig::ue_az_min_deg)
        .def_readwrite("ue_az_max_deg", &ScenarioConfig::ue_az_max_deg)
        .def_readwrite("n_bs", &ScenarioConfig::n_bs)
        .def_readwrite("n_ue", &ScenarioConfig::n_ue)
        .def_readwrite("m1_y", &ScenarioConfig::m1_y)
        .def_readwrite("m1_z", &ScenarioConfig::m1_z)
        .def_readwrite("ms_y", &ScenarioConfig::ms_y)
        .def_readwrite("ms_z", &ScenarioConfig::ms_z)
        .def_readwrite("delta_tau1", &ScenarioConfig::delta_tau1)
        .def_readwrite("tau1", &ScenarioConfig::tau1)
        .def_readwrite("tau2", &ScenarioConfig::tau2)
        .def_readwrite("rho_dbm", &ScenarioConfig::rho_dbm)
        .def_readwrite("sigma0_dbm", &ScenarioConfig::sigma0_dbm)
        .def_readwrite("pathloss", &ScenarioConfig::pathloss)
        .def_readwrite("rho_grid", &ScenarioConfig::rho_grid)
        .def_readwrite("rho_tradeoff", &ScenarioConfig::rho_tradeoff)
        .def_readwrite("epsilon", &ScenarioConfig::epsilon)
        .def_readwrite("ecsi", &ScenarioConfig::ecsi)
        .def_readwrite("l_gr", &ScenarioConfig::l_gr)
        .def_readwrite("pso", &ScenarioConfig::pso)
        .def_readwrite("n_trials", &ScenarioConfig::n_trials)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("n_blocks", &ScenarioConfig::n_blocks)
        .def_readwrite("block_duration_s", &ScenarioConfig::block_duration_s)
        .def_readwrite("ue_velocity_dir", &ScenarioConfig::ue_velocity_dir)
        .def("total_slots", &ScenarioConfig::total_slots)
        .def("rho_w", &ScenarioConfig::rho_w)
        .def("sigma0_w", &ScenarioConfig::sigma0_w)
        .def("micro_config", &ScenarioConfig::micro_config)
        .def("validate", &ScenarioConfig::validate);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("rmse1", &TrialResult::rmse1)
        .def_readonly("rmse2", &TrialResult::rmse2)
        .def_readonly("rate_phase1", &TrialResult::rate_phase1)
        .def_readonly("rate_phase2", &TrialResult::rate_phase2)
        .def_readonly("rate_avg", &TrialResult::rate_avg)
        .def_readonly("sdr", &TrialResult::sdr)
        .def_readonly("failed", &TrialResult::failed)
        .def_readonly("failure_stage", &TrialResult::failure_stage);

    py::class_<MetricsRow>(m, "MetricsRow")
        .def_readonly("scenario", &MetricsRow::scenario)
        .def_readonly("algorithm", &MetricsRow::algorithm)
        .def_readonly("rho_tradeoff", &MetricsRow::rho_tradeoff)
        .def_readonly("rate_avg", &MetricsRow::rate_avg)
        .def_readonly("rate_phase2", &MetricsRow::rate_phase2)
        .def_readonly("rmse1_m", &MetricsRow::rmse1_m)
        .def_readonly("rmse2_m", &MetricsRow::rmse2_m)
        .def_readonly("stderr_rate", &MetricsRow::stderr_rate)
        .def_readonly("stderr_rmse2", &MetricsRow::stderr_rmse2)
        .def_readonly("n_trials", &MetricsRow::n_trials)
        .def_readonly("n_failed", &MetricsRow::n_failed);

    py::class_<MetricsTable>(m, "MetricsTable").def_readonly("rows", &MetricsTable::rows);

    m.def("ula_steering", &ula_steering, py::arg("u"), py::arg("n"));
    m.def("ura_steering", &ura_steering, py::arg("u"), py::arg("v"), py::arg("geometry"));
    m.def("effective_angles_between", &effective_angles_between, py::arg("from_pos"),
          py::arg("to_pos"));
    m.def("ue_effective_aod", &ue_effective_aod, py::arg("ue"), py::arg("target"));
    m.def("linear_path_gain", &linear_path_gain, py::arg("d"), py::arg("exponent"),
          py::arg("model"));
    m.def("rate", &rate, py::arg("snr"));

    m.def("preset_config", &preset_config, py::arg("name"));
    m.def(
        "run_trial",
        [](const ScenarioConfig& cfg, Algorithm alg, uint64_t seed) {
            Rng rng(seed);
            return run_trial(cfg, alg, rng);
        },
        py::arg("config"), py::arg("algorithm"), py::arg("seed"));
    m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"), py::arg("algorithm"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_tradeoff", &sweep_tradeoff, py::arg("config"), py::arg("algorithms"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_mobility", &run_mobility, py::arg("config"), py::arg("algorithm"),
          py::arg("speed"), py::arg("n_blocks"), py::call_guard<py::gil_scoped_release>());
    m.def("csv_string", &csv_string, py::arg("table"));
    m.def("emit_csv", &emit_csv, py::arg("table"), py::arg("path"));
    m.def("localize_noiseless_demo", &localize_noiseless_demo, py::arg("config"),
          py::arg("seed") = 1);

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SimulationError>(m, "SimulationError");
}
