#include "rissim/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace rissim {

double QcqpProblem::objective(const Eigen::VectorXcd& w) const {
    const double f1 = std::norm(c1.dot(w));
    const double f2 = std::norm(c2.dot(w));
    const double f3 = std::norm(c3.dot(w));
    return weights.rho_tradeoff * (weights.eta2 * f2 + weights.eta3 * f3) +
           (1.0 - weights.rho_tradeoff) * f1;
}

double QcqpProblem::balance(const Eigen::VectorXcd& w) const {
    return std::norm(c2.dot(w)) - weights.kappa * std::norm(c3.dot(w));
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> mrt_mrc(const EcsiEstimate& ecsi) {
    const Eigen::MatrixXcd& h = ecsi.h_eff;
    if (h.norm() < 1e-300) throw std::invalid_argument("mrt_mrc: null channel");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.adjoint() * h);
    if (es.info() != Eigen::Success) throw std::runtime_error("mrt_mrc: eigen failure");
    Eigen::VectorXcd w_ue = es.eigenvectors().col(h.cols() - 1);  // largest eigenvalue
    w_ue.normalize();
    Eigen::VectorXcd w_bs = h * w_ue;
    const double g = w_bs.norm();
    if (g < 1e-300) throw std::invalid_argument("mrt_mrc: null channel");
    w_bs /= g;
    return {w_ue, w_bs};
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> closed_form_bs_ris(const LocationEstimate& sensed,
                                                                 const SceneGeometry& geometry) {
    if (!(sensed.position.x > 0.0))
        throw std::invalid_argument("closed_form_bs_ris: sensed position behind RIS plane");

    const EffectiveAnglePair bs_aoa = effective_angles_between(geometry.bs_pos, geometry.ris_pos);
    const EffectiveAnglePair ris_aod = effective_angles_between(geometry.ris_pos, geometry.bs_pos);
    const EffectiveAnglePair ris_aoa =
        effective_angles_between(geometry.ris_pos, sensed.position);

    Eigen::VectorXcd w_bs = ula_steering(bs_aoa.u, geometry.bs.n_elements);
    w_bs /= std::sqrt(static_cast<double>(geometry.bs.n_elements));

    const Eigen::VectorXcd b_ue = ura_steering(ris_aoa.u, ris_aoa.v, geometry.ris);
    const Eigen::VectorXcd b_bs = ura_steering(ris_aod.u, ris_aod.v, geometry.ris);
    const Eigen::VectorXcd xi = b_ue.conjugate().cwiseProduct(b_bs);
    return {w_bs, xi};
}

TradeoffConfig tradeoff_from_gains(double a2_sq, double a3_sq, double acom_sq, double gamma,
                                   int m_s, int n_ue, double rho_tradeoff, double epsilon,
                                   double rho, double sigma0_sq) {
    if (!(rho_tradeoff >= 0.0 && rho_tradeoff <= 1.0))
        throw std::invalid_argument("tradeoff_from_gains: rho_tradeoff outside [0,1]");
    if (!(a2_sq > 0.0 && a3_sq > 0.0))
        throw std::invalid_argument("tradeoff_from_gains: non-positive link gain");

    TradeoffConfig t;
    t.rho_tradeoff = rho_tradeoff;
    t.kappa = a3_sq / a2_sq;
    t.eta2 = 2.0 * a2_sq / (a2_sq + a3_sq);
    t.eta3 = 2.0 * a3_sq / (a2_sq + a3_sq);
    t.zeta_s = 0.5 * (a2_sq + a3_sq) * static_cast<double>(m_s);
    t.zeta_c = acom_sq * gamma * gamma;
    if (epsilon > 0.0) {
        t.epsilon = epsilon;
        t.epsilon1 = epsilon * sigma0_sq / (rho * a2_sq * static_cast<double>(m_s));
    } else {
        // Default threshold keeps the balance constraint active but
        // satisfiable at every problem size.
        t.epsilon1 = 0.05 * static_cast<double>(n_ue);
        t.epsilon = t.epsilon1 * rho * a2_sq * static_cast<double>(m_s) / sigma0_sq;
    }
    return t;
}

std::pair<QcqpProblem, TradeoffConfig> build_qcqp(const LocationEstimate& sensed,
                                                  const SceneGeometry& geometry,
                                                  const PathlossModel& pathloss,
                                                  double rho_tradeoff, double epsilon,
                                                  double rho, double sigma0_sq) {
    const Vec3 q_ue = sensed.position;
    const Vec3 subs[3] = {geometry.ris_pos, geometry.sub2_pos, geometry.sub3_pos};
    double d[3];
    for (int i = 0; i < 3; ++i) {
        d[i] = (q_ue - subs[i]).norm();
        if (d[i] <= 0.0)
            throw std::invalid_argument("build_qcqp: sensed position coincides with a sub-surface");
    }

    // AoD at the UE equals the negated AoA at each sub-surface.
    Eigen::VectorXcd c[3];
    for (int i = 0; i < 3; ++i) {
        const double u_aoa = effective_angles_between(subs[i], q_ue).u;
        c[i] = ula_steering(-u_aoa, geometry.ue.n_elements);
    }

    const double a2_sq = linear_path_gain(d[1], pathloss.exp_u2r, pathloss);
    const double a3_sq = linear_path_gain(d[2], pathloss.exp_u2r, pathloss);
    const double d_r2b = (geometry.bs_pos - geometry.ris_pos).norm();
    const double acom_sq = linear_path_gain(d_r2b, pathloss.exp_r2b, pathloss) *
                           linear_path_gain(d[0], pathloss.exp_u2r, pathloss);
    const double gamma =
        std::sqrt(static_cast<double>(geometry.bs.n_elements)) * geometry.ris.count();

    const TradeoffConfig t =
        tradeoff_from_gains(a2_sq, a3_sq, acom_sq, gamma, geometry.sub.count(),
                            geometry.ue.n_elements, rho_tradeoff, epsilon, rho, sigma0_sq);

    QcqpProblem q;
    q.c1 = c[0];
    q.c2 = c[1];
    q.c3 = c[2];
    q.p1 = c[0] * c[0].adjoint();
    q.p2 = c[1] * c[1].adjoint();
    q.p3 = c[2] * c[2].adjoint();
    q.p_kappa = q.p2 - t.kappa * q.p3;
    q.weights = t;
    return {q, t};
}

SdrSolution solve_sdr(const QcqpProblem& q, int l_gr, Rng& rng, const SdpOptions& sdp_options) {
    if (l_gr < 1) throw std::invalid_argument("solve_sdr: l_gr < 1");
    const TradeoffConfig& t = q.weights;
    const int n = static_cast<int>(q.c1.size());

    const Eigen::MatrixXcd objective = t.rho_tradeoff * (t.eta2 * q.p2 + t.eta3 * q.p3) +
                                       (1.0 - t.rho_tradeoff) * q.p1;
    SdpResult sdp;
    try {
        sdp = sdp_solve_small(objective, {{q.p_kappa, 0.0, t.epsilon1}}, 1.0, sdp_options);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("solve_sdr: infeasible balance constraint (") +
                                 e.what() + ")");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sdp.w);
    Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXcd shaper =
        es.eigenvectors() * lambda.cwiseSqrt().asDiagonal();

    SdrDiagnostics diag;
    diag.sdp_objective = sdp.objective;
    diag.rank1_gap = lambda[n - 1] > 0.0 ? lambda[n - 2] / lambda[n - 1] : 0.0;

    // Gaussian randomization: keep the best constraint-feasible sample; if
    // none is feasible fall back to the best penalized objective.
    const double mu_pen = std::max(1.0, 2.0 * t.rho_tradeoff);
    Eigen::VectorXcd best_feasible, best_fallback;
    double best_feasible_obj = -1.0, best_fallback_pen = -std::numeric_limits<double>::infinity();
    int n_feasible = 0;
    for (int i = 0; i < l_gr; ++i) {
        Eigen::VectorXcd r(n);
        for (int k = 0; k < n; ++k) r[k] = complex_gaussian(rng, 1.0);
        Eigen::VectorXcd w = shaper * r;
        const double nrm = w.norm();
        if (nrm < 1e-12) continue;
        w /= nrm;
        const double obj = q.objective(w);
        const double bal = q.balance(w);
        if (bal >= 0.0 && bal <= t.epsilon1) {
            ++n_feasible;
            if (obj > best_feasible_obj) {
                best_feasible_obj = obj;
                best_feasible = w;
            }
        }
        const double violation = std::abs(bal - std::clamp(bal, 0.0, t.epsilon1));
        const double pen = obj - mu_pen * violation;
        if (pen > best_fallback_pen) {
            best_fallback_pen = pen;
            best_fallback = w;
        }
    }
    diag.n_feasible_samples = n_feasible;

    Eigen::VectorXcd w = n_feasible > 0 ? best_feasible : best_fallback;
    if (w.size() == 0) throw std::runtime_error("solve_sdr: all randomization samples degenerate");
    diag.chosen_objective = q.objective(w);
    return {std::move(w), diag};
}

PsoSolution solve_mbs_pso(const QcqpProblem& q, const PsoConfig& cfg, Rng& rng) {
    if (cfg.n_particles < 1 || cfg.n_iters < 1 || !(cfg.v_min < cfg.v_max))
        throw std::invalid_argument("solve_mbs_pso: bad configuration");
    const TradeoffConfig& t = q.weights;
    const int n = static_cast<int>(q.c1.size());
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    const auto compose = [&](const Eigen::Vector3d& psi) {
        Eigen::VectorXcd w = (psi[0] * q.c1 + psi[1] * q.c2 + psi[2] * q.c3) / sqrt_n;
        return w;
    };
    const double mu = 2.0 * t.rho_tradeoff;
    // Fitness: objective - mu*(|F2 - kappa*F3| - epsilon1). The hinge
    // variant only penalizes actual violation of the balance band.
    const auto fitness = [&](const Eigen::Vector3d& psi) {
        Eigen::VectorXcd w = compose(psi);
        const double nrm = w.norm();
        if (nrm < 1e-12) return -std::numeric_limits<double>::infinity();
        w /= nrm;
        const double g = q.balance(w);
        const double raw =
            cfg.hinge_penalty ? std::max(0.0, std::abs(g) - t.epsilon1) : std::abs(g) - t.epsilon1;
        return q.objective(w) - mu * raw;
    };

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> uv(cfg.v_min, cfg.v_max);

    std::vector<Eigen::Vector3d> pos(cfg.n_particles), vel(cfg.n_particles),
        personal_best(cfg.n_particles);
    std::vector<double> personal_fit(cfg.n_particles);
    Eigen::Vector3d global_best = Eigen::Vector3d::Zero();
    double global_fit = -std::numeric_limits<double>::infinity();

    for (int k = 0; k < cfg.n_particles; ++k) {
        pos[k] = {u01(rng), u01(rng), u01(rng)};
        vel[k] = {uv(rng), uv(rng), uv(rng)};
        personal_best[k] = pos[k];
        personal_fit[k] = fitness(pos[k]);
        if (personal_fit[k] > global_fit) {
            global_fit = personal_fit[k];
            global_best = pos[k];
        }
    }

    PsoSolution sol;
    sol.best_fitness_trace.reserve(cfg.n_iters + 1);
    sol.best_fitness_trace.push_back(global_fit);

    for (int it = 0; it < cfg.n_iters; ++it) {
        for (int k = 0; k < cfg.n_particles; ++k) {
            for (int j = 0; j < 3; ++j) {
                const double v = cfg.c1 * vel[k][j] +
                                 cfg.c2 * u01(rng) * (global_best[j] - pos[k][j]) +
                                 cfg.c3 * u01(rng) * (personal_best[k][j] - pos[k][j]);
                vel[k][j] = std::clamp(v, cfg.v_min, cfg.v_max);
                pos[k][j] = std::clamp(pos[k][j] + vel[k][j], 0.0, 1.0);
            }
            const double f = fitness(pos[k]);
            if (f > personal_fit[k]) {
                personal_fit[k] = f;
                personal_best[k] = pos[k];
            }
            if (f > global_fit) {
                global_fit = f;
                global_best = pos[k];
            }
        }
        sol.best_fitness_trace.push_back(global_fit);
    }

    Eigen::VectorXcd w = compose(global_best);
    const double nrm = w.norm();
    if (nrm < 1e-12 || !std::isfinite(global_fit))
        throw std::runtime_error("solve_mbs_pso: degenerate weights");
    sol.w_ue = w / nrm;
    sol.weights = global_best;
    return sol;
}

BeamformerSet oracle_baseline(const Vec3& true_ue_pos, const SceneGeometry& geometry) {
    LocationEstimate exact;
    exact.position = true_ue_pos;
    auto [w_bs, xi] = closed_form_bs_ris(exact, geometry);
    const double u_aod = ue_effective_aod(true_ue_pos, geometry.ris_pos);
    Eigen::VectorXcd w_ue = ula_steering(u_aod, geometry.ue.n_elements);
    w_ue /= std::sqrt(static_cast<double>(geometry.ue.n_elements));
    return {std::move(w_bs), std::move(xi), std::move(w_ue)};
}

}  // namespace rissim
