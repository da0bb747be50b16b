#include <doctest.h>

#include <random>

#include "rissim/rng.hpp"
#include "rissim/sdp.hpp"

using namespace rissim;
using Mat = Eigen::MatrixXcd;

namespace {

Mat random_hermitian(int n, Rng& rng) {
    Mat a(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = complex_gaussian(rng, 1.0);
    return 0.5 * (a + a.adjoint());
}

// Projection of a Hermitian matrix onto {W >= 0, tr W = 1}: eigenvalues go
// through a simplex projection.
Mat project_spectraplex(const Mat& w) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (w + w.adjoint()));
    Eigen::VectorXd lam = es.eigenvalues();
    // simplex projection (Held et al. thresholding)
    Eigen::VectorXd sorted = lam;
    std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<double>());
    double cum = 0.0, theta = 0.0;
    int k = 0;
    for (int i = 0; i < sorted.size(); ++i) {
        cum += sorted[i];
        const double t = (cum - 1.0) / (i + 1);
        if (t < sorted[i]) {
            theta = t;
            k = i + 1;
        }
    }
    (void)k;
    const Eigen::VectorXd proj = (lam.array() - theta).cwiseMax(0.0);
    return es.eigenvectors() * proj.asDiagonal() * es.eigenvectors().adjoint();
}

// Independent first-order oracle: augmented-Lagrangian with projected
// gradient ascent (backtracking line search) on the spectraplex. The AL
// objective is concave for fixed multipliers, so the inner loop converges.
double al_pg_oracle(const Mat& a0, const Mat& a1, double lo, double hi) {
    const int n = static_cast<int>(a0.rows());
    Mat w = Mat::Identity(n, n) / double(n);
    double lam_lo = 0.0, lam_hi = 0.0;
    double rho = 10.0;

    const auto al_value = [&](const Mat& x) {
        const double g = (a1 * x).trace().real();
        const double hi_t = std::max(0.0, lam_hi + rho * (g - hi));
        const double lo_t = std::max(0.0, lam_lo + rho * (lo - g));
        return (a0 * x).trace().real() -
               (hi_t * hi_t - lam_hi * lam_hi) / (2.0 * rho) -
               (lo_t * lo_t - lam_lo * lam_lo) / (2.0 * rho);
    };
    const auto al_grad = [&](const Mat& x) {
        const double g = (a1 * x).trace().real();
        double coef = 0.0;
        coef += std::max(0.0, lam_hi + rho * (g - hi));
        coef -= std::max(0.0, lam_lo + rho * (lo - g));
        return Mat(a0 - coef * a1);
    };

    for (int outer = 0; outer < 60; ++outer) {
        double step = 1.0 / std::max(1.0, rho * a1.squaredNorm());
        for (int inner = 0; inner < 3000; ++inner) {
            const double f0 = al_value(w);
            const Mat grad = al_grad(w);
            // backtracking on the projected step
            Mat w_next = w;
            double trial = step * 4.0;
            for (int bt = 0; bt < 40; ++bt) {
                w_next = project_spectraplex(w + trial * grad);
                if (al_value(w_next) >= f0 - 1e-18) break;
                trial *= 0.5;
            }
            step = trial;
            const double move = (w_next - w).norm();
            w = w_next;
            if (move < 1e-12 && inner > 10) break;
        }
        const double g = (a1 * w).trace().real();
        lam_hi = std::max(0.0, lam_hi + rho * (g - hi));
        lam_lo = std::max(0.0, lam_lo + rho * (lo - g));
        rho = std::min(rho * 2.0, 1e8);
    }
    return (a0 * w).trace().real();
}

}  // namespace

TEST_SUITE_BEGIN("sdp");

TEST_CASE("unconstrained maximum picks the top eigenvector") {
    Mat a0 = Mat::Zero(2, 2);
    a0(0, 0) = 2.0;
    a0(1, 1) = 1.0;
    const SdpResult res = sdp_solve_small(a0, {}, 1.0);
    CHECK(res.objective == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(res.w(0, 0)) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(res.w(1, 1)) == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("identity objective is flat with value one") {
    const Mat a0 = Mat::Identity(3, 3);
    const SdpResult res = sdp_solve_small(a0, {}, 1.0);
    CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(res.w.trace().real() == doctest::Approx(1.0).epsilon(1e-7));
    Eigen::SelfAdjointEigenSolver<Mat> es(res.w, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("random 3x3 instances match an augmented-Lagrangian oracle") {
    Rng rng(2024);
    for (int i = 0; i < 50; ++i) {
        const Mat a0 = random_hermitian(3, rng);
        const Mat a1 = random_hermitian(3, rng);
        // feasible by construction: bracket the value at a random point
        const Mat w_feas = project_spectraplex(random_hermitian(3, rng));
        const double mid = (a1 * w_feas).trace().real();
        const double lo = mid - 0.1, hi = mid + 0.1;

        const SdpResult res = sdp_solve_small(a0, {{a1, lo, hi}}, 1.0);
        const double oracle = al_pg_oracle(a0, a1, lo, hi);
        CHECK(res.objective ==
              doctest::Approx(oracle).epsilon(1e-5 * std::max(1.0, std::abs(oracle))));
        // solution actually satisfies the constraint
        const double g = (a1 * res.w).trace().real();
        CHECK(g > lo - 1e-6);
        CHECK(g < hi + 1e-6);
    }
}

TEST_CASE("contradictory constraints raise") {
    const Mat a0 = Mat::Identity(3, 3);
    // tr(W) = 1 makes tr(I W) in [5, 6] impossible
    CHECK_THROWS(sdp_solve_small(a0, {{Mat::Identity(3, 3), 5.0, 6.0}}, 1.0));
}

TEST_CASE("argument validation") {
    const Mat a0 = Mat::Identity(3, 3);
    CHECK_THROWS(sdp_solve_small(a0, {}, 0.0));                       // trace must be positive
    CHECK_THROWS(sdp_solve_small(Mat::Identity(40, 40), {}, 1.0));    // dimension cap
    CHECK_THROWS(sdp_solve_small(a0, {{Mat::Identity(2, 2), 0, 1}}, 1.0));  // dim mismatch
    CHECK_THROWS(sdp_solve_small(a0, {{a0, 2.0, 1.0}}, 1.0));         // lower >= upper
}

TEST_CASE("span reduction and full-space solves agree") {
    Rng rng(5150);
    for (int i = 0; i < 10; ++i) {
        // low-rank data embedded in a larger space
        const int n = 8;
        Eigen::VectorXcd c1(n), c2(n);
        for (int k = 0; k < n; ++k) {
            c1[k] = complex_gaussian(rng, 1.0);
            c2[k] = complex_gaussian(rng, 1.0);
        }
        const Mat a0 = c1 * c1.adjoint();
        const Mat a1 = c2 * c2.adjoint();
        SdpOptions reduced, full;
        full.reduce = false;
        const SdpResult r1 = sdp_solve_small(a0, {{a1, 0.0, 0.5}}, 1.0, reduced);
        const SdpResult r2 = sdp_solve_small(a0, {{a1, 0.0, 0.5}}, 1.0, full);
        CHECK(r1.objective ==
              doctest::Approx(r2.objective).epsilon(1e-7 * std::max(1.0, std::abs(r2.objective))));
    }
}

TEST_SUITE_END();
