#include "rissim/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace rissim {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;

double inner(const Mat& a, const Mat& b) { return (a * b).trace().real(); }

Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

// Largest alpha in (0, 1] with P + alpha*dP > 0, via the smallest
// eigenvalue of L^{-1} dP L^{-H}.
double max_step(const Mat& p, const Mat& dp) {
    Eigen::LLT<Mat> llt(p);
    if (llt.info() != Eigen::Success) return 0.0;
    const Mat l = llt.matrixL();
    Mat t = l.triangularView<Eigen::Lower>().solve(dp);
    t = l.triangularView<Eigen::Lower>().solve(t.adjoint()).adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(t), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return 1.0;
    return std::min(1.0, -1.0 / lmin);
}

// Equality-form problem: min <c, X> s.t. <a_j, X> = b_j, X >= 0.
struct StandardForm {
    Mat c;
    std::vector<Mat> a;
    Vec b;
};

struct IpmSolution {
    Mat x;
    int iterations = 0;
};

IpmSolution solve_standard(const StandardForm& sf, double tol, int max_iters) {
    const int n = static_cast<int>(sf.c.rows());
    const int p = static_cast<int>(sf.a.size());

    const double scale0 = std::max({1.0, sf.b.cwiseAbs().maxCoeff()});
    Mat x = scale0 * Mat::Identity(n, n);
    Mat s = (1.0 + sf.c.norm()) * Mat::Identity(n, n);
    Vec y = Vec::Zero(p);

    const double bnorm = 1.0 + sf.b.norm();
    const double cnorm = 1.0 + sf.c.norm();

    const auto apply_a = [&](const Mat& m) {
        Vec out(p);
        for (int j = 0; j < p; ++j) out[j] = inner(sf.a[j], m);
        return out;
    };
    const auto apply_at = [&](const Vec& v) {
        Mat out = Mat::Zero(n, n);
        for (int j = 0; j < p; ++j) out += v[j] * sf.a[j];
        return out;
    };

    double prim_res = 1.0, gap = 1.0;
    for (int it = 0; it < max_iters; ++it) {
        const Vec rp = sf.b - apply_a(x);
        const Mat rd = sf.c - apply_at(y) - s;
        gap = inner(x, s);
        const double mu = gap / n;
        prim_res = rp.norm() / bnorm;
        const double dual_res = rd.norm() / cnorm;
        const double obj = inner(sf.c, x);
        if (gap / (1.0 + std::abs(obj)) < tol && prim_res < tol && dual_res < tol)
            return {x, it};

        Eigen::LLT<Mat> slt(s);
        if (slt.info() != Eigen::Success)
            throw std::runtime_error("sdp_solve_small: dual iterate lost positive definiteness");
        const Mat sinv = slt.solve(Mat::Identity(n, n));

        // HKM direction: schur(j,k) = Re tr(a_j X a_k S^{-1}).
        std::vector<Mat> xas(p);
        for (int k = 0; k < p; ++k) xas[k] = x * sf.a[k] * sinv;
        Eigen::MatrixXd schur(p, p);
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k) schur(j, k) = (sf.a[j] * xas[k]).trace().real();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(schur);
        const Mat x_rd_sinv = x * rd * sinv;

        const auto direction = [&](double sigma, const Mat& corr, Mat& dx, Vec& dy, Mat& ds) {
            Vec rhs(p);
            for (int j = 0; j < p; ++j) {
                rhs[j] = rp[j] - sigma * mu * inner(sf.a[j], sinv) + inner(sf.a[j], x) +
                         (sf.a[j] * corr * sinv).trace().real() +
                         (sf.a[j] * x_rd_sinv).trace().real();
            }
            dy = lu.solve(rhs);
            ds = rd - apply_at(dy);
            const Mat dx_ns = sigma * mu * sinv - x - corr * sinv - x * ds * sinv;
            dx = hermitize(dx_ns);
        };

        // Mehrotra predictor-corrector.
        Mat dxa, dsa;
        Vec dya;
        direction(0.0, Mat::Zero(n, n), dxa, dya, dsa);
        const double apa = 0.98 * max_step(x, dxa);
        const double ada = 0.98 * max_step(s, dsa);
        const double gap_aff = inner(x + apa * dxa, s + ada * dsa);
        double sigma = std::pow(std::max(gap_aff, 0.0) / gap, 3.0);
        sigma = std::clamp(sigma, 1e-6, 0.99);

        Mat dx, ds;
        Vec dy;
        direction(sigma, dxa * dsa, dx, dy, ds);
        double ap = 0.98 * max_step(x, dx);
        double ad = 0.98 * max_step(s, ds);
        if (ap <= 1e-12 || ad <= 1e-12)
            throw std::runtime_error("sdp_solve_small: step length collapsed");

        x = hermitize(x + ap * dx);
        y += ad * dy;
        s = hermitize(s + ad * ds);
        if (!x.allFinite() || !s.allFinite())
            throw std::runtime_error("sdp_solve_small: iterates diverged (likely infeasible)");
    }

    if (!(prim_res <= 1e3 * tol))
        throw std::runtime_error("sdp_solve_small: infeasible (primal residual did not vanish)");
    if (!(gap <= 1e4 * tol * (1.0 + std::abs(inner(sf.c, x)))))
        throw std::runtime_error("sdp_solve_small: not converged");
    return {x, max_iters};
}

// Orthonormal basis of the joint column span of the given Hermitian
// matrices.
Mat joint_span(const std::vector<const Mat*>& mats, int n) {
    Mat stacked(n, static_cast<Eigen::Index>(mats.size()) * n);
    Eigen::Index col = 0;
    for (const Mat* m : mats) {
        stacked.block(0, col, n, n) = *m;
        col += n;
    }
    Eigen::ColPivHouseholderQR<Mat> qr(stacked);
    qr.setThreshold(1e-10);
    const int r = static_cast<int>(qr.rank());
    if (r == 0) return Mat::Zero(n, 0);
    Mat q = qr.householderQ() * Mat::Identity(n, r);
    return q;
}

StandardForm build_standard(const Mat& objective, const std::vector<SdpConstraint>& constraints,
                            double trace, int park_dims) {
    const int n = static_cast<int>(objective.rows());
    int n_slack = 0;
    for (const SdpConstraint& c : constraints) {
        if (std::isfinite(c.lower)) ++n_slack;
        if (std::isfinite(c.upper)) ++n_slack;
    }
    const int nt = n + park_dims + n_slack;

    StandardForm sf;
    sf.c = Mat::Zero(nt, nt);
    sf.c.topLeftCorner(n, n) = -objective;  // maximize -> minimize

    std::vector<Mat> as;
    std::vector<double> bs;

    // tr(W) = trace, including any parking dimensions.
    Mat tr_a = Mat::Zero(nt, nt);
    tr_a.topLeftCorner(n + park_dims, n + park_dims) =
        Mat::Identity(n + park_dims, n + park_dims);
    as.push_back(tr_a);
    bs.push_back(trace);

    int slack = n + park_dims;
    for (const SdpConstraint& c : constraints) {
        if (c.a.rows() != n || c.a.cols() != n)
            throw std::invalid_argument("sdp_solve_small: constraint dimension mismatch");
        if (!(c.lower < c.upper))
            throw std::invalid_argument("sdp_solve_small: constraint bounds must satisfy lower < upper");
        if (std::isfinite(c.lower)) {
            Mat a = Mat::Zero(nt, nt);
            a.topLeftCorner(n, n) = hermitize(c.a);
            a(slack, slack) = -1.0;
            as.push_back(a);
            bs.push_back(c.lower);
            ++slack;
        }
        if (std::isfinite(c.upper)) {
            Mat a = Mat::Zero(nt, nt);
            a.topLeftCorner(n, n) = hermitize(c.a);
            a(slack, slack) = 1.0;
            as.push_back(a);
            bs.push_back(c.upper);
            ++slack;
        }
    }

    sf.a = std::move(as);
    sf.b = Eigen::Map<Vec>(bs.data(), static_cast<Eigen::Index>(bs.size()));
    return sf;
}

}  // namespace

SdpResult sdp_solve_small(const Mat& objective, const std::vector<SdpConstraint>& constraints,
                          double trace, const SdpOptions& options) {
    const int n = static_cast<int>(objective.rows());
    if (n < 1 || objective.cols() != n)
        throw std::invalid_argument("sdp_solve_small: objective must be square");
    if (n > 32) throw std::invalid_argument("sdp_solve_small: dimension exceeds 32");
    if (!(trace > 0.0)) throw std::invalid_argument("sdp_solve_small: trace must be positive");
    for (const SdpConstraint& c : constraints) {
        if (c.a.rows() != n || c.a.cols() != n)
            throw std::invalid_argument("sdp_solve_small: constraint dimension mismatch");
        if (!(c.lower < c.upper))
            throw std::invalid_argument(
                "sdp_solve_small: constraint bounds must satisfy lower < upper");
    }

    const Mat obj = hermitize(objective);

    if (!options.reduce) {
        const StandardForm sf = build_standard(obj, constraints, trace, 0);
        const IpmSolution sol = solve_standard(sf, options.tol, options.max_iters);
        SdpResult res;
        res.w = hermitize(sol.x.topLeftCorner(n, n));
        res.objective = inner(obj, res.w);
        res.iterations = sol.iterations;
        return res;
    }

    std::vector<const Mat*> mats{&obj};
    std::vector<Mat> herm_cons;
    herm_cons.reserve(constraints.size());
    for (const SdpConstraint& c : constraints) herm_cons.push_back(hermitize(c.a));
    for (const Mat& c : herm_cons) mats.push_back(&c);
    const Mat q = joint_span(mats, n);
    const int r = static_cast<int>(q.cols());

    if (r >= n || r == 0) {
        SdpOptions full = options;
        full.reduce = false;
        return sdp_solve_small(obj, constraints, trace, full);
    }

    // Reduced problem with one scalar parking dimension absorbing trace
    // mass that would otherwise live in the orthogonal complement.
    const Mat obj_red = q.adjoint() * obj * q;
    std::vector<SdpConstraint> cons_red;
    cons_red.reserve(constraints.size());
    for (size_t k = 0; k < constraints.size(); ++k)
        cons_red.push_back({q.adjoint() * herm_cons[k] * q, constraints[k].lower,
                            constraints[k].upper});

    const StandardForm sf = build_standard(obj_red, cons_red, trace, 1);
    const IpmSolution sol = solve_standard(sf, options.tol, options.max_iters);

    const Mat w_red = sol.x.topLeftCorner(r, r);
    const double park = sol.x(r, r).real();
    SdpResult res;
    res.w = hermitize(q * w_red * q.adjoint() +
                      park / static_cast<double>(n - r) *
                          (Mat::Identity(n, n) - q * q.adjoint()));
    res.objective = inner(obj, res.w);
    res.iterations = sol.iterations;
    return res;
}

}  // namespace rissim
