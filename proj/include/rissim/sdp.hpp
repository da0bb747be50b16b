#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace rissim {

/// One linear constraint lower <= tr(a * W) <= upper. Either side may be
/// infinite; lower must be strictly below upper.
struct SdpConstraint {
    Eigen::MatrixXcd a;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
};

struct SdpOptions {
    /// Restrict W to the joint column span of the objective and constraint
    /// matrices (plus one trace-parking dimension). Lossless: anything
    /// orthogonal to that span contributes zero to the objective and every
    /// constraint while consuming trace.
    bool reduce = true;
    double tol = 1e-9;
    int max_iters = 120;
};

struct SdpResult {
    Eigen::MatrixXcd w;
    double objective = 0.0;
    int iterations = 0;
};

/// Maximize tr(objective * W) subject to the linear constraints,
/// tr(W) = trace and W >= 0 (Hermitian PSD), via a primal-dual
/// interior-point iteration. Dimension is expected to be small (<= 32).
/// Throws if the constraints are infeasible or the iteration stalls.
SdpResult sdp_solve_small(const Eigen::MatrixXcd& objective,
                          const std::vector<SdpConstraint>& constraints, double trace,
                          const SdpOptions& options = {});

}  // namespace rissim
