#include "rissim/signal.hpp"

#include <stdexcept>

namespace rissim {

namespace {

void check_bf_dims(const BlockChannels& ch, const BeamformerSet& bf) {
    if (bf.w_bs.size() != ch.r2b.matrix.rows() || bf.xi.size() != ch.r2b.matrix.cols() ||
        bf.w_ue.size() != ch.u2r.at(0).matrix.cols())
        throw std::invalid_argument("beamformer dimensions do not match channels");
}

// w_bs^H H_r2b diag(xi) H_u2r1 w_ue
cd effective_scalar(const BlockChannels& ch, const BeamformerSet& bf) {
    const Eigen::VectorXcd through = bf.xi.cwiseProduct(ch.u2r[0].matrix * bf.w_ue);
    return bf.w_bs.dot(ch.r2b.matrix * through);  // Eigen dot conjugates the left side
}

}  // namespace

SnapshotBatch synthesize_sensing_snapshots(const BlockChannels& channels, int sub_index,
                                           const BeamformerSet& bf, double rho,
                                           double sigma0_sq, int n_slots, int phase_index,
                                           Rng& rng) {
    if (sub_index < 0 || sub_index >= static_cast<int>(channels.r2r.size()))
        throw std::invalid_argument("synthesize_sensing_snapshots: bad sub-surface index");
    if (n_slots < 1) throw std::invalid_argument("synthesize_sensing_snapshots: n_slots < 1");
    check_bf_dims(channels, bf);

    const LosChannel& direct = channels.u2r.at(sub_index + 1);
    const LosChannel& reflect = channels.r2r.at(sub_index);
    if (direct.matrix.rows() != reflect.matrix.rows())
        throw std::invalid_argument("synthesize_sensing_snapshots: sub-surface size mismatch");

    // Per-slot signal is a fixed spatial signature scaled by s(t).
    const Eigen::VectorXcd through = bf.xi.cwiseProduct(channels.u2r[0].matrix * bf.w_ue);
    const Eigen::VectorXcd signature =
        std::sqrt(rho) * (direct.matrix * bf.w_ue + reflect.matrix * through);

    const int m = static_cast<int>(signature.size());
    SnapshotBatch batch{Eigen::MatrixXcd(m, n_slots), phase_index, sigma0_sq};
    for (int t = 0; t < n_slots; ++t) {
        const cd s = random_phase(rng);
        for (int k = 0; k < m; ++k)
            batch.samples(k, t) = signature[k] * s + complex_gaussian(rng, sigma0_sq);
    }
    return batch;
}

Eigen::VectorXcd synthesize_bs_signal(const BlockChannels& channels, const BeamformerSet& bf,
                                      double rho, double sigma0_sq, int n_slots, Rng& rng) {
    if (n_slots < 1) throw std::invalid_argument("synthesize_bs_signal: n_slots < 1");
    check_bf_dims(channels, bf);

    const cd g = std::sqrt(rho) * effective_scalar(channels, bf);
    Eigen::VectorXcd y(n_slots);
    for (int t = 0; t < n_slots; ++t) {
        const cd s = random_phase(rng);
        // The combiner has unit norm, so combined noise keeps variance sigma0_sq.
        Eigen::VectorXcd n(bf.w_bs.size());
        for (int k = 0; k < n.size(); ++k) n[k] = complex_gaussian(rng, sigma0_sq);
        y[t] = g * s + bf.w_bs.dot(n);
    }
    return y;
}

EcsiEstimate estimate_ecsi(const BlockChannels& channels, const Eigen::VectorXcd& xi,
                           double rho, double sigma0_sq, int delta_tau1, Rng& rng,
                           EcsiMethod method) {
    const Eigen::MatrixXcd h_true =
        channels.r2b.matrix * xi.asDiagonal() * channels.u2r[0].matrix;
    if (method == EcsiMethod::perfect) return {h_true, method};

    const int n_ue = static_cast<int>(h_true.cols());
    if (delta_tau1 < n_ue)
        throw std::invalid_argument("estimate_ecsi: insufficient pilots");
    const int reps = delta_tau1 / n_ue;

    // Identity pilots: slot (r, i) sends e_i, so column i is observed
    // directly and averaged over repetitions.
    Eigen::MatrixXcd h_hat = Eigen::MatrixXcd::Zero(h_true.rows(), n_ue);
    for (int r = 0; r < reps; ++r) {
        for (int i = 0; i < n_ue; ++i) {
            for (int k = 0; k < h_true.rows(); ++k)
                h_hat(k, i) += std::sqrt(rho) * h_true(k, i) + complex_gaussian(rng, sigma0_sq);
        }
    }
    h_hat /= std::sqrt(rho) * static_cast<double>(reps);
    return {h_hat, method};
}

double snr_com(const BlockChannels& channels, const BeamformerSet& bf, double rho,
               double sigma0_sq) {
    check_bf_dims(channels, bf);
    return rho / sigma0_sq * std::norm(effective_scalar(channels, bf));
}

SensingSnr snr_sen(const BlockChannels& channels, const BeamformerSet& bf, double rho,
                   double sigma0_sq) {
    SensingSnr s;
    s.sub2 = rho / sigma0_sq * (channels.u2r.at(1).matrix * bf.w_ue).squaredNorm();
    s.sub3 = rho / sigma0_sq * (channels.u2r.at(2).matrix * bf.w_ue).squaredNorm();
    s.total = s.sub2 + s.sub3;
    return s;
}

}  // namespace rissim
