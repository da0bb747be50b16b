#include "rissim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace rissim {

namespace {

// effective_angles_between assumes half-wavelength spacing; other spacings
// rescale the phase progression by spacing/0.5.
EffectiveAnglePair scaled_angles(const Vec3& from, const Vec3& to, double spacing) {
    EffectiveAnglePair a = effective_angles_between(from, to);
    const double s = spacing / 0.5;
    return {a.u * s, a.v * s};
}

}  // namespace

double linear_path_gain(double d, double exponent, const PathlossModel& model) {
    if (!(d >= 1.0))
        throw std::invalid_argument("linear_path_gain: inside reference distance");
    return std::pow(10.0, -model.pl0_db / 10.0) * std::pow(d, -exponent);
}

ComplexGain draw_gain(double d, double exponent, const PathlossModel& model, Rng& rng) {
    const double magnitude = std::sqrt(linear_path_gain(d, exponent, model));
    return {magnitude * random_phase(rng)};
}

LosChannel build_u2r(const UlaGeometry& ue_geom, const UraGeometry& sub_geom,
                     const Vec3& ue_pos, const Vec3& sub_pos, const ComplexGain& gain) {
    const EffectiveAnglePair rx = scaled_angles(sub_pos, ue_pos, sub_geom.spacing);
    const EffectiveAnglePair tx = scaled_angles(ue_pos, sub_pos, ue_geom.spacing);
    const Eigen::VectorXcd b = ura_steering(rx.u, rx.v, sub_geom);
    const Eigen::VectorXcd c = ula_steering(tx.u, ue_geom.n_elements);
    return {gain.value * (b * c.adjoint()), gain, rx, tx};
}

LosChannel build_r2b(const UlaGeometry& bs_geom, const UraGeometry& ris_geom,
                     const Vec3& bs_pos, const Vec3& ris_pos, const ComplexGain& gain) {
    const EffectiveAnglePair rx = scaled_angles(bs_pos, ris_pos, bs_geom.spacing);
    const EffectiveAnglePair tx = scaled_angles(ris_pos, bs_pos, ris_geom.spacing);
    const Eigen::VectorXcd a = ula_steering(rx.u, bs_geom.n_elements);
    const Eigen::VectorXcd b = ura_steering(tx.u, tx.v, ris_geom);
    return {gain.value * (a * b.adjoint()), gain, rx, tx};
}

LosChannel build_r2r(const UraGeometry& ris_geom, const UraGeometry& sub_geom,
                     const Vec3& ris_pos, const Vec3& sub_pos, const ComplexGain& gain) {
    const EffectiveAnglePair rx = scaled_angles(sub_pos, ris_pos, sub_geom.spacing);
    const EffectiveAnglePair tx = scaled_angles(ris_pos, sub_pos, ris_geom.spacing);
    const Eigen::VectorXcd br = ura_steering(rx.u, rx.v, sub_geom);
    const Eigen::VectorXcd bt = ura_steering(tx.u, tx.v, ris_geom);
    return {gain.value * (br * bt.adjoint()), gain, rx, tx};
}

}  // namespace rissim
