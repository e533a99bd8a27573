#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <numbers>
#include <string>
#include <vector>

#include "photonic/fock.hpp"

/// \file elements.hpp
/// Library of linear-optical elements as mode-coupling matrices. Lossy
/// elements are embedded as isometries with auxiliary loss modes that the
/// herald machinery later pins to zero photons.
///
/// Phase conventions (also documented in the README circuit-format section):
///  - Beam splitters use the symmetric convention: transmission amplitude
///    sqrt(T), reflection amplitude i*sqrt(1-T), identical for both ports.
///  - The PBS transmits H unchanged and reflects V with amplitude i.
///  - Wave plates use real Jones matrices; hwp(a) = [[cos2a, sin2a],
///    [sin2a, -cos2a]] with the angle measured from the horizontal axis.
///  - qwp(a) = R(a) diag(1, i) R(-a), stated up to a global phase.
/// Heralded gate constructions compensate residual convention phases with
/// explicit trim plates; see gates.hpp and router.hpp.

namespace photonic {

inline constexpr double kElementTol = 1e-12;

/// A linear map on a subset of modes: each input-mode creation operator is
/// replaced by the matrix image over the output modes. Sub-unitary maps must
/// list loss modes so that the embedded matrix is an isometry.
struct OpticalElement {
    std::string name;
    std::vector<ModeIndex> input_modes;
    std::vector<ModeIndex> output_modes;
    Eigen::MatrixXcd matrix; // rows: output modes, cols: input modes
    std::vector<ModeIndex> loss_modes;

    OpticalElement(std::string nm, std::vector<ModeIndex> in, std::vector<ModeIndex> out,
                   Eigen::MatrixXcd m, std::vector<ModeIndex> loss = {})
        : name(std::move(nm)),
          input_modes(std::move(in)),
          output_modes(std::move(out)),
          matrix(std::move(m)),
          loss_modes(std::move(loss)) {
        if (matrix.rows() != Eigen::Index(output_modes.size()) ||
            matrix.cols() != Eigen::Index(input_modes.size()))
            throw std::invalid_argument("OpticalElement " + name + ": matrix shape mismatch");
        validate();
    }

    void validate() const {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix);
        if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 1.0 + kElementTol)
            throw std::invalid_argument("OpticalElement " + name + ": unphysical gain (singular value > 1)");
        // Columns must stay orthonormal: unitary when lossless, isometry with
        // the loss modes included.
        Eigen::MatrixXcd g = matrix.adjoint() * matrix;
        double dev = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
        if (dev > kElementTol)
            throw std::invalid_argument("OpticalElement " + name + ": not an isometry (deviation " +
                                        std::to_string(dev) + ")");
    }
};

namespace jones {
inline Eigen::Matrix2cd half_wave(double angle) {
    double c = std::cos(2 * angle), s = std::sin(2 * angle);
    Eigen::Matrix2cd m;
    m << c, s, s, -c;
    return m;
}

inline Eigen::Matrix2cd quarter_wave(double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    Eigen::Matrix2cd r, d;
    r << c, -s, s, c;
    d << cplx{1, 0}, 0, 0, cplx{0, 1};
    return r * d * r.transpose();
}
} // namespace jones

/// Half-wave plate on one spatial path, rotated by `angle` from horizontal.
inline OpticalElement hwp(double angle, const std::string& path) {
    std::vector<ModeIndex> m{mode(path, Pol::H), mode(path, Pol::V)};
    return OpticalElement("hwp(" + path + ")", m, m, jones::half_wave(angle));
}

/// Quarter-wave plate on one spatial path.
inline OpticalElement qwp(double angle, const std::string& path) {
    std::vector<ModeIndex> m{mode(path, Pol::H), mode(path, Pol::V)};
    return OpticalElement("qwp(" + path + ")", m, m, jones::quarter_wave(angle));
}

/// Polarizing beam splitter: H transmits, V swaps paths with reflection
/// amplitude i (equal for both directions).
inline OpticalElement pbs(const std::string& path_a, const std::string& path_b) {
    std::vector<ModeIndex> m{mode(path_a, Pol::H), mode(path_a, Pol::V),
                             mode(path_b, Pol::H), mode(path_b, Pol::V)};
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    const cplx i{0, 1};
    u(0, 0) = 1; // Ha -> Ha
    u(2, 2) = 1; // Hb -> Hb
    u(3, 1) = i; // Va -> Vb
    u(1, 3) = i; // Vb -> Va
    return OpticalElement("pbs(" + path_a + "," + path_b + ")", m, m, u);
}

/// Polarization-dependent beam splitter with intensity transmissivities
/// T_H, T_V, coupling two spatial paths per polarization in the symmetric
/// convention. pdbs(1, 1, ...) is the identity; pdbs(T, T, ...) is an
/// ordinary polarization-independent splitter.
inline OpticalElement pdbs(double t_h, double t_v, const std::string& path_a,
                           const std::string& path_b) {
    if (t_h < 0 || t_h > 1 || t_v < 0 || t_v > 1)
        throw std::invalid_argument("pdbs: transmissivity outside [0,1]");
    std::vector<ModeIndex> m{mode(path_a, Pol::H), mode(path_a, Pol::V),
                             mode(path_b, Pol::H), mode(path_b, Pol::V)};
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    auto fill = [&u](int a, int b, double t) {
        const cplx r = cplx{0, 1} * std::sqrt(1 - t);
        u(a, a) = std::sqrt(t);
        u(b, b) = std::sqrt(t);
        u(b, a) = r;
        u(a, b) = r;
    };
    fill(0, 2, t_h); // H modes
    fill(1, 3, t_v); // V modes
    return OpticalElement("pdbs(" + path_a + "," + path_b + ")", m, m, u);
}

/// Neutral-density filter of transmissivity T on the listed modes. One fresh
/// loss mode is allocated per filtered mode; herald rules pin them to zero.
inline OpticalElement ndf(ModeRegistry& reg, double t, const std::vector<ModeIndex>& modes) {
    if (t < 0 || t > 1) throw std::invalid_argument("ndf: transmissivity outside [0,1]");
    std::vector<ModeIndex> out = modes;
    std::vector<ModeIndex> loss;
    loss.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!reg.has(modes[i])) throw std::invalid_argument("ndf: unknown mode " + modes[i].str());
        loss.push_back(reg.add_loss_mode());
        out.push_back(loss.back());
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * modes.size(), modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        m(i, i) = std::sqrt(t);
        m(modes.size() + i, i) = cplx{0, 1} * std::sqrt(1 - t);
    }
    return OpticalElement("ndf", modes, out, m, loss);
}

/// Multiplies the creation operators of the listed modes by exp(i*phi).
inline OpticalElement phase_shift(double phi, const std::vector<ModeIndex>& modes) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(modes.size(), modes.size()) *
                         std::exp(cplx{0, 1} * phi);
    return OpticalElement("phase", modes, modes, m);
}

inline OpticalElement phase_shift(double phi, const ModeIndex& m) {
    return phase_shift(phi, std::vector<ModeIndex>{m});
}

/// Polarization swap H <-> V on one path (half-wave plate at 45 degrees).
inline OpticalElement pol_swap(const std::string& path) {
    return hwp(std::numbers::pi / 4, path);
}

} // namespace photonic
