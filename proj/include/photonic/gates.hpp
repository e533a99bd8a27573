#pragma once

#include <numbers>

#include "photonic/circuit.hpp"

/// \file gates.hpp
/// Gate-level constructions: the fixed-pi controlled-phase gate realized on
/// a polarization-dependent beam splitter, the tunable controlled-phase gate
/// as a heralded conditional amplitude map, the QND presence herald, and the
/// programmable-phase gate (a PBS plus heralding on the control photon).

namespace photonic {

/// Optimal success probability of a linear-optical controlled-phase gate
/// with vacuum ancillae, as a function of the exercised phase shift.
/// p_c(0) = 1 and p_c(pi) = 1/9 at the controlled-sign point. Note the
/// curve is not monotone: it dips below 1/9 near phi ~ 0.65*pi before
/// rising back.
inline double p_c(double phi) {
    if (phi < 0 || phi > std::numbers::pi) throw std::domain_error("p_c: phi outside [0, pi]");
    double s = std::abs(std::sin(phi / 2));
    double bracket = 1 + 2 * s +
                     std::pow(2.0, 1.5) * std::sin((std::numbers::pi - phi) / 4) * std::sqrt(s);
    return 1.0 / (bracket * bracket);
}

/// Parameters of the tunable gate: phase shift phi in [0, pi] and success
/// amplitude A_C with A_C^2 = p_c(phi).
struct TunableGateParams {
    double phi;
    double a_c;

    static TunableGateParams from_phase(double phi) {
        TunableGateParams p{phi, std::sqrt(p_c(phi))};
        p.validate();
        return p;
    }

    void validate() const {
        if (phi < 0 || phi > std::numbers::pi)
            throw std::domain_error("TunableGateParams: phi outside [0, pi]");
        if (a_c <= 0 || a_c > 1)
            throw std::domain_error("TunableGateParams: A_C outside (0, 1]");
        if (std::abs(a_c * a_c - p_c(phi)) > 1e-12)
            throw std::invalid_argument("TunableGateParams: A_C^2 does not equal p_c(phi)");
    }
};

/// Controlled-phase gate at phase pi, realized as a PDBS with T_H = 1 and
/// T_V = 1/3 coupling the signal and control paths. Heralded on one photon
/// per output port the core maps
///     HH -> HH,  HV -> HV/sqrt(3),  VH -> VH/sqrt(3),  VV -> -VV/3.
/// With equalize_success the two H attenuators (T = 1/3) are appended and
/// the heralded gate becomes the controlled-sign map diag(1,1,1,-1)/3.
inline std::vector<CircuitStep> cphase_pi(ModeRegistry& reg, const std::string& path_signal,
                                          const std::string& path_control,
                                          bool equalize_success = false) {
    std::vector<CircuitStep> steps;
    steps.push_back(pdbs(1.0, 1.0 / 3.0, path_signal, path_control));
    if (equalize_success) {
        steps.push_back(ndf(reg, 1.0 / 3.0, {mode(path_signal, Pol::H)}));
        steps.push_back(ndf(reg, 1.0 / 3.0, {mode(path_control, Pol::H)}));
    }
    return steps;
}

/// Tunable controlled-phase gate between one signal path and the control
/// path, as the heralded conditional map
///     no V photon on the watched modes        -> 1
///     one V photon (signal or control)        -> sqrt(A_C)
///     one V photon on each                    -> A_C * exp(i phi)
/// All other modes are spectators. The map is diagonal in the Fock basis and
/// a contraction (every factor has modulus <= 1).
inline DiagonalGate cphase_tunable(const TunableGateParams& params, const std::string& path_signal,
                                   const std::string& path_control) {
    params.validate();
    DiagonalGate g;
    g.name = "cphase(" + path_signal + "," + path_control + ")";
    g.modes = {mode(path_signal, Pol::V), mode(path_control, Pol::V)};
    double a = params.a_c;
    double phi = params.phi;
    g.factor = [a, phi](const std::vector<int>& occ) {
        int k = occ[0] + occ[1];
        cplx f = std::pow(std::sqrt(a), k);
        if (occ[0] >= 1 && occ[1] >= 1) f *= std::exp(cplx{0, 1} * phi);
        return f;
    };
    return g;
}

/// Variant with the state-independent success amplitude A_C applied to every
/// basis component (the watched modes still pick up exp(i phi) together).
/// Used only for the comparison sweep of the uniform-gate router.
inline DiagonalGate cphase_tunable_uniform(const TunableGateParams& params,
                                           const std::string& path_signal,
                                           const std::string& path_control) {
    params.validate();
    DiagonalGate g;
    g.name = "cphase_uniform(" + path_signal + "," + path_control + ")";
    g.modes = {mode(path_signal, Pol::V), mode(path_control, Pol::V)};
    double a = params.a_c;
    double phi = params.phi;
    g.factor = [a, phi](const std::vector<int>& occ) {
        cplx f{a, 0};
        if (occ[0] >= 1 && occ[1] >= 1) f *= std::exp(cplx{0, 1} * phi);
        return f;
    };
    return g;
}

/// Exact interferometric realization of the tunable gate on the two watched
/// V modes: a 2x2 sub-unitary coupler with transmission sqrt(A_C) and
/// cross-coupling fixed by the gate phase, embedded as an isometry with two
/// loss modes. Heralded on one photon per port it reproduces the conditional
/// map of cphase_tunable; the coupler saturates the physicality bound
/// (largest singular value exactly 1).
inline OpticalElement cphase_tunable_coupler(ModeRegistry& reg, const TunableGateParams& params,
                                             const std::string& path_signal,
                                             const std::string& path_control) {
    params.validate();
    double a = params.a_c;
    double s = std::abs(std::sin(params.phi / 2));
    double rho = std::sqrt(2 * a * s);
    cplx cross = rho * std::exp(cplx{0, 1} * (std::numbers::pi / 4 + params.phi / 4));
    Eigen::Matrix2cd m;
    m << std::sqrt(a), cross, cross, std::sqrt(a);

    // Isometry completion: append rows so that columns are orthonormal.
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Vector2d sig = svd.singularValues();
    Eigen::Matrix2cd pad = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) {
        double s2 = std::min(1.0, sig(i) * sig(i));
        pad(i, i) = std::sqrt(std::max(0.0, 1.0 - s2));
    }
    Eigen::MatrixXcd full(4, 2);
    full.topRows(2) = m;
    full.bottomRows(2) = pad * svd.matrixV().adjoint();

    std::vector<ModeIndex> in{mode(path_signal, Pol::V), mode(path_control, Pol::V)};
    std::vector<ModeIndex> out = in;
    std::vector<ModeIndex> loss{reg.add_loss_mode(), reg.add_loss_mode()};
    out.push_back(loss[0]);
    out.push_back(loss[1]);
    return OpticalElement("cphase_coupler", in, out, full, loss);
}

/// Quantum non-demolition presence check on one path: identity on the
/// polarization, amplitude times 1/sqrt(2) for the heralding cost, and a
/// pattern requiring exactly one photon summed over the path's H and V
/// modes.
inline HeraldRule qnd_herald(const std::string& path) {
    HeraldRule r;
    r.label = "qnd(" + path + ")";
    r.constraints.push_back({{mode(path, Pol::H), mode(path, Pol::V)}, 1});
    r.weight = cplx{1.0 / std::numbers::sqrt2, 0.0};
    return r;
}

/// Programmable-phase gate as used by the router: the control path meets the
/// given signal path on a PBS and success is heralded on exactly one photon
/// leaving by the control port. The trailing trim plate compensates the PBS
/// reflection convention so that the double-reflected component carries no
/// residual phase.
inline std::vector<CircuitStep> ppg(const std::string& path_signal,
                                    const std::string& path_control) {
    std::vector<CircuitStep> steps;
    steps.push_back(pbs(path_signal, path_control));
    steps.push_back(phase_shift(std::numbers::pi, mode(path_signal, Pol::V)));
    HeraldRule r;
    r.label = "ppg(" + path_control + ")";
    r.constraints.push_back({{mode(path_control, Pol::H), mode(path_control, Pol::V)}, 1});
    steps.push_back(r);
    return steps;
}

} // namespace photonic
