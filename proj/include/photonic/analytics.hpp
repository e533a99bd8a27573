#pragma once

#include <iomanip>
#include <ostream>

#include "photonic/router.hpp"

/// \file analytics.hpp
/// Closed-form expressions for the router figures of merit and sweep
/// generators that tabulate them next to the simulated values.
///
/// The tunable-router minimum p_min_tunable and the maximizing angle
/// theta_at_pmax are kept exactly as published; the exact simulation is the
/// oracle and the verification suite reports both sides where they disagree.

namespace photonic {
namespace analytics {

/// Success probability of the fixed-gate router, (1 + 2 cos^2 theta)/24.
inline double p_succ_fixed(double theta) {
    if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
        throw std::domain_error("p_succ_fixed: theta outside [0, pi/2]");
    double c = std::cos(theta);
    return (1 + 2 * c * c) / 24.0;
}

/// Same quantity as a function of the routing ratio, (1+tan^2 chi)/(8+24 tan^2 chi).
inline double p_succ_fixed_of_chi(double chi) {
    if (std::abs(chi - std::numbers::pi / 2) < 1e-12) return 1.0 / 24.0;
    double t2 = std::tan(chi) * std::tan(chi);
    return (1 + t2) / (8 + 24 * t2);
}

/// Routing ratio of the fixed router: tan(chi) = tan(theta)/sqrt(3).
inline double chi_of_theta(double theta) {
    if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
        throw std::domain_error("chi_of_theta: theta outside [0, pi/2]");
    return std::atan2(std::sin(theta) / std::sqrt(3.0), std::cos(theta));
}

/// Largest routing ratio reachable with gate phase phi; equals phi/2.
inline double chi_limit(double phi) {
    if (phi < 0 || phi > std::numbers::pi + 1e-12)
        throw std::domain_error("chi_limit: phi outside [0, pi]");
    return phi / 2;
}

/// chi_limit written through the interference amplitudes,
/// atan((1-cos phi)/sin phi); identical to phi/2 on the open interval.
inline double chi_limit_atan_form(double phi) {
    if (phi <= 0) return 0.0;
    if (phi >= std::numbers::pi) return std::numbers::pi / 2;
    return std::atan2(1 - std::cos(phi), std::sin(phi));
}

/// Reference-branch success probability of the tunable router at vartheta=0,
/// from the squared pre-output amplitudes:
///   P(phi, theta) = A/(2+2A) * [cos^2 + A(1+cos phi) sin cos + A^2 sin^2].
inline double p_succ_tunable(double phi, double theta) {
    double a = std::sqrt(p_c(phi));
    double c = std::cos(theta), s = std::sin(theta);
    return a / (2 + 2 * a) * (c * c + a * (1 + std::cos(phi)) * s * c + a * a * s * s);
}

/// Published closed form for min over theta of the tunable-router success
/// probability, cbrt(A^4)/(2+2A). Reported comparatively by the verifier;
/// the simulated minimum follows A^3/(2+2A) instead.
inline double p_min_tunable(double phi) {
    double a = std::sqrt(p_c(phi));
    return std::cbrt(a * a * a * a) / (2 + 2 * a);
}

/// Published closed form for the maximizing control angle,
/// (1/2) atan[A (1-cos phi)/(1-A^2)]. See p_min_tunable about verification.
inline double theta_at_pmax(double phi) {
    double a = std::sqrt(p_c(phi));
    if (std::abs(1 - a * a) < 1e-15) return 0.0;
    return 0.5 * std::atan(a * (1 - std::cos(phi)) / (1 - a * a));
}

/// Success probability of routing n signal qubits with one control qubit,
/// 2^{1-4n} (1 - (8/9) sin^2 theta)^n.
inline double p_total_multi(int n, double theta) {
    if (n < 1) throw std::domain_error("p_total_multi: n must be >= 1");
    double s = std::sin(theta);
    return std::pow(2.0, 1 - 4 * n) * std::pow(1 - (8.0 / 9.0) * s * s, n);
}

/// Exact coherent-evolution counterpart of p_total_multi: the control's V
/// amplitude shrinks by 1/3 per pass, so the n-pass probability is
/// 2^{1-4n} (cos^2 theta + sin^2 theta / 9^n).
inline double p_total_multi_exact(int n, double theta) {
    if (n < 1) throw std::domain_error("p_total_multi_exact: n must be >= 1");
    double c = std::cos(theta), s = std::sin(theta);
    return std::pow(2.0, 1 - 4 * n) * (c * c + s * s / std::pow(9.0, n));
}

/// Success probability of the tunable router when both gates apply the
/// uniform amplitude A_C to every component: P_C^2 / 4, independent of theta.
inline double p_uniform_gate(double phi) {
    double pc = p_c(phi);
    return pc * pc / 4.0;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

enum class SweepParameter { theta, phi, chi_limit, n_signals };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::theta;
    double lo = 0;
    double hi = 0;
    int points = 2;
    std::map<std::string, double> fixed; // other parameters by name

    void validate() const {
        if (points < 2) throw std::invalid_argument("SweepSpec: need at least two points");
        if (!(lo < hi)) throw std::invalid_argument("SweepSpec: lo must be below hi");
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
};

/// Fixed-router sweep over theta (the curve behind the success-probability
/// figure): analytic and simulated values side by side.
inline Table sweep_fixed(const SweepSpec& spec, const SignalQubit& signal = {},
                         double vartheta = 0.0, bool equalize = false) {
    spec.validate();
    Table t;
    t.columns = {"theta",          "chi",   "A1_abs",     "A2_abs",
                 "arg_A2_A1",      "P_sim", "P_analytic", "fidelity_out1",
                 "fidelity_out2"};
    for (int i = 0; i < spec.points; ++i) {
        double theta = spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1);
        RouterOptions opts;
        opts.equalize = equalize;
        RouterResult r = route_fixed(signal, ControlQubit{theta, vartheta}, opts);
        double analytic = equalize ? 1.0 / 24.0 : p_succ_fixed(theta);
        t.rows.push_back({theta, r.chi, std::abs(r.a1), std::abs(r.a2),
                          std::abs(r.a2) < 1e-15 || std::abs(r.a1) < 1e-15
                              ? std::optional<double>{}
                              : std::arg(r.a2 / r.a1),
                          r.p_succ, analytic, r.fidelity_out1, r.fidelity_out2});
    }
    return t;
}

/// Tunable-router sweep over the routing-ratio limit: per point the maximum
/// and minimum of the simulated success probability over theta, next to the
/// published closed forms and the uniform-gate line.
inline Table sweep_tunable_limit(const SweepSpec& spec, int theta_scan = 181) {
    spec.validate();
    Table t;
    t.columns = {"chi_limit",  "phi",        "P_max_sim", "theta_at_pmax_sim",
                 "P_min_sim",  "P_min_analytic", "theta_at_pmax_analytic",
                 "P_uniform_sim", "P_uniform_analytic"};
    SignalQubit sig{};
    for (int i = 0; i < spec.points; ++i) {
        double chi_l = spec.lo + (spec.hi - spec.lo) * i / (spec.points - 1);
        double phi = 2 * chi_l;
        double pmax = -1, pmin = 2, th_max = 0;
        for (int k = 0; k < theta_scan; ++k) {
            double theta = (std::numbers::pi / 2) * k / (theta_scan - 1);
            double p = route_tunable(sig, ControlQubit{theta, 0.0}, phi).p_succ;
            if (p > pmax) {
                pmax = p;
                th_max = theta;
            }
            pmin = std::min(pmin, p);
        }
        RouterOptions uopts;
        uopts.uniform_gate = true;
        double p_uni = route_tunable(sig, ControlQubit{0.4, 0.0}, phi, uopts).p_total;
        t.rows.push_back({chi_l, phi, pmax, th_max, pmin, p_min_tunable(phi),
                          theta_at_pmax(phi), p_uni, p_uniform_gate(phi)});
    }
    return t;
}

/// Multi-qubit sweep over the chain length at fixed theta.
inline Table sweep_multi(int n_max, double theta) {
    Table t;
    t.columns = {"n", "theta", "P_sim", "P_analytic", "P_exact_form",
                 "fidelity_out1", "fidelity_out2"};
    for (int n = 1; n <= n_max; ++n) {
        std::vector<SignalQubit> sigs(static_cast<std::size_t>(n), SignalQubit{});
        MultiResult r = route_multi(sigs, ControlQubit{theta, 0.0});
        t.rows.push_back({double(n), theta, r.p_total, p_total_multi(n, theta),
                          p_total_multi_exact(n, theta), r.fidelity_out1, r.fidelity_out2});
    }
    return t;
}

inline void write_csv(std::ostream& os, const Table& t,
                      const std::vector<std::string>& header_comments = {}) {
    for (const auto& c : header_comments) os << "# " << c << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
    os << std::setprecision(12) << std::scientific;
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i]) {
                double v = *row[i];
                if (v == 0.0) v = 0.0; // normalize negative zero
                os << v;
            }
            os << (i + 1 < row.size() ? "," : "\n");
        }
    }
}

} // namespace analytics
} // namespace photonic
