#pragma once

#include "photonic/gates.hpp"

/// \file router.hpp
/// Assembles the router pipelines from gates and elements, runs them by
/// exact state-vector evolution and extracts routing amplitudes, ratios,
/// success probabilities and output polarization fidelities.
///
/// Reported quantities follow the reference-branch convention: the first
/// detection outcome ("D") is the reference; amplitudes are scaled by
/// sqrt(2) so that |A1|^2 + |A2|^2 accounts for both detector outcomes.
/// For the fixed router the corrected conjugate branch is identical to the
/// reference and this equals the total success probability. For the tunable
/// router at intermediate phases the two branches route with different
/// ratios (both preserve the signal polarization); the reference-branch
/// figures are the ones the closed-form expressions describe.

namespace photonic {

/// Polarization state of a signal photon, alpha |H> + beta |V>.
struct SignalQubit {
    cplx alpha{1.0, 0.0};
    cplx beta{0.0, 0.0};

    void validate() const {
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
            throw std::invalid_argument("SignalQubit: |alpha|^2 + |beta|^2 != 1");
    }
};

/// Control qubit cos(theta)|H> + e^{i vartheta} sin(theta)|V>.
struct ControlQubit {
    double theta = 0.0;
    double vartheta = 0.0;

    void validate() const {
        if (theta < 0 || theta > std::numbers::pi / 2 + 1e-12)
            throw std::domain_error("ControlQubit: theta outside [0, pi/2]");
        if (vartheta < 0 || vartheta >= 2 * std::numbers::pi)
            throw std::domain_error("ControlQubit: vartheta outside [0, 2pi)");
    }

    cplx amp_h() const { return {std::cos(theta), 0.0}; }
    cplx amp_v() const { return std::exp(cplx{0, 1} * vartheta) * std::sin(theta); }
};

struct RouterOptions {
    bool equalize = false; // fixed router: NDF(1/3) on output port 1
    double eta = 1.0;      // detector efficiency
    double prune_eps = kDefaultPruneEps;
    bool uniform_gate = false; // tunable router: state-independent gate variant
};

struct RouterResult {
    cplx a1{0, 0};
    cplx a2{0, 0};
    double chi = 0;
    double p_succ = 0;  // reference branch doubled; what the closed forms track
    double p_total = 0; // summed over both detection branches
    std::optional<double> fidelity_out1;
    std::optional<double> fidelity_out2;
};

struct MultiResult {
    double p_total = 0;
    double amp_out1 = 0; // modulus of the all-port-1 product component (reference branch, x sqrt 2)
    double amp_out2 = 0;
    std::optional<double> fidelity_out1;
    std::optional<double> fidelity_out2;
};

namespace detail {

inline cplx single_photon_amplitude(const StateVector& s, const ModeIndex& m) {
    FockState f(s.registry().size());
    f.occ[s.registry().slot(m)] = 1;
    return s.amplitude(f);
}

struct PortReadout {
    double p = 0;     // squared norm of the port component
    cplx overlap{0, 0}; // <ideal signal at port | state>
};

inline PortReadout read_port(const StateVector& s, const SignalQubit& q, const std::string& path) {
    cplx ah = single_photon_amplitude(s, mode(path, Pol::H));
    cplx av = single_photon_amplitude(s, mode(path, Pol::V));
    PortReadout r;
    r.p = std::norm(ah) + std::norm(av);
    r.overlap = std::conj(q.alpha) * ah + std::conj(q.beta) * av;
    return r;
}

inline std::optional<double> port_fidelity(const PortReadout& r) {
    if (r.p < 1e-24) return std::nullopt;
    return std::norm(r.overlap) / r.p;
}

inline RouterResult combine_ports(const PortReadout& p1, const PortReadout& p2) {
    RouterResult res;
    res.p_succ = 2 * (p1.p + p2.p);
    auto amp = [](const PortReadout& r) {
        if (r.p < 1e-24) return cplx{0, 0};
        cplx phase = r.overlap / std::abs(r.overlap);
        return std::sqrt(2 * r.p) * phase;
    };
    res.a1 = amp(p1);
    res.a2 = amp(p2);
    res.chi = std::atan2(std::abs(res.a2), std::abs(res.a1));
    res.fidelity_out1 = port_fidelity(p1);
    res.fidelity_out2 = port_fidelity(p2);
    return res;
}

/// alpha |H> + beta |V> injected on `path` of an existing state.
inline StateVector inject_qubit(const StateVector& s, cplx alpha, cplx beta,
                                const std::string& path) {
    return alpha * create_photon(s, mode(path, Pol::H)) +
           beta * create_photon(s, mode(path, Pol::V));
}

} // namespace detail

/// Squared overlap of the normalized polarization state found in each output
/// port with the injected signal state. Ports carrying no amplitude report
/// an absent fidelity.
inline std::pair<std::optional<double>, std::optional<double>> output_fidelity(
    const StateVector& branch_state, const SignalQubit& signal, const std::string& port1_path,
    const std::string& port2_path) {
    auto r1 = detail::read_port(branch_state, signal, port1_path);
    auto r2 = detail::read_port(branch_state, signal, port2_path);
    return {detail::port_fidelity(r1), detail::port_fidelity(r2)};
}

// ---------------------------------------------------------------------------
// Fixed-gate router
// ---------------------------------------------------------------------------

/// Builds the fixed-gate router pipeline over paths "1", "2" and control
/// "c". The two trim plates compensate the symmetric beam-splitter phase
/// convention: a pi plate on (1,V) after the interaction splitter and a
/// -pi/2 path trim on output port 2; with them the pipeline reproduces the
/// textbook amplitude flow plate by plate.
inline Circuit build_fixed_router(const RouterOptions& opts = {}) {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("1");
    reg->add_path("2");
    reg->add_path("c");

    const double pi = std::numbers::pi;
    Circuit c(reg);
    c.add(pbs("1", "2"));
    c.add(hwp(-pi / 6, "1"));
    c.add(cphase_pi(*reg, "1", "c"));
    c.add(phase_shift(pi, mode("1", Pol::V))); // convention trim
    c.add(hwp(pi / 8, "1"));
    c.add(qnd_herald("c"));
    c.add(hwp(pi / 8, "c"));
    c.add(hwp(pi / 8, "2"));
    c.add(ppg("2", "c"));

    DetectStep det;
    det.detector = DetectorConfig::diagonal(opts.eta);
    det.path = "c";
    det.corrections["A"] = {hwp(0.0, "2")};
    c.add(std::move(det));

    c.add(hwp(pi / 8, "2"));
    c.add(ndf(*reg, 0.5, {mode("2", Pol::H), mode("2", Pol::V)}));
    c.add(pbs("1", "2"));
    c.add(phase_shift(-pi / 2, {mode("2", Pol::H), mode("2", Pol::V)})); // port-2 path trim
    c.add(hwp(0.0, "1"));
    c.add(pol_swap("2"));
    if (opts.equalize) c.add(ndf(*reg, 1.0 / 3.0, {mode("1", Pol::H), mode("1", Pol::V)}));
    c.add(HeraldRule{.label = "discard-loss"}); // pin loss modes to vacuum
    return c;
}

inline StateVector prepare_router_input(const Circuit& circuit, const SignalQubit& signal,
                                        const ControlQubit& control, const std::string& signal_path,
                                        double prune_eps = kDefaultPruneEps) {
    signal.validate();
    control.validate();
    StateVector vac = vacuum(circuit.registry_ptr(), prune_eps);
    StateVector s = detail::inject_qubit(vac, signal.alpha, signal.beta, signal_path);
    return detail::inject_qubit(s, control.amp_h(), control.amp_v(), "c");
}

/// Runs the fixed-gate router. Output amplitudes follow
/// A1 = cos(theta)/(2 sqrt 2), A2 = e^{i vartheta} sin(theta)/(2 sqrt 6); with
/// `equalize` set an additional NDF(1/3) on output 1 pins the success
/// probability to 1/24 for every control state.
inline RouterResult route_fixed(const SignalQubit& signal, const ControlQubit& control,
                                const RouterOptions& opts = {}) {
    Circuit c = build_fixed_router(opts);
    StateVector in = prepare_router_input(c, signal, control, "1", opts.prune_eps);
    auto branches = c.run(in);
    const StateVector& ref = branches.at(0).state;
    RouterResult res = detail::combine_ports(detail::read_port(ref, signal, "1"),
                                             detail::read_port(ref, signal, "2"));
    for (const auto& b : branches) res.p_total += b.probability;
    return res;
}

// ---------------------------------------------------------------------------
// Tunable-gate router
// ---------------------------------------------------------------------------

/// Rebalancing rotation for the lower arm: H -> (sqrt(A) H + V)/sqrt(1+A).
inline double rebalance_angle_arm1(double a_c) {
    return 0.5 * std::atan2(1.0, std::sqrt(a_c));
}

/// Rebalancing rotation for the upper arm: V -> (sqrt(A) H - V)/sqrt(1+A).
inline double rebalance_angle_arm2(double a_c) {
    return 0.5 * std::atan2(std::sqrt(a_c), 1.0);
}

/// Appends one two-gate interaction block (both tunable gates with their QND
/// presence checks, the closing Hadamards and the output optics) acting on
/// paths `pa`/`pb` against the control path "c".
inline void append_tunable_pass(Circuit& c, const TunableGateParams& params,
                                const std::string& pa, const std::string& pb, bool uniform_gate) {
    const double pi = std::numbers::pi;
    c.add(pbs(pa, pb));
    c.add(hwp(rebalance_angle_arm1(params.a_c), pa));
    c.add(hwp(rebalance_angle_arm2(params.a_c), pb));
    if (uniform_gate) {
        c.add(cphase_tunable_uniform(params, pa, "c"));
        c.add(qnd_herald("c"));
        c.add(cphase_tunable_uniform(params, pb, "c"));
    } else {
        c.add(cphase_tunable(params, pa, "c"));
        c.add(qnd_herald("c"));
        c.add(cphase_tunable(params, pb, "c"));
    }
    c.add(qnd_herald("c"));
    c.add(hwp(pi / 8, pa));
    c.add(hwp(pi / 8, pb));
    c.add(pbs(pa, pb));
    c.add(phase_shift(-pi / 2, {mode(pb, Pol::H), mode(pb, Pol::V)})); // port-2 path trim
    c.add(hwp(0.0, pa));
    c.add(pol_swap(pb));
}

inline Circuit build_tunable_router(double phi, const RouterOptions& opts = {}) {
    auto params = TunableGateParams::from_phase(phi);
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("1");
    reg->add_path("2");
    reg->add_path("c");

    Circuit c(reg);
    append_tunable_pass(c, params, "1", "2", opts.uniform_gate);

    DetectStep det;
    det.detector = DetectorConfig::diagonal(opts.eta);
    det.path = "c";
    det.corrections["A"] = {phase_shift(std::numbers::pi,
                                        {mode("2", Pol::H), mode("2", Pol::V)})};
    c.add(std::move(det));
    c.add(HeraldRule{.label = "discard-loss"});
    return c;
}

/// Runs the tunable-gate router at gate phase phi. The detection-side
/// Hadamards and output optics are shared with the fixed pipeline; routing
/// is bounded by chi <= phi/2 with equality at theta = pi/2.
inline RouterResult route_tunable(const SignalQubit& signal, const ControlQubit& control,
                                  double phi, const RouterOptions& opts = {}) {
    Circuit c = build_tunable_router(phi, opts);
    StateVector in = prepare_router_input(c, signal, control, "1", opts.prune_eps);
    auto branches = c.run(in);
    const StateVector& ref = branches.at(0).state;
    RouterResult res = detail::combine_ports(detail::read_port(ref, signal, "1"),
                                             detail::read_port(ref, signal, "2"));
    for (const auto& b : branches) res.p_total += b.probability;
    return res;
}

// ---------------------------------------------------------------------------
// Multi-qubit routing
// ---------------------------------------------------------------------------

/// Routes a chain of signal qubits with one control qubit: per signal one
/// two-gate interaction block, a control presence check between passes, and
/// a single diagonal-basis detection of the control at the end. Signal k
/// occupies paths "<k>a" (output 1) and "<k>b" (output 2).
inline MultiResult route_multi(const std::vector<SignalQubit>& signals,
                               const ControlQubit& control, const RouterOptions& opts = {}) {
    if (signals.empty()) throw std::invalid_argument("route_multi: need at least one signal");
    control.validate();
    for (const auto& s : signals) s.validate();

    const std::size_t n = signals.size();
    auto params = TunableGateParams::from_phase(std::numbers::pi);

    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("c");
    std::vector<std::string> pa(n), pb(n);
    for (std::size_t k = 0; k < n; ++k) {
        pa[k] = std::to_string(k + 1) + "a";
        pb[k] = std::to_string(k + 1) + "b";
        reg->add_path(pa[k]);
        reg->add_path(pb[k]);
    }

    Circuit c(reg);
    for (std::size_t k = 0; k < n; ++k) {
        append_tunable_pass(c, params, pa[k], pb[k], false);
        if (k + 1 < n) c.add(qnd_herald("c")); // presence check before re-injection
    }
    DetectStep det;
    det.detector = DetectorConfig::diagonal(opts.eta);
    det.path = "c";
    det.corrections["A"] = {phase_shift(std::numbers::pi,
                                        {mode(pb[n - 1], Pol::H), mode(pb[n - 1], Pol::V)})};
    c.add(std::move(det));
    c.add(HeraldRule{.label = "discard-loss"});

    StateVector state = vacuum(c.registry_ptr(), opts.prune_eps);
    state = detail::inject_qubit(state, control.amp_h(), control.amp_v(), "c");
    for (std::size_t k = 0; k < n; ++k)
        state = detail::inject_qubit(state, signals[k].alpha, signals[k].beta, pa[k]);

    auto branches = c.run(state);

    MultiResult res;
    for (const auto& b : branches) res.p_total += b.probability;

    // Reference branch: split into the all-port-1 and all-port-2 product
    // components and compare each with the product of the input signals.
    const StateVector& ref = branches.at(0).state;
    auto product_component = [&](const std::vector<std::string>& paths) {
        double p = 0;
        cplx overlap{0, 0};
        for (const auto& [f, amp] : ref.terms()) {
            bool in_ports = true;
            for (std::size_t k = 0; k < n && in_ports; ++k) {
                const auto& rg = ref.registry();
                int cnt = f.occ[rg.slot(mode(paths[k], Pol::H))] +
                          f.occ[rg.slot(mode(paths[k], Pol::V))];
                in_ports = cnt == 1;
            }
            if (!in_ports) continue;
            p += std::norm(amp);
            cplx ideal{1, 0};
            for (std::size_t k = 0; k < n; ++k) {
                const auto& rg = ref.registry();
                bool h = f.occ[rg.slot(mode(paths[k], Pol::H))] == 1;
                ideal *= h ? signals[k].alpha : signals[k].beta;
            }
            overlap += std::conj(ideal) * amp;
        }
        return detail::PortReadout{p, overlap};
    };

    auto r1 = product_component(pa);
    auto r2 = product_component(pb);
    res.amp_out1 = std::sqrt(2 * r1.p);
    res.amp_out2 = std::sqrt(2 * r2.p);
    res.fidelity_out1 = detail::port_fidelity(r1);
    res.fidelity_out2 = detail::port_fidelity(r2);

    // Everything not in one of the two product components would signal a
    // routing leak; the all-or-nothing structure keeps this at zero.
    double leak = ref.norm2() - r1.p - r2.p;
    if (leak > 1e-10) throw std::logic_error("route_multi: amplitude outside product branches");
    return res;
}

} // namespace photonic
