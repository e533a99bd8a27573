#pragma once

#include <array>
#include <functional>
#include <variant>

#include "photonic/elements.hpp"
#include "photonic/fock.hpp"

/// \file circuit.hpp
/// Applies sequences of elements to a StateVector by multinomial expansion
/// of the mode transformation, and manages herald rules, detection
/// branching and feed-forward corrections.

namespace photonic {

namespace detail {

// Expands (sum_k column[k] * a^dag_k)^n over the output slots, accumulating
// coefficient * product of creation operators into `emit`.
inline void expand_power(const Eigen::MatrixXcd& m, int col,
                         const std::vector<std::size_t>& out_slots, int n,
                         std::vector<int>& powers, cplx coeff, int row,
                         const std::function<void(const std::vector<int>&, cplx)>& emit) {
    if (std::abs(coeff) == 0.0) return;
    if (row == int(out_slots.size()) - 1) {
        // Remaining photons all go to the last output slot.
        powers[row] = n;
        emit(powers, coeff * std::pow(m(row, col), n) / detail::factorial(n));
        powers[row] = 0;
        return;
    }
    for (int k = 0; k <= n; ++k) {
        powers[row] = k;
        cplx c = coeff * std::pow(m(row, col), k) / detail::factorial(k);
        expand_power(m, col, out_slots, n - k, powers, c, row + 1, emit);
    }
    powers[row] = 0;
}

} // namespace detail

/// Exact linear-optical evolution: every creation operator of an input mode
/// is substituted by its matrix image and the product expanded. Norm is
/// preserved for lossless elements.
inline StateVector apply_element(const StateVector& state, const OpticalElement& elem) {
    const ModeRegistry& reg = state.registry();
    std::vector<std::size_t> in_slots, out_slots;
    in_slots.reserve(elem.input_modes.size());
    out_slots.reserve(elem.output_modes.size());
    for (const auto& m : elem.input_modes) in_slots.push_back(reg.slot(m));
    for (const auto& m : elem.output_modes) out_slots.push_back(reg.slot(m));

    StateVector out(state.registry_ptr(), state.prune_eps());

    // Work buffers reused across terms.
    std::vector<int> powers(out_slots.size(), 0);

    for (const auto& [f, amp] : state.terms()) {
        // Normalization of the source term: 1/sqrt(prod n_i!) over input modes.
        double in_norm = 1.0;
        bool touched = false;
        for (auto s : in_slots) {
            in_norm *= detail::factorial(f.occ[s]);
            touched = touched || f.occ[s] > 0;
        }
        if (!touched) {
            out.accumulate(f, amp);
            continue;
        }

        // Base occupation with input modes emptied.
        FockState base = f;
        for (auto s : in_slots) base.occ[s] = 0;

        // Polynomial over output slots, seeded with the untouched photons.
        // Terms are (powers over out_slots) -> coefficient; expand input
        // modes one at a time.
        std::map<std::vector<int>, cplx> poly{{std::vector<int>(out_slots.size(), 0), cplx{1, 0}}};
        for (std::size_t j = 0; j < in_slots.size(); ++j) {
            int n = f.occ[in_slots[j]];
            if (n == 0) continue;
            std::map<std::vector<int>, cplx> mono;
            std::vector<int> p(out_slots.size(), 0);
            detail::expand_power(elem.matrix, int(j), out_slots, n, p,
                                 cplx{detail::factorial(n), 0}, 0,
                                 [&mono](const std::vector<int>& pw, cplx c) {
                                     if (std::abs(c) > 0.0) mono[pw] += c;
                                 });
            std::map<std::vector<int>, cplx> next;
            for (const auto& [pa, ca] : poly)
                for (const auto& [pb, cb] : mono) {
                    std::vector<int> ps(pa.size());
                    for (std::size_t i = 0; i < ps.size(); ++i) ps[i] = pa[i] + pb[i];
                    next[ps] += ca * cb;
                }
            poly = std::move(next);
        }

        for (const auto& [pw, c] : poly) {
            FockState g = base;
            for (std::size_t i = 0; i < out_slots.size(); ++i)
                g.occ[out_slots[i]] = static_cast<std::uint8_t>(g.occ[out_slots[i]] + pw[i]);
            double out_norm = 1.0;
            for (std::size_t i = 0; i < out_slots.size(); ++i)
                out_norm *= detail::factorial(g.occ[out_slots[i]]);
            // Pre-existing photons in an output slot would need merging
            // factors beyond sqrt(g!); the expansion above already placed
            // every photon of the affected slots, because base zeroes only
            // input modes. Guard against overlap of untouched photons:
            for (std::size_t i = 0; i < out_slots.size(); ++i)
                if (base.occ[out_slots[i]] != 0)
                    throw std::logic_error("apply_element(" + elem.name +
                                           "): photons present in pure output mode " +
                                           reg.at(out_slots[i]).str());
            out.accumulate(g, amp * c * std::sqrt(out_norm / in_norm));
        }
    }
    out.prune();
    return out;
}

/// A detection pattern on designated modes. Constraints are (mode set,
/// required total count) pairs: singleton sets give per-mode pinning, larger
/// sets photon-sum constraints (e.g. "exactly one photon on this path").
/// `weight` multiplies surviving amplitudes and carries the success
/// amplitude of black-box heralded gates. With resolving unset the detector
/// is a threshold detector and counts are lower bounds.
struct HeraldRule {
    struct Constraint {
        std::vector<ModeIndex> modes;
        int count = 0;
    };
    std::vector<Constraint> constraints;
    std::string label;
    bool resolving = true;
    cplx weight{1.0, 0.0};

    static HeraldRule pattern(const std::map<ModeIndex, int>& pat, std::string label = {}) {
        HeraldRule r;
        r.label = std::move(label);
        for (const auto& [m, n] : pat) r.constraints.push_back({{m}, n});
        return r;
    }
};

/// Projects onto the herald pattern, applies the rule weight and pins every
/// registered loss mode to zero photons. Returns the surviving residual and
/// its squared norm (the branch probability so far).
inline ProjectionResult run_heralded(const StateVector& state, const HeraldRule& herald) {
    StateVector cur = state;
    for (const auto& c : herald.constraints) {
        auto r = project_total(cur, c.modes, c.count, herald.resolving);
        cur = std::move(r.state);
    }
    for (auto slot : state.registry().loss_slots()) {
        auto r = project_total(cur, {state.registry().at(slot)}, 0, true);
        cur = std::move(r.state);
    }
    cur *= herald.weight;
    double p = cur.norm2();
    return {std::move(cur), p};
}

/// One detection outcome: the label, the conditional feed-forward elements
/// applied to the surviving state, and the outcome amplitude weight.
struct Branch {
    std::string outcome_label;
    StateVector state;
    double probability = 0.0;
};

/// Polarization analysis on one path: measurement basis given as two
/// orthonormal Jones vectors, plus the detector efficiency eta which scales
/// every branch probability (per detected photon) without touching states.
struct DetectorConfig {
    double eta = 1.0;
    std::array<std::string, 2> labels{"D", "A"};
    std::array<Eigen::Vector2cd, 2> basis{Eigen::Vector2cd(1, 1).normalized(),
                                          Eigen::Vector2cd(1, -1).normalized()};

    static DetectorConfig diagonal(double eta = 1.0) { return DetectorConfig{eta}; }

    static DetectorConfig rectilinear(double eta = 1.0) {
        DetectorConfig d;
        d.eta = eta;
        d.labels = {"H", "V"};
        d.basis = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
        return d;
    }

    void validate() const {
        if (eta <= 0 || eta > 1) throw std::invalid_argument("DetectorConfig: eta outside (0,1]");
        if (std::abs(basis[0].dot(basis[1])) > 1e-12 || std::abs(basis[0].norm() - 1) > 1e-12 ||
            std::abs(basis[1].norm() - 1) > 1e-12)
            throw std::invalid_argument("DetectorConfig: basis not orthonormal");
    }
};

/// Measures one photon on the (H, V) modes of `path` in the detector basis.
/// Every surviving term must carry exactly one photon on the measured modes;
/// the photon is consumed (modes left empty in the branch states).
inline std::vector<Branch> measure_and_branch(const StateVector& state,
                                              const DetectorConfig& detector,
                                              const std::string& path) {
    detector.validate();
    const ModeRegistry& reg = state.registry();
    std::size_t sh = reg.slot(mode(path, Pol::H));
    std::size_t sv = reg.slot(mode(path, Pol::V));

    for (const auto& [f, a] : state.terms())
        if (f.occ[sh] + f.occ[sv] != 1)
            throw std::domain_error("measure_and_branch: term " + f.str(reg) +
                                    " does not carry exactly one photon on path " + path);

    double root_eta = std::sqrt(detector.eta);
    std::vector<Branch> out;
    for (int b = 0; b < 2; ++b) {
        StateVector s(state.registry_ptr(), state.prune_eps());
        for (const auto& [f, a] : state.terms()) {
            cplx coeff = f.occ[sh] == 1 ? std::conj(detector.basis[b](0))
                                        : std::conj(detector.basis[b](1));
            if (std::abs(coeff) == 0.0) continue;
            FockState g = f;
            g.occ[sh] = 0;
            g.occ[sv] = 0;
            s.accumulate(g, a * coeff * root_eta);
        }
        s.prune();
        double p = s.norm2();
        out.push_back(Branch{detector.labels[b], std::move(s), p});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Circuit: an ordered pipeline of elements, diagonal heralded gates, herald
// rules and one optional detection step with per-outcome corrections.
// ---------------------------------------------------------------------------

/// Conditional amplitude map, diagonal in the Fock basis: each term is
/// multiplied by factor(occupations of the watched modes). Used for heralded
/// gates whose contract is stated directly on basis states.
struct DiagonalGate {
    std::string name;
    std::vector<ModeIndex> modes;
    std::function<cplx(const std::vector<int>&)> factor;
};

inline StateVector apply_diagonal(const StateVector& state, const DiagonalGate& gate) {
    const ModeRegistry& reg = state.registry();
    std::vector<std::size_t> slots;
    for (const auto& m : gate.modes) slots.push_back(reg.slot(m));
    StateVector out(state.registry_ptr(), state.prune_eps());
    std::vector<int> occ(slots.size());
    for (const auto& [f, a] : state.terms()) {
        for (std::size_t i = 0; i < slots.size(); ++i) occ[i] = f.occ[slots[i]];
        out.accumulate(f, a * gate.factor(occ));
    }
    out.prune();
    return out;
}

struct DetectStep {
    DetectorConfig detector;
    std::string path;
    // Feed-forward: outcome label -> elements applied to that branch.
    std::map<std::string, std::vector<OpticalElement>> corrections;
};

using CircuitStep = std::variant<OpticalElement, DiagonalGate, HeraldRule, DetectStep>;

/// A built circuit: frozen registry plus ordered steps. Running is a pure
/// function from the input state to the list of heralded branches; before
/// any detection the single running branch is labelled with the empty string.
class Circuit {
public:
    explicit Circuit(std::shared_ptr<ModeRegistry> reg) : reg_(std::move(reg)) {}

    std::shared_ptr<ModeRegistry> registry() { return reg_; }
    RegistryPtr registry_ptr() const { return reg_; }
    const ModeRegistry& registry() const { return *reg_; }
    std::vector<CircuitStep>& steps() { return steps_; }
    const std::vector<CircuitStep>& steps() const { return steps_; }

    void add(CircuitStep s) { steps_.push_back(std::move(s)); }
    void add(std::vector<CircuitStep> ss) {
        for (auto& s : ss) steps_.push_back(std::move(s));
    }

    std::vector<Branch> run(const StateVector& input) const {
        reg_->freeze();
        std::vector<Branch> branches{{"", input, input.norm2()}};
        for (const auto& step : steps_) {
            std::vector<Branch> next;
            for (auto& br : branches) {
                if (std::holds_alternative<OpticalElement>(step)) {
                    br.state = apply_element(br.state, std::get<OpticalElement>(step));
                    next.push_back(std::move(br));
                } else if (std::holds_alternative<DiagonalGate>(step)) {
                    br.state = apply_diagonal(br.state, std::get<DiagonalGate>(step));
                    next.push_back(std::move(br));
                } else if (std::holds_alternative<HeraldRule>(step)) {
                    auto r = run_heralded(br.state, std::get<HeraldRule>(step));
                    br.state = std::move(r.state);
                    br.probability = r.probability;
                    next.push_back(std::move(br));
                } else {
                    const auto& det = std::get<DetectStep>(step);
                    auto outcomes = measure_and_branch(br.state, det.detector, det.path);
                    for (auto& oc : outcomes) {
                        auto it = det.corrections.find(oc.outcome_label);
                        if (it != det.corrections.end())
                            for (const auto& e : it->second) oc.state = apply_element(oc.state, e);
                        oc.probability = oc.state.norm2();
                        if (!br.outcome_label.empty())
                            oc.outcome_label = br.outcome_label + "," + oc.outcome_label;
                        next.push_back(std::move(oc));
                    }
                }
            }
            branches = std::move(next);
        }
        return branches;
    }

private:
    std::shared_ptr<ModeRegistry> reg_;
    std::vector<CircuitStep> steps_;
};

} // namespace photonic
