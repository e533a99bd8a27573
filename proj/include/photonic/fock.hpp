#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

/// \file fock.hpp
/// Exact state-vector representation of few-photon states over a set of
/// labelled bosonic modes. States are sparse complex superpositions of
/// occupation-number basis vectors; sub-normalized states are legal and
/// their squared norm carries the accumulated herald probability.

namespace photonic {

using cplx = std::complex<double>;

inline constexpr double kDefaultPruneEps = 1e-15;
inline constexpr double kNormTol = 1e-9;

/// Photon polarization of a mode. Scalar (loss) modes carry no polarization.
enum class Pol : std::uint8_t { H, V };

inline char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

/// A (spatial path, polarization) label. Loss and other scalar modes leave
/// the polarization unset.
struct ModeIndex {
    std::string spatial;
    std::optional<Pol> pol;

    friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;

    std::string str() const {
        std::string s = spatial;
        if (pol) s.push_back(pol_char(*pol));
        return s;
    }
};

inline ModeIndex mode(std::string spatial, Pol p) { return ModeIndex{std::move(spatial), p}; }
inline ModeIndex scalar_mode(std::string spatial) { return ModeIndex{std::move(spatial), std::nullopt}; }

/// Maps mode labels to contiguous slots. Insertion order is the canonical
/// mode ordering and is frozen once a circuit starts running; all FockState
/// occupation vectors use it.
class ModeRegistry {
public:
    std::size_t add(const ModeIndex& m) {
        if (frozen_) throw std::logic_error("ModeRegistry: frozen, cannot add mode " + m.str());
        if (index_.count(m)) throw std::invalid_argument("ModeRegistry: duplicate mode " + m.str());
        modes_.push_back(m);
        index_[m] = modes_.size() - 1;
        return modes_.size() - 1;
    }

    std::size_t add(std::string spatial, Pol p) { return add(mode(std::move(spatial), p)); }

    /// Adds both polarization modes of a spatial path; returns the H slot.
    std::size_t add_path(const std::string& spatial) {
        std::size_t h = add(spatial, Pol::H);
        add(spatial, Pol::V);
        return h;
    }

    /// Allocates a fresh scalar loss mode with a unique label.
    ModeIndex add_loss_mode() {
        ModeIndex m = scalar_mode("loss" + std::to_string(loss_count_++));
        add(m);
        return m;
    }

    std::size_t slot(const ModeIndex& m) const {
        auto it = index_.find(m);
        if (it == index_.end()) throw std::invalid_argument("ModeRegistry: unknown mode " + m.str());
        return it->second;
    }

    bool has(const ModeIndex& m) const { return index_.count(m) != 0; }
    const ModeIndex& at(std::size_t slot) const { return modes_.at(slot); }
    std::size_t size() const { return modes_.size(); }
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    /// Slots of every registered loss mode (scalar modes named loss*).
    std::vector<std::size_t> loss_slots() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < modes_.size(); ++i)
            if (!modes_[i].pol && modes_[i].spatial.rfind("loss", 0) == 0) out.push_back(i);
        return out;
    }

    const std::vector<ModeIndex>& modes() const { return modes_; }

private:
    std::vector<ModeIndex> modes_;
    std::map<ModeIndex, std::size_t> index_;
    std::size_t loss_count_ = 0;
    bool frozen_ = false;
};

using RegistryPtr = std::shared_ptr<const ModeRegistry>;

/// Occupation-number basis vector; one photon count per registered mode.
struct FockState {
    std::vector<std::uint8_t> occ;

    explicit FockState(std::size_t n_modes = 0) : occ(n_modes, 0) {}

    int total() const {
        int t = 0;
        for (auto n : occ) t += n;
        return t;
    }

    friend auto operator<=>(const FockState&, const FockState&) = default;

    std::string str(const ModeRegistry& reg) const {
        std::ostringstream os;
        os << '|';
        bool first = true;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            if (occ[i] == 0) continue;
            if (!first) os << ' ';
            first = false;
            if (occ[i] > 1) os << int(occ[i]);
            os << reg.at(i).str();
        }
        if (first) os << "vac";
        os << '>';
        return os.str();
    }
};

namespace detail {
inline double factorial(int n) {
    static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800};
    if (n < 0 || n > 10) throw std::domain_error("factorial: photon number out of supported range");
    return table[n];
}
} // namespace detail

/// Sparse complex superposition over Fock states of one registry.
///
/// Amplitudes below the pruning threshold are dropped after every
/// operation; the squared norm may be below 1 (heralded branches) but
/// never above 1 + kNormTol.
class StateVector {
public:
    using TermMap = std::map<FockState, cplx>;

    explicit StateVector(RegistryPtr reg, double prune_eps = kDefaultPruneEps)
        : reg_(std::move(reg)), prune_eps_(prune_eps) {
        if (!reg_ || reg_->size() == 0) throw std::invalid_argument("StateVector: empty registry");
    }

    const ModeRegistry& registry() const { return *reg_; }
    RegistryPtr registry_ptr() const { return reg_; }
    const TermMap& terms() const { return terms_; }
    double prune_eps() const { return prune_eps_; }
    std::size_t term_count() const { return terms_.size(); }

    void set_amplitude(const FockState& f, cplx a) {
        if (f.occ.size() != reg_->size())
            throw std::invalid_argument("StateVector: occupation length does not match registry");
        if (std::abs(a) <= prune_eps_)
            terms_.erase(f);
        else
            terms_[f] = a;
    }

    cplx amplitude(const FockState& f) const {
        auto it = terms_.find(f);
        return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
    }

    void accumulate(const FockState& f, cplx a) {
        auto [it, inserted] = terms_.try_emplace(f, a);
        if (!inserted) it->second += a;
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) <= prune_eps_)
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    double norm2() const {
        double s = 0;
        for (const auto& [f, a] : terms_) s += std::norm(a);
        return s;
    }

    StateVector& operator*=(cplx c) {
        for (auto& [f, a] : terms_) a *= c;
        prune();
        return *this;
    }

    friend StateVector operator*(cplx c, StateVector s) {
        s *= c;
        return s;
    }

    StateVector& operator+=(const StateVector& rhs) {
        require_same_registry(*this, rhs);
        for (const auto& [f, a] : rhs.terms_) accumulate(f, a);
        prune();
        return *this;
    }

    friend StateVector operator+(StateVector lhs, const StateVector& rhs) {
        lhs += rhs;
        return lhs;
    }

    StateVector normalized() const {
        double n2 = norm2();
        if (n2 <= 0) throw std::domain_error("StateVector: cannot normalize zero state");
        StateVector out = *this;
        out *= cplx{1.0 / std::sqrt(n2), 0.0};
        return out;
    }

    static void require_same_registry(const StateVector& a, const StateVector& b) {
        if (a.reg_ != b.reg_)
            throw std::invalid_argument("StateVector: registry mismatch between operands");
    }

private:
    RegistryPtr reg_;
    TermMap terms_;
    double prune_eps_;
};

/// All-zero occupation state with amplitude one.
inline StateVector vacuum(RegistryPtr reg, double prune_eps = kDefaultPruneEps) {
    StateVector s(std::move(reg), prune_eps);
    s.set_amplitude(FockState(s.registry().size()), cplx{1.0, 0.0});
    return s;
}

/// Bosonic creation operator on one mode: |..n..> -> sqrt(n+1)|..n+1..>.
inline StateVector create_photon(const StateVector& state, const ModeIndex& m) {
    std::size_t slot = state.registry().slot(m);
    StateVector out(state.registry_ptr(), state.prune_eps());
    for (const auto& [f, a] : state.terms()) {
        FockState g = f;
        int n = g.occ[slot];
        g.occ[slot] = static_cast<std::uint8_t>(n + 1);
        out.accumulate(g, a * std::sqrt(double(n + 1)));
    }
    out.prune();
    return out;
}

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner_product(const StateVector& a, const StateVector& b) {
    StateVector::require_same_registry(a, b);
    cplx s{0.0, 0.0};
    const auto& ta = a.terms();
    const auto& tb = b.terms();
    // Walk the smaller map.
    if (ta.size() <= tb.size()) {
        for (const auto& [f, amp] : ta) {
            auto it = tb.find(f);
            if (it != tb.end()) s += std::conj(amp) * it->second;
        }
    } else {
        for (const auto& [f, amp] : tb) {
            auto it = ta.find(f);
            if (it != ta.end()) s += std::conj(it->second) * amp;
        }
    }
    return s;
}

struct ProjectionResult {
    StateVector state;
    double probability; // squared norm of the unnormalized residual
};

/// Keeps only terms whose occupations match the pattern exactly on the
/// pattern's modes. Returns the unnormalized residual and its squared norm.
/// With trace_out set, the pinned modes are removed from the registry of the
/// returned state.
inline ProjectionResult project_pattern(const StateVector& state,
                                        const std::map<ModeIndex, int>& pattern,
                                        bool trace_out = false) {
    const ModeRegistry& reg = state.registry();
    std::vector<std::pair<std::size_t, int>> pins;
    pins.reserve(pattern.size());
    for (const auto& [m, n] : pattern) {
        if (n < 0) throw std::invalid_argument("project_pattern: negative count");
        pins.emplace_back(reg.slot(m), n);
    }

    RegistryPtr out_reg = state.registry_ptr();
    std::vector<std::size_t> keep;
    if (trace_out) {
        std::vector<bool> pinned(reg.size(), false);
        for (auto& [s, n] : pins) pinned[s] = true;
        auto nr = std::make_shared<ModeRegistry>();
        for (std::size_t i = 0; i < reg.size(); ++i)
            if (!pinned[i]) {
                nr->add(reg.at(i));
                keep.push_back(i);
            }
        if (nr->size() == 0) throw std::invalid_argument("project_pattern: cannot trace out every mode");
        out_reg = nr;
    }

    StateVector out(out_reg, state.prune_eps());
    double p = 0;
    for (const auto& [f, a] : state.terms()) {
        bool match = true;
        for (auto& [slot, n] : pins)
            if (f.occ[slot] != n) {
                match = false;
                break;
            }
        if (!match) continue;
        p += std::norm(a);
        if (trace_out) {
            FockState g(keep.size());
            for (std::size_t i = 0; i < keep.size(); ++i) g.occ[i] = f.occ[keep[i]];
            out.accumulate(g, a);
        } else {
            out.accumulate(f, a);
        }
    }
    out.prune();
    return {std::move(out), p};
}

/// Keeps only terms whose total photon count over the given modes equals
/// (resolving) or is at least (threshold) the required count.
inline ProjectionResult project_total(const StateVector& state,
                                      const std::vector<ModeIndex>& modes, int count,
                                      bool resolving = true) {
    const ModeRegistry& reg = state.registry();
    std::vector<std::size_t> slots;
    slots.reserve(modes.size());
    for (const auto& m : modes) slots.push_back(reg.slot(m));

    StateVector out(state.registry_ptr(), state.prune_eps());
    double p = 0;
    for (const auto& [f, a] : state.terms()) {
        int t = 0;
        for (auto s : slots) t += f.occ[s];
        bool ok = resolving ? (t == count) : (t >= count);
        if (!ok) continue;
        p += std::norm(a);
        out.accumulate(f, a);
    }
    out.prune();
    return {std::move(out), p};
}

} // namespace photonic
