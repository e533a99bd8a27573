#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "photonic/gates.hpp"

using namespace photonic;
using Catch::Approx;

namespace {
constexpr double pi = std::numbers::pi;

cplx amp(const StateVector& s, std::initializer_list<std::pair<ModeIndex, int>> occ) {
    FockState f(s.registry().size());
    for (auto& [m, n] : occ) f.occ[s.registry().slot(m)] = std::uint8_t(n);
    return s.amplitude(f);
}
} // namespace

TEST_CASE("a lossless chain preserves the norm") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("a");
    reg->add_path("b");
    StateVector in = cplx(0.6) * create_photon(vacuum(reg), mode("a", Pol::H)) +
                     cplx{0, 0.8} * create_photon(vacuum(reg), mode("a", Pol::V));
    StateVector s = in;
    s = apply_element(s, hwp(0.2, "a"));
    s = apply_element(s, pbs("a", "b"));
    s = apply_element(s, pdbs(0.9, 0.4, "a", "b"));
    s = apply_element(s, qwp(1.1, "b"));
    REQUIRE(s.norm2() == Approx(1.0).epsilon(0).margin(1e-12));
}

TEST_CASE("two photons on a balanced splitter show the Hong-Ou-Mandel dip") {
    // Oracle: expand (a + i b)(i a + b)/2; the a b cross term cancels.
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("a");
    reg->add_path("b");
    StateVector in = create_photon(create_photon(vacuum(reg), mode("a", Pol::H)),
                                   mode("b", Pol::H));
    StateVector out = apply_element(in, pdbs(0.5, 0.5, "a", "b"));
    REQUIRE(std::abs(amp(out, {{mode("a", Pol::H), 1}, {mode("b", Pol::H), 1}})) < 1e-14);
    // Both photons bunch: |2,0> and |0,2> with probability 1/2 each.
    REQUIRE(std::norm(amp(out, {{mode("a", Pol::H), 2}})) == Approx(0.5));
    REQUIRE(std::norm(amp(out, {{mode("b", Pol::H), 2}})) == Approx(0.5));
    REQUIRE(out.norm2() == Approx(1.0));
}

TEST_CASE("identity element leaves the state unchanged") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("a");
    StateVector in = cplx(0.28, 0.96) * create_photon(vacuum(reg), mode("a", Pol::H));
    StateVector out = apply_element(in, phase_shift(0.0, mode("a", Pol::H)));
    StateVector diff = out + cplx(-1.0) * in;
    REQUIRE(diff.norm2() < 1e-28);
}

TEST_CASE("herald on the loss mode of a balanced filter costs one half") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("a");
    OpticalElement filt = ndf(*reg, 0.5, {mode("a", Pol::H)});
    StateVector in = create_photon(vacuum(std::shared_ptr<const ModeRegistry>(reg)),
                                   mode("a", Pol::H));
    StateVector out = apply_element(in, filt);
    auto r = run_heralded(out, HeraldRule{.label = "keep"});
    REQUIRE(r.probability == Approx(0.5));
}

TEST_CASE("herald on an unmatched pattern gives probability zero") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("a");
    StateVector in = create_photon(vacuum(reg), mode("a", Pol::H));
    auto r = run_heralded(in, HeraldRule::pattern({{mode("a", Pol::V), 1}}));
    REQUIRE(r.probability == 0.0);
    REQUIRE(r.state.term_count() == 0);
}

TEST_CASE("qnd herald keeps single-photon paths at half probability") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("c");
    StateVector in = cplx(0.6) * create_photon(vacuum(reg), mode("c", Pol::H)) +
                     cplx(0.8) * create_photon(vacuum(reg), mode("c", Pol::V));
    auto r = run_heralded(in, qnd_herald("c"));
    REQUIRE(r.probability == Approx(0.5));
    // polarization untouched
    REQUIRE(std::abs(amp(r.state, {{mode("c", Pol::H), 1}}) / amp(r.state, {{mode("c", Pol::V), 1}}) -
                     cplx(0.75)) < 1e-12);

    auto vac_r = run_heralded(vacuum(reg), qnd_herald("c"));
    REQUIRE(vac_r.probability == 0.0);

    auto twice = run_heralded(r.state, qnd_herald("c"));
    REQUIRE(twice.probability == Approx(0.25));
}

TEST_CASE("measure_and_branch splits a control photon into both outcomes") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("c");
    double theta = 0.7;
    StateVector in = cplx(std::cos(theta)) * create_photon(vacuum(reg), mode("c", Pol::H)) +
                     cplx(std::sin(theta)) * create_photon(vacuum(reg), mode("c", Pol::V));

    SECTION("diagonal basis, unit efficiency: probabilities complete") {
        auto branches = measure_and_branch(in, DetectorConfig::diagonal(), "c");
        REQUIRE(branches.size() == 2);
        REQUIRE(branches[0].outcome_label == "D");
        double total = branches[0].probability + branches[1].probability;
        REQUIRE(total == Approx(in.norm2()).epsilon(0).margin(1e-12));
    }

    SECTION("eta scales every branch probability, not the states") {
        auto full = measure_and_branch(in, DetectorConfig::diagonal(1.0), "c");
        auto half = measure_and_branch(in, DetectorConfig::diagonal(0.5), "c");
        for (int b = 0; b < 2; ++b) {
            REQUIRE(half[b].probability == Approx(0.5 * full[b].probability));
            StateVector scaled = cplx(std::sqrt(0.5)) * full[b].state;
            StateVector diff = scaled + cplx(-1.0) * half[b].state;
            REQUIRE(diff.norm2() < 1e-24);
        }
    }

    SECTION("terms without exactly one photon on the path are rejected") {
        StateVector bad = create_photon(in, mode("c", Pol::H));
        REQUIRE_THROWS_AS(measure_and_branch(bad, DetectorConfig::diagonal(), "c"),
                          std::domain_error);
    }

    SECTION("rectilinear basis reads the Schmidt weights directly") {
        auto branches = measure_and_branch(in, DetectorConfig::rectilinear(), "c");
        REQUIRE(branches[0].probability == Approx(std::cos(theta) * std::cos(theta)));
        REQUIRE(branches[1].probability == Approx(std::sin(theta) * std::sin(theta)));
    }
}

TEST_CASE("diagonal gates multiply term amplitudes conditionally") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("1");
    reg->add_path("c");
    auto params = TunableGateParams::from_phase(pi);
    DiagonalGate g = cphase_tunable(params, "1", "c");

    StateVector hv = create_photon(create_photon(vacuum(reg), mode("1", Pol::H)),
                                   mode("c", Pol::V));
    StateVector out = apply_diagonal(hv, g);
    REQUIRE(std::abs(amp(out, {{mode("1", Pol::H), 1}, {mode("c", Pol::V), 1}}) -
                     cplx(std::sqrt(1.0 / 3.0))) < 1e-12);
}

TEST_CASE("circuit pipelines carry corrections per outcome") {
    auto reg = std::make_shared<ModeRegistry>();
    reg->add_path("c");
    Circuit c(reg);
    DetectStep det;
    det.detector = DetectorConfig::diagonal();
    det.path = "c";
    det.corrections["A"] = {phase_shift(pi, mode("c", Pol::H))}; // harmless: mode is empty
    c.add(std::move(det));

    StateVector in = create_photon(vacuum(c.registry_ptr()), mode("c", Pol::H));
    auto branches = c.run(in);
    REQUIRE(branches.size() == 2);
    REQUIRE(branches[0].probability + branches[1].probability == Approx(1.0));
}
