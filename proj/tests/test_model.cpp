#include <doctest.h>

#include <oscidissip/model.hpp>

using namespace oscidissip;

namespace {

SystemConfig cavity_config(int n, double phi, double x = 0.0, double omega_s = 1.0) {
    SystemConfig c;
    c.reservoir = ReservoirSpec::cavity(n, 2.0 * omega_s / n);
    c.dipoles = {{x}, {omega_s}};
    c.coupling = {CouplingKind::Phi, phi};
    return c;
}

SystemConfig array_config(int n, double phi, double j = 1.0, double x = 0.0) {
    SystemConfig c;
    c.reservoir = ReservoirSpec::cavity_array(n, 2.0 * j, j, 1.0);
    c.dipoles = {{x}, {2.0 * j}};  // resonant with the band center
    c.coupling = {CouplingKind::Phi, phi};
    return c;
}

double simpson_mode_norm(const ReservoirSpec& res, int mode_n) {
    const double l = res.length();
    const double lo = res.is_cavity() ? -l / 2 : 0.0;
    const int segments = 4096;
    const double h = l / segments;
    double s = 0.0;
    for (int k = 0; k <= segments; ++k) {
        double x = lo + k * h;
        if (!res.is_cavity() && k == segments) x = lo + l * (1.0 - 1e-12);
        const double f2 = std::norm(mode_amplitude(res, mode_n, x));
        const double w = (k == 0 || k == segments) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += w * f2;
    }
    return s * h / 3.0 / l;
}

} // namespace

TEST_CASE("cavity spectrum is n*omega_c") {
    const auto w = reservoir_spectrum(ReservoirSpec::cavity(3, 1.0));
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(2.0));
    CHECK(w[2] == doctest::Approx(3.0));
}

TEST_CASE("array spectrum, N=4 hand evaluation") {
    const auto spec = ReservoirSpec::cavity_array(4, 2.0, 1.0);
    auto w = reservoir_spectrum(spec);
    REQUIRE(w.size() == 4);
    // storage order n = -1, 0, 1, 2
    CHECK(array_mode_number(spec, 0) == -1);
    CHECK(array_mode_number(spec, 3) == 2);
    std::sort(w.begin(), w.end());
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(2.0));
    CHECK(w[2] == doctest::Approx(2.0));
    CHECK(w[3] == doctest::Approx(3.0));
}

TEST_CASE("array band edges and center at N=500") {
    const auto w = reservoir_spectrum(ReservoirSpec::cavity_array(500, 2.0, 1.0));
    const auto [mn, mx] = std::minmax_element(w.begin(), w.end());
    CHECK(*mn == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(*mx == doctest::Approx(3.0));
    for (double v : w) {
        CHECK(v >= 1.0 - 1e-12);
        CHECK(v <= 3.0 + 1e-12);
    }
}

TEST_CASE("cavity spectrum strictly increasing") {
    const auto w = reservoir_spectrum(ReservoirSpec::cavity(40, 0.37));
    for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] > w[k - 1]);
}

TEST_CASE("mode amplitudes at marked points") {
    const auto cav = ReservoirSpec::cavity(4, 1.0);
    CHECK(std::abs(mode_amplitude(cav, 2, 0.0)) == doctest::Approx(0.0));
    CHECK(mode_amplitude(cav, 1, 0.0).real() == doctest::Approx(std::sqrt(2.0)));

    const auto arr = ReservoirSpec::cavity_array(8, 2.0, 1.0);
    const double l = arr.length();
    const complexd f = mode_amplitude(arr, 1, l / 4);
    CHECK(f.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f.imag() == doctest::Approx(-1.0));
}

TEST_CASE("mode functions vanish at the cavity mirrors") {
    const auto cav = ReservoirSpec::cavity(6, 0.8);
    const double l = cav.length();
    for (int n = 1; n <= 6; ++n) {
        CHECK(std::abs(mode_amplitude(cav, n, l / 2)) < 1e-12);
        CHECK(std::abs(mode_amplitude(cav, n, -l / 2)) < 1e-12);
    }
}

TEST_CASE("mode normalization (1/L) int |f|^2 = 1") {
    const auto cav = ReservoirSpec::cavity(7, 1.3);
    for (int n = 1; n <= 7; ++n) CHECK(simpson_mode_norm(cav, n) == doctest::Approx(1.0).epsilon(1e-10));
    const auto arr = ReservoirSpec::cavity_array(6, 2.0, 0.7);
    for (int i = 0; i < 6; ++i)
        CHECK(simpson_mode_norm(arr, array_mode_number(arr, i)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("positions outside the reservoir are rejected") {
    const auto cav = ReservoirSpec::cavity(3, 1.0);
    CHECK_THROWS_AS(mode_amplitude(cav, 1, cav.length()), std::domain_error);
    const auto arr = ReservoirSpec::cavity_array(4, 2.0, 1.0);
    CHECK_THROWS_AS(mode_amplitude(arr, 1, -0.5), std::domain_error);

    SystemConfig bad = cavity_config(10, 0.01, /*x=*/1e9);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("invalid reservoirs are rejected") {
    CHECK_THROWS_AS(ReservoirSpec::cavity(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ReservoirSpec::cavity(3, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ReservoirSpec::cavity_array(5, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ReservoirSpec::cavity_array(4, 2.0, 2.5), std::invalid_argument);
}

TEST_CASE("derived constants, cavity") {
    const auto c = cavity_config(1000, 0.01);
    const auto d = derived_constants(c);
    CHECK(d.gamma == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(c.theta() == doctest::Approx(std::sqrt(0.01 / pi)).epsilon(1e-12));
    CHECK(d.v_s == doctest::Approx(1.0));
    CHECK(d.t_fin == doctest::Approx(c.reservoir.length()));
    CHECK(d.t_exc == doctest::Approx(2.0 * pi));
    CHECK(d.markov_margin == doctest::Approx(0.01 * 1000 * pi));
    CHECK(d.rabi_exchange == doctest::Approx(std::sqrt(1.0 + 0.01 / pi)));
}

TEST_CASE("derived constants, array") {
    const auto c = array_config(500, 0.04);
    const auto d = derived_constants(c);
    CHECK(d.gamma == doctest::Approx(0.04).epsilon(1e-12));  // phi * J
    CHECK(d.v_s == doctest::Approx(1.0));                    // J a at zero detuning
    CHECK(d.t_fin == doctest::Approx(500.0));
    CHECK(d.t_exc == doctest::Approx(2.0 * pi));
    CHECK(d.markov_margin == doctest::Approx(0.04 * 500));
    CHECK(d.k_s == doctest::Approx(pi / 2.0));
}

TEST_CASE("derived constants reject out-of-band dipoles") {
    SystemConfig c = array_config(20, 0.01);
    c.dipoles.frequencies[0] = 4.0;  // above the band top omega_c + J = 3
    CHECK_THROWS_AS(derived_constants(c), std::domain_error);
}

TEST_CASE("coupling conversions round-trip") {
    for (bool cavity : {true, false}) {
        SystemConfig base = cavity ? cavity_config(100, 0.01) : array_config(100, 0.01);
        for (double theta : {1e-3, 0.3, 7.0}) {
            const auto c = base.with_coupling(CouplingKind::Theta, theta);
            CHECK(c.theta() == doctest::Approx(theta).epsilon(1e-12));
            const auto via_g = base.with_coupling(CouplingKind::G0Bar, c.g0bar());
            CHECK(via_g.theta() == doctest::Approx(theta).epsilon(1e-12));
            const auto via_phi = base.with_coupling(CouplingKind::Phi, c.phi());
            CHECK(via_phi.theta() == doctest::Approx(theta).epsilon(1e-12));
        }
    }
}

TEST_CASE("markov margin grows with N at fixed phi") {
    double prev = 0.0;
    for (int n : {100, 200, 400, 800}) {
        const auto d = derived_constants(cavity_config(n, 0.005));
        CHECK(d.markov_margin > prev);
        prev = d.markov_margin;
    }
    prev = 0.0;
    for (int n : {100, 200, 400, 800}) {
        const auto d = derived_constants(array_config(n, 0.005));
        CHECK(d.markov_margin > prev);
        prev = d.markov_margin;
    }
}

TEST_CASE("effective array coupling") {
    SystemConfig c = array_config(500, 0.04);  // omega_s/J = 2
    const auto eff = effective_array_coupling(c);
    const double integral_factor = pi / std::sqrt(3.0);
    CHECK(eff.closed_form_sq ==
          doctest::Approx(eff.g_ca * eff.g_ca * integral_factor).epsilon(1e-12));
    CHECK(eff.mode_sum_sq == doctest::Approx(eff.closed_form_sq).epsilon(0.01));

    // flat-band limit: every summand tends to g0^2
    SystemConfig flat = c;
    flat.reservoir = ReservoirSpec::cavity_array(500, 2.0, 1e-5, 1.0);
    flat.dipoles.frequencies[0] = 2.0;
    const auto eff_flat = effective_array_coupling(flat);
    CHECK(eff_flat.mode_sum_sq ==
          doctest::Approx(500 * flat.g0() * flat.g0()).epsilon(1e-6));

    SystemConfig bad = c;
    bad.dipoles.frequencies[0] = 0.5;  // omega_s <= J
    CHECK_THROWS_AS(effective_array_coupling(bad), std::domain_error);
}
