#include <doctest.h>

#include <oscidissip/bogoliubov.hpp>
#include <oscidissip/hamiltonian.hpp>

#include "fock_oracle.hpp"

using namespace oscidissip;

namespace {

SystemConfig cavity_config(int n, CouplingKind kind, double value,
                           std::vector<double> xs = {0.0}) {
    SystemConfig c;
    c.reservoir = ReservoirSpec::cavity(n, 2.0 / n);
    std::vector<double> ws(xs.size(), 1.0);
    c.dipoles = {std::move(xs), std::move(ws)};
    c.coupling = {kind, value};
    return c;
}

SystemConfig array_config(int n, CouplingKind kind, double value,
                          std::vector<double> sites = {0.0}) {
    SystemConfig c;
    c.reservoir = ReservoirSpec::cavity_array(n, 2.0, 1.0, 1.0);
    std::vector<double> ws(sites.size(), 2.0);
    c.dipoles = {std::move(sites), std::move(ws)};
    c.coupling = {kind, value};
    return c;
}

std::vector<double> positive_real_frequencies(const QuadraticHamiltonian& qh) {
    const auto dyn = dynamical_spectrum(qh);
    std::vector<double> out;
    for (Eigen::Index k = 0; k < dyn.values.size(); ++k)
        if (dyn.values[k].real() > 0) out.push_back(dyn.values[k].real());
    std::sort(out.begin(), out.end());
    return out;
}

int count_bare_matches(const std::vector<double>& lambdas, std::vector<double> bare,
                       double tol) {
    int count = 0;
    for (double l : lambdas) {
        for (auto it = bare.begin(); it != bare.end(); ++it)
            if (std::abs(*it - l) <= tol) {
                bare.erase(it);
                ++count;
                break;
            }
    }
    return count;
}

} // namespace

TEST_CASE("decoupled limit: H is the free Hamiltonian in every gauge") {
    const auto config = cavity_config(6, CouplingKind::G0Bar, 1e-15);
    const auto spectrum = reservoir_spectrum(config.reservoir);
    for (auto gauge : {Gauge::Coulomb, Gauge::Dipole, Gauge::QuantumOptical}) {
        const auto qh = build_hamiltonian(config, gauge);
        Matrix expected = Matrix::Zero(14, 14);
        expected(0, 0) = expected(7, 7) = 1.0;
        for (int n = 0; n < 6; ++n)
            expected(1 + n, 1 + n) = expected(8 + n, 8 + n) = spectrum[n];
        CHECK(max_abs(qh.h - expected) < 1e-14);
    }
}

TEST_CASE("hermiticity and particle-hole structure") {
    for (const auto& config :
         {cavity_config(17, CouplingKind::Theta, 0.8, {0.31, -2.2}),
          array_config(12, CouplingKind::Theta, 0.8, {3.0, 7.0})}) {
        for (auto gauge : {Gauge::Coulomb, Gauge::Dipole, Gauge::QuantumOptical}) {
            const auto qh = build_hamiltonian(config, gauge);
            const double scale = max_abs(qh.h);
            CHECK(qh.hermiticity_defect() <= 1e-12 * scale);
            CHECK(qh.particle_hole_defect() <= 1e-12 * scale);
        }
    }
}

TEST_CASE("dipole at cavity center leaves sine modes untouched") {
    const auto config = cavity_config(2, CouplingKind::Theta, 0.5);
    const auto qh = build_coulomb(config);
    const int nt = qh.n_total();
    // mode n=2 sits at row 2 (dipole, mode1, mode2); its rows/cols carry no
    // coupling and no diamagnetic weight
    for (int r : {2, 2 + nt}) {
        for (int c = 0; c < 2 * nt; ++c) {
            if (c == r) continue;
            CHECK(std::abs(qh.h(r, c)) == doctest::Approx(0.0));
            CHECK(std::abs(qh.h(c, r)) == doctest::Approx(0.0));
        }
        CHECK(qh.h(r, r).real() == doctest::Approx(2.0));  // bare 2*omega_c
    }
}

TEST_CASE("single dipole at center: Omega_11 is real and positive") {
    const auto config = cavity_config(8, CouplingKind::Theta, 0.3);
    const Matrix omega = dipole_self_interaction(config);
    CHECK(omega(0, 0).imag() == doctest::Approx(0.0));
    CHECK(omega(0, 0).real() > 0.0);
}

TEST_CASE("self-interaction double-sum correction vanishes on lattice sites") {
    const auto config = array_config(10, CouplingKind::Theta, 0.7, {2.0, 5.0});
    const Matrix with = dipole_self_interaction(config, true);
    const Matrix without = dipole_self_interaction(config, false);
    CHECK(max_abs(with - without) < 1e-14 * std::max(1.0, max_abs(with)));
}

TEST_CASE("Coulomb and dipole gauge share the dynamical spectrum") {
    for (double theta : {1e-3, 1.0, 10.0}) {
        for (const auto& base : {cavity_config(16, CouplingKind::Theta, theta, {0.4}),
                                 array_config(12, CouplingKind::Theta, theta, {3.0})}) {
            const auto wc = positive_real_frequencies(build_coulomb(base));
            const auto wd = positive_real_frequencies(build_dipole_gauge(base));
            REQUIRE(wc.size() == wd.size());
            for (std::size_t k = 0; k < wc.size(); ++k)
                CHECK(wc[k] == doctest::Approx(wd[k]).epsilon(1e-8));
        }
    }
}

TEST_CASE("quantum optical gauge: fine at weak coupling, unstable in USC") {
    const auto weak = cavity_config(20, CouplingKind::Theta, 1e-3);
    const auto wq = positive_real_frequencies(build_quantum_optical(weak));
    const auto wc = positive_real_frequencies(build_coulomb(weak));
    REQUIRE(wq.size() == wc.size());
    // agreement near the dipole frequency
    for (std::size_t k = 0; k < wq.size(); ++k)
        if (std::abs(wc[k] - 1.0) < 0.3) CHECK(wq[k] == doctest::Approx(wc[k]).epsilon(1e-4));

    const auto usc = cavity_config(20, CouplingKind::Theta, 1.0);
    CHECK(dynamical_spectrum(build_quantum_optical(usc)).max_imag > 1e-3);
    CHECK(dynamical_spectrum(build_coulomb(usc)).max_imag < 1e-10);
}

TEST_CASE("uncoupled-mode count for a centered dipole") {
    const double theta = 1.0;

    // cavity: even (sine) modes decouple -> floor(N/2) bare frequencies
    const int ncav = 14;
    const auto cav = cavity_config(ncav, CouplingKind::Theta, theta);
    const auto lc = positive_real_frequencies(build_coulomb(cav));
    std::vector<double> bare_even;
    for (int n = 2; n <= ncav; n += 2) bare_even.push_back(n * cav.reservoir.omega_c);
    CHECK(count_bare_matches(lc, bare_even, 1e-10) == ncav / 2);

    // array: one combination of each +-k degenerate pair decouples,
    // which is N/2 - 1 modes (k = 0 and k = pi/a are unpaired)
    const int narr = 12;
    const auto arr = array_config(narr, CouplingKind::Theta, theta, {6.0});
    const auto la = positive_real_frequencies(build_coulomb(arr));
    const auto bare = reservoir_spectrum(arr.reservoir);
    CHECK(count_bare_matches(la, bare, 1e-10) == narr / 2 - 1);
}

TEST_CASE("lowest normal mode matches the truncated-Fock oracle (1 dipole, 1 mode)") {
    // theta_C = 0.1 with the dipole resonant with the single kept mode
    SystemConfig config;
    config.reservoir = ReservoirSpec::cavity(1, 1.0);
    config.dipoles = {{0.0}, {1.0}};
    config.coupling = {CouplingKind::Theta, 0.1};

    const auto qh = build_coulomb(config);
    const auto lambdas = positive_real_frequencies(qh);
    REQUIRE(lambdas.size() == 2);

    fockspace::TruncatedModel model({45, 45});
    const auto sol = fockspace::solve(model.coulomb_hamiltonian(config));
    const auto gaps = sol.gaps();
    for (double l : lambdas) {
        double best = 1e300;
        for (double g : gaps) best = std::min(best, std::abs(g - l));
        CHECK(best <= 1e-6 * l);
    }
}

TEST_CASE("matrix dump is readable and self-describing") {
    const auto config = cavity_config(3, CouplingKind::Theta, 0.2);
    const auto qh = build_coulomb(config);
    const std::string path = "test_hamiltonian_dump.txt";
    write_matrix_dump(path, qh);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line.find("hamiltonian dump") != std::string::npos);
    std::getline(in, line);
    CHECK(line.find("coulomb") != std::string::npos);
    std::remove(path.c_str());
}
