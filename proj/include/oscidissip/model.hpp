#ifndef OSCIDISSIP_MODEL_HPP
#define OSCIDISSIP_MODEL_HPP

#include "core.hpp"

#include <string>

namespace oscidissip {

// Units: hbar = 1, c = 1 throughout. Frequencies are quoted relative to a
// reference that defaults to the first dipole frequency (omega_s = 1).

enum class ReservoirKind { Cavity, CavityArray };

/// 1-D electromagnetic environment: ideal cavity (equispaced, unbounded
/// spectrum with UV cutoff N*omega_c) or coupled cavity array (bounded band
/// omega_c +- J).
struct ReservoirSpec {
    ReservoirKind kind = ReservoirKind::Cavity;
    int num_modes = 0;    // cavity: mode count; array: site count (even)
    double omega_c = 0.0; // cavity: free spectral range c*pi/L; array: on-site frequency
    double hopping = 0.0; // J (array only)
    double spacing = 1.0; // a (array only)

    static ReservoirSpec cavity(int n, double omega_c) {
        ReservoirSpec s;
        s.kind = ReservoirKind::Cavity;
        s.num_modes = n;
        s.omega_c = omega_c;
        s.validate();
        return s;
    }
    static ReservoirSpec cavity_array(int n, double omega_c, double j, double a = 1.0) {
        ReservoirSpec s;
        s.kind = ReservoirKind::CavityArray;
        s.num_modes = n;
        s.omega_c = omega_c;
        s.hopping = j;
        s.spacing = a;
        s.validate();
        return s;
    }

    bool is_cavity() const { return kind == ReservoirKind::Cavity; }

    /// Reservoir extent L: c*pi/omega_c for the cavity, N*a for the array.
    double length() const {
        return is_cavity() ? pi / omega_c : num_modes * spacing;
    }
    double uv_cutoff() const { return is_cavity() ? num_modes * omega_c : omega_c + hopping; }

    void validate() const {
        if (is_cavity()) {
            if (num_modes < 1) throw std::invalid_argument("cavity: N must be >= 1");
            if (omega_c <= 0) throw std::invalid_argument("cavity: omega_c must be positive");
        } else {
            if (num_modes < 2 || num_modes % 2 != 0)
                throw std::invalid_argument("cavity array: N must be a positive even integer");
            if (omega_c <= 0) throw std::invalid_argument("cavity array: omega_c must be positive");
            if (hopping <= 0 || hopping >= omega_c)
                throw std::invalid_argument("cavity array: need 0 < J < omega_c for a positive spectrum");
            if (spacing <= 0) throw std::invalid_argument("cavity array: spacing a must be positive");
        }
    }
};

/// Point dipoles: cavity positions measured from the cavity center
/// (|x| <= L/2), array positions in [0, N*a).
struct DipoleSpec {
    std::vector<double> positions;
    std::vector<double> frequencies;

    int count() const { return static_cast<int>(positions.size()); }

    void validate(const ReservoirSpec& res) const {
        if (positions.empty()) throw std::invalid_argument("dipoles: need at least one dipole");
        if (positions.size() != frequencies.size())
            throw std::invalid_argument("dipoles: positions and frequencies differ in length");
        for (double w : frequencies)
            if (w <= 0) throw std::invalid_argument("dipoles: frequencies must be positive");
        const double l = res.length();
        for (double x : positions) {
            bool inside = res.is_cavity() ? std::abs(x) <= l / 2 : (x >= 0 && x < l);
            if (!inside) throw std::invalid_argument("dipoles: position outside the reservoir");
        }
    }
};

enum class CouplingKind { G0Bar, Phi, Theta };

/// One of the equivalent coupling parametrizations: the size-independent
/// bare coupling g0bar, the Markovianity parameter phi, or the dimensionless
/// strong-coupling ratio theta. Conversions are bijective given the
/// reservoir and the reference dipole frequency.
struct CouplingSpec {
    CouplingKind kind = CouplingKind::Phi;
    double value = 0.0;

    void validate() const {
        if (value <= 0) throw std::invalid_argument("coupling: value must be strictly positive");
    }
};

inline const char* coupling_kind_name(CouplingKind k) {
    switch (k) {
        case CouplingKind::G0Bar: return "g0bar";
        case CouplingKind::Phi: return "phi";
        default: return "theta";
    }
}

struct SystemConfig {
    ReservoirSpec reservoir;
    DipoleSpec dipoles;
    CouplingSpec coupling;

    void validate() const {
        reservoir.validate();
        dipoles.validate(reservoir);
        coupling.validate();
    }

    int n_dipoles() const { return dipoles.count(); }
    int n_modes() const { return reservoir.num_modes; }
    int n_total() const { return n_dipoles() + n_modes(); }

    double omega_s() const { return dipoles.frequencies.front(); }
    double detuning() const { return reservoir.omega_c - omega_s(); }

    /// g0bar^2 = g0^2 * L, independent of the reservoir size.
    double g0bar_sq() const {
        const double ws = omega_s();
        if (reservoir.is_cavity()) {
            switch (coupling.kind) {
                case CouplingKind::G0Bar: return coupling.value * coupling.value;
                case CouplingKind::Phi: return coupling.value * ws;
                case CouplingKind::Theta: return coupling.value * coupling.value * pi * ws;
            }
        } else {
            const double j = reservoir.hopping, a = reservoir.spacing;
            switch (coupling.kind) {
                case CouplingKind::G0Bar: return coupling.value * coupling.value;
                case CouplingKind::Phi: return coupling.value * j * j * a / 2.0;
                case CouplingKind::Theta: return coupling.value * coupling.value * pi * j * a * ws;
            }
        }
        throw std::logic_error("unreachable");
    }
    double g0bar() const { return std::sqrt(g0bar_sq()); }
    double g0() const { return std::sqrt(g0bar_sq() / reservoir.length()); }

    double phi() const {
        const double ws = omega_s();
        if (reservoir.is_cavity()) return g0bar_sq() / ws;
        const double j = reservoir.hopping, a = reservoir.spacing;
        return 2.0 * g0bar_sq() / (j * j * a);
    }

    /// theta_C = g_C/omega_s = sqrt(phi_C/pi); theta_CA = g_CA/omega_s with
    /// g_CA^2 = g0bar^2 omega_s/(pi J a).
    double theta() const {
        const double ws = omega_s();
        if (reservoir.is_cavity()) return std::sqrt(phi() / pi);
        return std::sqrt(g0bar_sq() / (pi * reservoir.hopping * reservoir.spacing * ws));
    }

    SystemConfig with_coupling(CouplingKind kind, double value) const {
        SystemConfig c = *this;
        c.coupling = {kind, value};
        return c;
    }
};

/// Reservoir mode frequencies in storage order. Cavity: omega_n = n*omega_c,
/// n = 1..N (strictly increasing). Array: omega_n = omega_c - J cos(2 pi n/N)
/// with n = -N/2+1 .. N/2 mapped to storage index via array_mode_number.
inline std::vector<double> reservoir_spectrum(const ReservoirSpec& spec) {
    spec.validate();
    std::vector<double> w(spec.num_modes);
    if (spec.is_cavity()) {
        for (int i = 0; i < spec.num_modes; ++i) w[i] = (i + 1) * spec.omega_c;
    } else {
        for (int i = 0; i < spec.num_modes; ++i) {
            const int n = i - spec.num_modes / 2 + 1;
            w[i] = spec.omega_c - spec.hopping * std::cos(2.0 * pi * n / spec.num_modes);
        }
    }
    return w;
}

/// Stable storage index <-> mode number map for the array (n = idx - N/2 + 1).
inline int array_mode_number(const ReservoirSpec& spec, int index) {
    return index - spec.num_modes / 2 + 1;
}

inline double array_wave_number(const ReservoirSpec& spec, int mode_n) {
    return 2.0 * pi * mode_n / (spec.num_modes * spec.spacing);
}

/// Mode function f_n(x), normalized so that (1/L) * integral |f_n|^2 dx = 1.
/// Cavity standing waves: sqrt(2) sin(n pi x/L) for even n, sqrt(2) cos for
/// odd n. Array traveling waves: exp(-i n (2 pi/L) x).
inline complexd mode_amplitude(const ReservoirSpec& spec, int mode_n, double x) {
    const double l = spec.length();
    if (spec.is_cavity()) {
        if (mode_n < 1 || mode_n > spec.num_modes)
            throw std::domain_error("mode_amplitude: cavity mode index out of range");
        if (std::abs(x) > l / 2) throw std::domain_error("mode_amplitude: x outside the cavity");
        const double arg = mode_n * pi * x / l;
        return (mode_n % 2 == 0) ? complexd{std::sqrt(2.0) * std::sin(arg), 0.0}
                                 : complexd{std::sqrt(2.0) * std::cos(arg), 0.0};
    }
    if (mode_n < -spec.num_modes / 2 + 1 || mode_n > spec.num_modes / 2)
        throw std::domain_error("mode_amplitude: array mode number out of range");
    if (x < 0 || x >= l) throw std::domain_error("mode_amplitude: x outside the array");
    return std::exp(-iu * (2.0 * pi * mode_n / l) * x);
}

/// Timescales and rates that follow from a configuration.
struct DerivedConstants {
    double gamma = 0.0;          // Markovian intensity decay rate (2 Gamma_0)
    double v_s = 0.0;            // propagation velocity at the dipole frequency
    double t_fin = 0.0;          // finite-size recurrence time L/v_s
    double t_exc = 0.0;          // fast-exchange timescale (coarse-grain window)
    double markov_margin = 0.0;  // phi*N*pi (cavity) or phi*N (array); >> 1 for Markovian decay
    double rabi_exchange = 0.0;  // full exchange frequency Omega_C / Omega_CA
    double kappa = 0.0;          // array correction factor in Omega_CA
    double k_s = 0.0;            // wave number resonant with omega_s
};

inline DerivedConstants derived_constants(const SystemConfig& config) {
    config.validate();
    DerivedConstants d;
    const double ws = config.omega_s();
    const double gb2 = config.g0bar_sq();
    const ReservoirSpec& res = config.reservoir;
    if (res.is_cavity()) {
        d.v_s = 1.0;
        d.gamma = 2.0 * gb2;  // 2 g0bar^2 / c
        d.t_fin = res.length();
        d.t_exc = 2.0 * pi / ws;
        d.markov_margin = config.phi() * res.num_modes * pi;
        d.rabi_exchange = ws * std::sqrt(1.0 + config.theta() * config.theta());
        d.k_s = ws;
    } else {
        const double j = res.hopping, a = res.spacing;
        const double det = config.detuning();
        if (std::abs(det) >= j)
            throw std::domain_error("derived_constants: dipole frequency outside the array band");
        d.v_s = a * std::sqrt(j * j - det * det);
        d.gamma = 2.0 * gb2 / d.v_s;
        d.t_fin = res.length() / d.v_s;
        d.t_exc = 2.0 * pi / j;
        d.markov_margin = config.phi() * res.num_modes;
        d.kappa = pi * a / (res.num_modes * j * (1.0 - j / res.omega_c));
        const double th2 = config.theta() * config.theta();
        d.rabi_exchange = j * std::sqrt(1.0 + d.kappa * th2);
        d.k_s = std::acos(det / j) / a;
    }
    return d;
}

/// Effective single-dipole coupling to the array band: the exact mode sum
/// sum_n g0^2 omega_s/(omega_s - J cos k_n a), its large-N closed form
/// g0bar^2 omega_s/(pi J a) * pi/sqrt((omega_s/J)^2 - 1), and the simplified
/// normalizer g_CA = sqrt(g0bar^2 omega_s/(pi J a)) used by theta_CA.
struct EffectiveArrayCoupling {
    double mode_sum_sq = 0.0;
    double closed_form_sq = 0.0;
    double g_ca = 0.0;
};

inline EffectiveArrayCoupling effective_array_coupling(const SystemConfig& config) {
    config.validate();
    if (config.reservoir.is_cavity())
        throw std::domain_error("effective_array_coupling: cavity reservoir");
    const double ws = config.omega_s();
    const double j = config.reservoir.hopping, a = config.reservoir.spacing;
    if (ws <= j)
        throw std::domain_error("effective_array_coupling: requires omega_s/J > 1");
    const double g0sq = config.g0() * config.g0();
    EffectiveArrayCoupling out;
    const int n_modes = config.reservoir.num_modes;
    for (int i = 0; i < n_modes; ++i) {
        const int n = i - n_modes / 2 + 1;
        out.mode_sum_sq += g0sq * ws / (ws - j * std::cos(2.0 * pi * n / n_modes));
    }
    const double p = ws / j;
    out.closed_form_sq = config.g0bar_sq() * ws / (pi * j * a) * pi / std::sqrt(p * p - 1.0);
    out.g_ca = std::sqrt(config.g0bar_sq() * ws / (pi * j * a));
    return out;
}

} // namespace oscidissip

#endif
