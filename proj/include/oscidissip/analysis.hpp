#ifndef OSCIDISSIP_ANALYSIS_HPP
#define OSCIDISSIP_ANALYSIS_HPP

#include "dynamics.hpp"

#include <optional>

namespace oscidissip {

/// Centered rolling mean of width `window` (time units) over a uniform grid;
/// windows shrink one-sidedly at the boundaries; output grid equals input.
inline std::vector<double> coarse_grain(const std::vector<double>& values, double dt,
                                        double window) {
    if (dt <= 0) throw std::invalid_argument("coarse_grain: need positive sample spacing");
    if (window < dt) throw std::invalid_argument("coarse_grain: window shorter than sample spacing");
    const int n = static_cast<int>(values.size());
    int h = static_cast<int>(std::llround(window / (2.0 * dt)));
    if (h < 1) h = 1;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - h), hi = std::min(n - 1, i + h);
        double s = 0.0;
        for (int k = lo; k <= hi; ++k) s += values[k];
        out[i] = s / (hi - lo + 1);
    }
    return out;
}

enum class RegimeLabel { WC, USC, AdC };

inline const char* regime_name(RegimeLabel r) {
    switch (r) {
        case RegimeLabel::WC: return "WC";
        case RegimeLabel::USC: return "USC";
        default: return "AdC";
    }
}

/// WC: theta < 1e-1; USC: 1e-1 <= theta <= 1; AdC: theta > 1.
inline RegimeLabel classify_regime(double theta) {
    if (theta <= 0) throw std::invalid_argument("classify_regime: theta must be positive");
    if (theta < 1e-1) return RegimeLabel::WC;
    if (theta <= 1.0) return RegimeLabel::USC;
    return RegimeLabel::AdC;
}

/// Dominant angular frequency: peak of the magnitude DFT after mean removal,
/// refined by quadratic interpolation of the peak bin.
inline double dominant_frequency(const std::vector<double>& times,
                                 const std::vector<double>& values) {
    const std::size_t n = times.size();
    if (n < 64 || values.size() != n)
        throw std::invalid_argument("dominant_frequency: need >= 64 uniform samples");
    const double dt = times[1] - times[0];
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);

    const std::size_t kmax = n / 2;
    std::vector<double> mag(kmax + 1, 0.0);
    double peak = 0.0;
    std::size_t kpeak = 0;
    for (std::size_t k = 1; k <= kmax; ++k) {
        double sr = 0.0, si = 0.0;
        const double w = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = values[j] - mean;
            sr += v * std::cos(w * j);
            si += v * std::sin(w * j);
        }
        mag[k] = std::hypot(sr, si);
        if (mag[k] > peak) {
            peak = mag[k];
            kpeak = k;
        }
    }
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v - mean));
    if (kpeak == 0 || peak <= 1e-12 * static_cast<double>(n) * std::max(scale, 1e-300))
        throw std::invalid_argument("dominant_frequency: no spectral peak (constant series?)");

    double k_refined = static_cast<double>(kpeak);
    if (kpeak > 1 && kpeak < kmax) {
        const double ym = mag[kpeak - 1], y0 = mag[kpeak], yp = mag[kpeak + 1];
        const double denom = ym - 2.0 * y0 + yp;
        if (std::abs(denom) > 0) k_refined += 0.5 * (ym - yp) / denom;
    }
    return 2.0 * pi * k_refined / (static_cast<double>(n) * dt);
}

struct SweepRow {
    double theta = 0.0;
    bool stable = false;
    std::vector<double> lambdas;
    std::vector<double> chis;
    double beat = 0.0;  // lambda_2 - lambda_1
    std::vector<double> occupations;
};

struct SweepTable {
    int n_levels = 0;
    bool has_occupations = false;
    std::vector<SweepRow> rows;
};

/// One diagonalization per theta: lowest-k normal-mode frequencies, matter
/// fractions, the lambda_2 - lambda_1 beat, and (given an initial state) the
/// stationary polariton occupations.
inline SweepTable spectrum_vs_coupling(const SystemConfig& base,
                                       const std::vector<double>& thetas, int k,
                                       const std::optional<InitialStateSpec>& initial = {},
                                       Gauge gauge = Gauge::Coulomb, unsigned jobs = 1) {
    SweepTable table;
    table.n_levels = std::min(k, base.n_total());
    table.has_occupations = initial.has_value();
    table.rows.resize(thetas.size());
    std::vector<double> sorted = thetas;
    std::sort(sorted.begin(), sorted.end());

    parallel_for(sorted.size(), jobs, [&](std::size_t idx) {
        SweepRow row;
        row.theta = sorted[idx];
        const SystemConfig config = base.with_coupling(CouplingKind::Theta, row.theta);
        const auto qh = build_hamiltonian(config, gauge);
        const auto d = diagonalize(qh);
        row.stable = d.stable;
        if (d.stable) {
            for (int i = 0; i < table.n_levels; ++i) {
                row.lambdas.push_back(d.frequencies[i]);
                row.chis.push_back(matter_fraction(d, i, config.n_dipoles()));
            }
            if (d.n_total >= 2) row.beat = d.frequencies[1] - d.frequencies[0];
            if (initial) {
                const auto corr0 = initial_correlations(*initial, config);
                const auto cz = to_polariton_frame(corr0, d);
                const RealVector occ = polariton_occupations(cz);
                for (int i = 0; i < table.n_levels; ++i) row.occupations.push_back(occ[i]);
            }
        }
        table.rows[idx] = std::move(row);
    });
    return table;
}

} // namespace oscidissip

#endif
