#ifndef OSCIDISSIP_CORE_HPP
#define OSCIDISSIP_CORE_HPP

#include <atomic>
#include <complex>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace oscidissip {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr complexd iu{0.0, 1.0};

/// Max-abs-entry norm used for all matrix tolerance checks.
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline bool nearly_equal(double a, double b, double rel, double abs_floor = 0.0) {
    return std::abs(a - b) <= std::max(rel * std::max(std::abs(a), std::abs(b)), abs_floor);
}

/// Compensated accumulator (error-free products + Neumaier summation).
/// Used where inner products of large, cancelling terms must be resolved
/// well below double rounding of the naive sum.
struct dd_accum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    void add_prod(double a, double b) {
        double p = a * b;
        double err = std::fma(a, b, -p);
        add(p);
        add(err);
    }
    double value() const { return sum + comp; }
};

/// conj(x) . y with compensated arithmetic.
inline complexd dd_dot(const Vector& x, const Vector& y) {
    dd_accum re, im;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double xr = x[k].real(), xi = x[k].imag();
        const double yr = y[k].real(), yi = y[k].imag();
        re.add_prod(xr, yr);
        re.add_prod(xi, yi);
        im.add_prod(xr, yi);
        im.add_prod(-xi, yr);
    }
    return {re.value(), im.value()};
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; fn must only touch slot i.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    jobs = std::min<unsigned>(jobs, n);
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

inline unsigned default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

} // namespace oscidissip

#endif
