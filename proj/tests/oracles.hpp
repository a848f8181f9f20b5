#pragma once

// Independent reference values used only by the test suites. Nothing here
// calls into the library.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace oracle {

/// K_0(x) from the ascending series
///   K_0(x) = -(ln(x/2) + gamma) I_0(x) + sum_k (x^2/4)^k / (k!)^2 * H_k.
inline double k0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double i0 = 1.0;
    double tail = 0.0;
    double harmonic = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        harmonic += 1.0 / k;
        i0 += term;
        tail += term * harmonic;
        if (term < 1e-18 * i0) break;
    }
    return -(std::log(0.5 * x) + std::numbers::egamma) * i0 + tail;
}

/// I_nu(x) for real nu >= 0 from the ascending series.
inline double i_series(double nu, double x) {
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
        const double log_term = (nu + 2.0 * k) * std::log(0.5 * x) - std::lgamma(k + 1.0) -
                                std::lgamma(nu + k + 1.0);
        const double term = std::exp(log_term);
        sum += term;
        if (k > x && term < 1e-18 * sum) break;
    }
    return sum;
}

/// K_{1/2}(x) = sqrt(pi/(2x)) e^{-x}.
inline double k_half(double x) { return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x); }

/// I_{1/2}(x) = sqrt(2/(pi x)) sinh x.
inline double i_half(double x) { return std::sqrt(2.0 / (std::numbers::pi * x)) * std::sinh(x); }

/// Sine-Gordon kink from the separable ODE psi' = -2 sin(psi): tan(psi/2) = e^{-2 sigma}.
inline double kink(double sigma, double width_scale = 1.0) {
    return 2.0 * std::atan(std::exp(-2.0 * width_scale * sigma));
}

/// Small deterministic generator for property tests (splitmix64).
struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }
};

}  // namespace oracle
