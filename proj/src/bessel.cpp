#include "cataplex/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cataplex/errors.hpp"

namespace cataplex::bessel {

using numeric::Tolerance;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogUnderflow = -745.0;

// Absolute tolerance scaled to the size of the non-oscillating envelope
// int e^{-x (cosh X - 1)} dX, which grows like ln(2/x) as x -> 0.
Tolerance integral_tolerance(double re_w) {
    const double envelope = std::max(1.0, std::log1p(2.0 / re_w));
    return Tolerance{1e-15 * envelope, 1e-14, 18};
}

// cosh X - 1 without cancellation near X = 0.
double cosh_m1(double x) {
    const double s = std::sinh(0.5 * x);
    return 2.0 * s * s;
}

// Coefficient ratio a_k / a_{k-1} of the large-argument series.
Complex series_ratio(Complex four_nu2, int k) {
    const double odd = 2.0 * k - 1.0;
    return (four_nu2 - odd * odd) / (8.0 * k);
}

}  // namespace

ImaginaryOrder::ImaginaryOrder(double mu) : mu_(std::abs(mu)) {
    if (!std::isfinite(mu)) throw DomainError("imaginary order must be finite");
}

const char* to_string(Regime regime) {
    return regime == Regime::Integral ? "integral" : "asymptotic";
}

double k_imag(ImaginaryOrder order, double x) {
    return k_imag(order, x, integral_tolerance(x > 0.0 ? x : 1.0));
}

double k_imag(ImaginaryOrder order, double x, const Tolerance& tol) {
    if (!(x > 0.0)) throw DomainError("k_imag requires x > 0");
    const double mu = order.mu();
    // Integrand scaled by e^{x} so that its peak is 1/2 for every x.
    auto integrand = [x, mu](double big_x) -> Complex {
        const double expo = -x * cosh_m1(big_x);
        if (expo < kLogUnderflow) return 0.0;
        return 0.5 * std::exp(expo) * std::cos(mu * big_x);
    };
    const auto r = numeric::integrate_real_line(integrand, tol);
    return std::exp(-x) * r.value.real();
}

Complex k_integral(Complex nu, Complex w) {
    if (!(w.real() > 0.0)) throw OutsideDomain("integral representation needs Re w > 0");
    auto integrand = [nu, w](double big_x) -> Complex {
        const double c = cosh_m1(big_x);
        const double re = -w.real() * c + nu.real() * big_x;
        if (re < kLogUnderflow) return 0.0;
        const double im = -w.imag() * c + nu.imag() * big_x;
        return 0.5 * std::exp(re) * Complex(std::cos(im), std::sin(im));
    };
    const auto r = numeric::integrate_real_line(integrand, integral_tolerance(w.real()));
    return std::exp(-w) * r.value;
}

double k_real(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("k_real requires x > 0");
    return k_integral(Complex(nu, 0.0), Complex(x, 0.0)).real();
}

namespace {

LogK log_k_integral_exp(Complex nu, Complex z) {
    const Complex w = std::exp(z);
    if (!(w.real() > 0.0)) throw OutsideDomain("integral representation needs Re w > 0");
    auto integrand = [nu, w](double big_x) -> Complex {
        const double c = cosh_m1(big_x);
        const double re = -w.real() * c + nu.real() * big_x;
        if (re < kLogUnderflow) return 0.0;
        const double im = -w.imag() * c + nu.imag() * big_x;
        return 0.5 * std::exp(re) * Complex(std::cos(im), std::sin(im));
    };
    const auto r = numeric::integrate_real_line(integrand, integral_tolerance(w.real()));
    if (r.value == Complex(0.0, 0.0)) throw BesselZero("K vanishes at the requested point");
    return LogK{-w + std::log(r.value), Regime::Integral, 0};
}

void check_sector(Complex z) {
    if (!(std::abs(z.imag()) < 1.5 * kPi)) {
        throw DomainError("large-argument series needs |arg w| < 3 pi / 2");
    }
}

// ln of sqrt(pi/(2w)) e^{-w} with arg w = Im z.
Complex log_leading(Complex z) {
    return 0.5 * std::log(kPi / 2.0) - 0.5 * z - std::exp(z);
}

}  // namespace

Complex log_k_asymptotic_exp(Complex nu, Complex z, SeriesOrder order) {
    if (order.nterms < 0) throw DomainError("series order must be nonnegative");
    check_sector(z);
    const Complex inv_w = std::exp(-z);
    const Complex four_nu2 = 4.0 * nu * nu;
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int k = 1; k <= order.nterms; ++k) {
        term *= series_ratio(four_nu2, k) * inv_w;
        sum += term;
    }
    return log_leading(z) + std::log(sum);
}

LogK log_k_asymptotic_auto(Complex nu, Complex z) {
    check_sector(z);
    const Complex inv_w = std::exp(-z);
    const Complex four_nu2 = 4.0 * nu * nu;
    Complex term = 1.0;
    Complex sum = 1.0;
    int used = 0;
    for (int k = 1; k <= 80; ++k) {
        const Complex next = term * series_ratio(four_nu2, k) * inv_w;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        used = k;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return LogK{log_leading(z) + std::log(sum), Regime::Asymptotic, used};
}

Complex k_asymptotic(Complex nu, Complex w, SeriesOrder order) {
    if (w == Complex(0.0, 0.0)) throw DomainError("k_asymptotic requires w != 0");
    return std::exp(log_k_asymptotic_exp(nu, std::log(w), order));
}

LogK log_k_exp(Complex nu, Complex z) {
    if (!(std::abs(z.imag()) < 1.5 * kPi)) {
        throw OutsideDomain("argument outside |arg w| < 3 pi / 2");
    }
    if (z.real() >= std::log(kRegimeSwitchRadius)) return log_k_asymptotic_auto(nu, z);
    if (std::abs(z.imag()) < 0.5 * kPi) return log_k_integral_exp(nu, z);
    throw OutsideDomain("|w| below the series radius with Re w <= 0");
}

Complex k_complex(Complex nu, Complex w) {
    if (w == Complex(0.0, 0.0)) throw OutsideDomain("k_complex undefined at w = 0");
    if (std::abs(w) >= kRegimeSwitchRadius) {
        return std::exp(log_k_asymptotic_auto(nu, std::log(w)).value);
    }
    return k_integral(nu, w);
}

double i_real_scaled(double nu, double x) {
    if (!(nu >= 0.0)) throw DomainError("i_real requires nu >= 0");
    if (!(x >= 0.0)) throw DomainError("i_real requires x >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (std::isinf(x)) return 0.0;

    if (x > 50.0 + nu * nu) {
        // e^{-x} I_nu(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(nu) x^{-k}
        const double four_nu2 = 4.0 * nu * nu;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k <= 80; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double next = -term * (four_nu2 - odd * odd) / (8.0 * k * x);
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        return sum / std::sqrt(2.0 * kPi * x);
    }

    const double log_half = std::log(0.5 * x);
    double sum = 0.0;
    for (int k = 0; k < 10'000; ++k) {
        const double log_term = (nu + 2.0 * k) * log_half - std::lgamma(k + 1.0) -
                                std::lgamma(nu + k + 1.0) - x;
        const double term = std::exp(log_term);
        sum += term;
        if (k > 0.5 * x && term <= 1e-17 * sum) break;
    }
    return sum;
}

double i_real(double nu, double x) {
    const double scaled = i_real_scaled(nu, x);
    if (scaled == 0.0) return 0.0;
    const double log_value = std::log(scaled) + x;
    if (log_value > std::log(std::numeric_limits<double>::max())) {
        throw Overflow("I_nu(x) exceeds the double range");
    }
    return scaled * std::exp(x);
}

}  // namespace cataplex::bessel
