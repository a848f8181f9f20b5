#include "cataplex/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cataplex/errors.hpp"

namespace cataplex::numeric {

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_refinements < 1) {
        throw DomainError("tolerance requires abs_tol > 0, rel_tol > 0, max_refinements >= 1");
    }
}

namespace {

struct Node {
    double x;
    double weight;  // dx/dt; zero marks a node to skip
};

// Trapezoidal sums of f(x(t)) x'(t) on nested lattices t = k h0 / 2^level.
template <class Transform>
QuadratureResult de_integrate(const Integrand& f, Transform transform, double t_min,
                              double t_max, const Tolerance& tol) {
    tol.validate();
    constexpr double h0 = 0.125;
    const double cutoff = tol.abs_tol * 1e-2;
    int evaluations = 0;

    auto sample = [&](double t) -> Complex {
        const Node node = transform(t);
        if (node.weight == 0.0) return {0.0, 0.0};
        ++evaluations;
        const Complex g = f(node.x) * node.weight;
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            std::ostringstream msg;
            msg << "non-finite integrand at abscissa " << node.x;
            throw NonConvergence(msg.str());
        }
        return g;
    };

    // Coarse scan over the full window locates the significant range.
    const long k_first = static_cast<long>(std::ceil(t_min / h0));
    const long k_last = static_cast<long>(std::floor(t_max / h0));
    std::vector<Complex> coarse;
    coarse.reserve(static_cast<std::size_t>(k_last - k_first + 1));
    long k_lo = k_last + 1;
    long k_hi = k_first - 1;
    for (long k = k_first; k <= k_last; ++k) {
        const Complex g = sample(static_cast<double>(k) * h0);
        coarse.push_back(g);
        if (std::abs(g) >= cutoff) {
            k_lo = std::min(k_lo, k);
            k_hi = std::max(k_hi, k);
        }
    }
    if (k_lo > k_hi) {
        k_lo = k_first;
        k_hi = k_last;
    } else {
        k_lo = std::max(k_first, k_lo - 1);
        k_hi = std::min(k_last, k_hi + 1);
    }

    Complex sum{0.0, 0.0};
    for (long k = k_lo; k <= k_hi; ++k) sum += coarse[static_cast<std::size_t>(k - k_first)];
    const double t_lo = static_cast<double>(k_lo) * h0;
    const double t_hi = static_cast<double>(k_hi) * h0;

    Complex previous = sum * h0;
    double h = h0;
    for (int level = 1; level <= tol.max_refinements; ++level) {
        h *= 0.5;
        Complex fresh{0.0, 0.0};
        const long count = std::lround((t_hi - t_lo) / (2.0 * h));
        for (long m = 0; m < count; ++m) {
            fresh += sample(t_lo + static_cast<double>(2 * m + 1) * h);
        }
        const Complex current = 0.5 * previous + h * fresh;
        const double err = std::abs(current - previous);
        if (level >= 2 && err <= std::max(tol.abs_tol, tol.rel_tol * std::abs(current))) {
            return {current, err, std::max(evaluations, 1)};
        }
        previous = current;
    }
    std::ostringstream msg;
    msg << "quadrature did not converge after " << tol.max_refinements
        << " refinements (value " << previous << ")";
    throw NonConvergence(msg.str());
}

}  // namespace

QuadratureResult integrate_real_line(const Integrand& f, const Tolerance& tol) {
    auto transform = [](double t) { return Node{std::sinh(t), std::cosh(t)}; };
    return de_integrate(f, transform, -10.0, 10.0, tol);
}

QuadratureResult integrate_half_line(const Integrand& f, const Tolerance& tol) {
    auto transform = [](double t) {
        const double et = std::exp(-t);
        const double x = std::exp(t - et);
        if (x == 0.0 || !std::isfinite(x)) return Node{0.0, 0.0};
        return Node{x, x * (1.0 + et)};
    };
    return de_integrate(f, transform, -5.0, 11.0, tol);
}

QuadratureResult integrate_interval(const Integrand& f, double a, double b,
                                    const Tolerance& tol) {
    if (!(b > a)) throw DomainError("integrate_interval requires b > a");
    const double half = 0.5 * (b - a);
    auto transform = [a, b, half](double t) {
        const double s = 0.5 * std::numbers::pi * std::sinh(t);
        const double cs = std::cosh(s);
        const double weight = half * 0.5 * std::numbers::pi * std::cosh(t) / (cs * cs);
        // Distance to the nearer endpoint, computed without cancellation.
        const double gap = 2.0 * half / (std::exp(2.0 * std::abs(s)) + 1.0);
        const double x = t >= 0.0 ? b - gap : a + gap;
        if (!(x > a && x < b) || weight == 0.0 || !std::isfinite(weight)) return Node{0.0, 0.0};
        return Node{x, weight};
    };
    return de_integrate(f, transform, -4.5, 4.5, tol);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

OdePath solve_ivp(const OdeRhs& rhs, std::vector<double> y0, double range_lo,
                  double range_hi, const Tolerance& tol, const OdeOptions& opts) {
    tol.validate();
    if (!(range_hi > range_lo)) throw DomainError("solve_ivp requires range_hi > range_lo");
    const std::size_t n = y0.size();

    std::vector<double> stops;
    for (double s : opts.stops) {
        if (s > range_lo && s < range_hi) stops.push_back(s);
    }
    std::sort(stops.begin(), stops.end());
    stops.push_back(range_hi);
    std::size_t next_stop = 0;

    OdePath path;
    path.abscissae.push_back(range_lo);
    path.states.push_back(y0);

    auto call = [&](double t, const std::vector<double>& y) {
        std::vector<double> out = rhs(t, y);
        if (out.size() != n) throw DomainError("rhs returned a vector of the wrong size");
        return out;
    };

    double t = range_lo;
    std::vector<double> y = std::move(y0);
    double h = (range_hi - range_lo) * 1e-3;
    if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

    std::vector<double> k1 = call(t, y), k2, k3, k4, k5, k6, k7;
    std::vector<double> tmp(n), y_new(n);
    long steps = 0;

    while (next_stop < stops.size()) {
        if (++steps > opts.max_steps) throw StepUnderflow("solve_ivp exceeded max_steps");
        const double target = stops[next_stop];
        bool lands = false;
        double step = h;
        if (opts.max_step > 0.0) step = std::min(step, opts.max_step);
        if (t + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
            step = target - t;
            lands = true;
        }
        if (step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            std::ostringstream msg;
            msg << "step size underflow at abscissa " << t;
            throw StepUnderflow(msg.str());
        }

        auto stage = [&](std::initializer_list<std::pair<double, const std::vector<double>*>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (const auto& [coef, k] : terms) acc += step * coef * (*k)[i];
                tmp[i] = acc;
            }
            return tmp;
        };
        k2 = call(t + c2 * step, stage({{a21, &k1}}));
        k3 = call(t + c3 * step, stage({{a31, &k1}, {a32, &k2}}));
        k4 = call(t + c4 * step, stage({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        k5 = call(t + c5 * step, stage({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        k6 = call(t + step, stage({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        for (std::size_t i = 0; i < n; ++i) {
            y_new[i] = y[i] + step * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        const double t_new = lands ? target : t + step;
        k7 = call(t_new, y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                     e6 * k6[i] + e7 * k7[i]);
            const double scale =
                tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (e / scale) * (e / scale);
        }
        err = n > 0 ? std::sqrt(err / static_cast<double>(n)) : 0.0;
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            t = t_new;
            y = y_new;
            k1 = k7;
            path.abscissae.push_back(t);
            path.states.push_back(y);
            if (lands) ++next_stop;
            const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
            // A landing step may be artificially short; keep the previous h then.
            h = lands ? std::max(h, step * grow) : step * grow;
        } else {
            const double shrink = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h = step * shrink;
        }
    }
    return path;
}

}  // namespace cataplex::numeric
