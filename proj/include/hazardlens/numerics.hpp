#pragma once

// Quadrature, root finding and unimodal maximization used as the numerical
// back end (and as independent oracles) for the analytic modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>
#include <vector>

#include "hazardlens/error.hpp"

namespace hazardlens::numerics {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
};

inline constexpr std::size_t kMaxQuadratureIntervals = std::size_t{1} << 14;

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the center.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class G>
Segment kronrod15(G& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = g(center);
    double kronrod = f_center * kKronrodWeights[7];
    double gauss = f_center * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        f1[j] = g(center - dx);
        f2[j] = g(center + dx);
        kronrod += kKronrodWeights[j] * (f1[j] + f2[j]);
        abs_sum += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(f_center - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
    }

    const double value = kronrod * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && err != 0.0) {
        err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * res_abs, err);
    }
    return {a, b, value, err};
}

}  // namespace detail

/// Integrates a survival-type function over [0, inf) using the substitution
/// t = u / (1 - u) and globally adaptive Gauss-Kronrod subdivision of
/// u in [0, 1).
///
/// Throws NumericError (carrying the best estimate and its error bound) when
/// rel_tol is not met within kMaxQuadratureIntervals subintervals, or when the
/// integrand produces a non-finite value.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double rel_tol) {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-2)) {
        throw DomainError("integrate_semi_infinite: rel_tol must lie in [1e-12, 1e-2]");
    }
    std::size_t evaluations = 0;
    auto transformed = [&](double u) {
        ++evaluations;
        const double w = 1.0 - u;
        const double fx = f(u / w);
        if (!std::isfinite(fx)) {
            throw NumericError("integrate_semi_infinite: integrand is not finite");
        }
        return fx == 0.0 ? 0.0 : fx / (w * w);
    };

    std::priority_queue<detail::Segment> heap;
    detail::Segment first = detail::kronrod15(transformed, 0.0, 1.0);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);

    while (total_err > rel_tol * std::abs(total)) {
        if (heap.size() >= kMaxQuadratureIntervals) {
            std::ostringstream msg;
            msg << "integrate_semi_infinite: no convergence after " << heap.size()
                << " subintervals (estimate " << total << ", error " << total_err << ")";
            throw NumericError(msg.str(), total, total_err);
        }
        detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        // Below this width the Kronrod nodes coalesce and the error estimate
        // collapses, so further splits would report false convergence.
        constexpr double kResolution = 1000.0 * std::numeric_limits<double>::epsilon();
        if (!(mid > worst.a && mid < worst.b) || worst.b - worst.a <= kResolution * std::abs(worst.b)) {
            throw NumericError("integrate_semi_infinite: subinterval below machine resolution",
                               total, total_err);
        }
        detail::Segment left = detail::kronrod15(transformed, worst.a, mid);
        detail::Segment right = detail::kronrod15(transformed, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed cancellation drift from the incremental updates.
    double value = 0.0;
    double err = 0.0;
    const std::size_t intervals = heap.size();
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, evaluations, intervals};
}

/// Brent's method (bisection, secant and inverse quadratic interpolation).
/// Returns x with the final bracket narrower than tol. Requires a sign change
/// on [a, b]; a root exactly at an endpoint is returned directly.
template <class F>
double find_root_bracketed(F&& f, double a, double b, double tol, int max_iterations = 300) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0) || std::isnan(fa) || std::isnan(fb)) {
        std::ostringstream msg;
        msg << "find_root_bracketed: no sign change on [" << a << ", " << b << "] (f(a)=" << fa
            << ", f(b)=" << fb << ")";
        throw BracketError(msg.str(), a, b, fa, fb);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    double c = b;
    double fc = fb;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NumericError("find_root_bracketed: iteration limit reached", b);
}

/// Golden-section search for the maximizer of a unimodal function on [a, b].
/// Returns the midpoint of the final bracket (width <= tol).
template <class F>
double argmax_unimodal(F&& f, double a, double b, double tol) {
    if (a > b) std::swap(a, b);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
        if (!(x1 < x2)) break;
    }
    return 0.5 * (a + b);
}

}  // namespace hazardlens::numerics
