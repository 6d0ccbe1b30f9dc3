#include "hazardlens/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hazardlens/error.hpp"

namespace hazardlens {

TruncatedSeries::TruncatedSeries(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty()) throw DomainError("TruncatedSeries: need at least one coefficient");
}

TruncatedSeries TruncatedSeries::constant(double value, std::size_t order) {
    std::vector<double> c(order + 1, 0.0);
    c[0] = value;
    return TruncatedSeries(std::move(c));
}

TruncatedSeries TruncatedSeries::truncated(std::size_t order) const {
    if (order > this->order()) {
        throw TruncationError("TruncatedSeries: cannot extend order " +
                              std::to_string(this->order()) + " to " + std::to_string(order));
    }
    return TruncatedSeries(
        std::vector<double>(coefficients_.begin(), coefficients_.begin() + order + 1));
}

TruncatedSeries TruncatedSeries::derivative() const {
    if (order() == 0) throw TruncationError("TruncatedSeries: derivative of an order-0 series");
    std::vector<double> d(order());
    for (std::size_t i = 1; i < coefficients_.size(); ++i) {
        d[i - 1] = static_cast<double>(i) * coefficients_[i];
    }
    return TruncatedSeries(std::move(d));
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; i + j <= n; ++j) c[i + j] += a.coefficients_[i] * b.coefficients_[j];
    }
    return TruncatedSeries(std::move(c));
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    const std::size_t n = std::min(a.order(), b.order());
    std::vector<double> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) c[i] = a.coefficients_[i] + b.coefficients_[i];
    return TruncatedSeries(std::move(c));
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a + (-1.0) * b;
}

TruncatedSeries operator*(double scale, const TruncatedSeries& s) {
    std::vector<double> c = s.coefficients_;
    for (double& v : c) v *= scale;
    return TruncatedSeries(std::move(c));
}

TruncatedSeries series_reciprocal(const TruncatedSeries& s) {
    const double a0 = s[0];
    if (a0 == 0.0) throw SingularSeriesError("series_reciprocal: zero constant term");
    const std::size_t n = s.order();
    std::vector<double> r(n + 1, 0.0);
    r[0] = 1.0 / a0;
    for (std::size_t k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) acc += s[j] * r[k - j];
        r[k] = -acc / a0;
    }
    return TruncatedSeries(std::move(r));
}

TruncatedSeries apply_watson_operator(const TruncatedSeries& s, const TruncatedSeries& h_prime) {
    if (s.order() == 0) throw TruncationError("apply_watson_operator: series order exhausted");
    const TruncatedSeries ds = s.derivative();
    if (h_prime.order() < ds.order()) {
        throw TruncationError("apply_watson_operator: H' series is shorter than the operand");
    }
    return series_reciprocal(h_prime.truncated(ds.order())) * ds;
}

WatsonExpansion watson_expansion(const PolynomialHazard& model, const HazardRatio& hr, int r_max) {
    if (r_max < 0) throw DomainError("watson_expansion: r_max must be >= 0");
    if (r_max > kMaxWatsonOrder) {
        throw TruncationError("watson_expansion: r_max " + std::to_string(r_max) +
                              " exceeds the supported order " + std::to_string(kMaxWatsonOrder));
    }
    const auto order = static_cast<std::size_t>(r_max);
    const double lambda = hr.value();

    // Taylor series of (lambda H)'(t) = lambda sum_j j c_j t^(j-1).
    const auto c = model.coefficients();
    std::vector<double> hp(order + 1, 0.0);
    for (std::size_t j = 0; j < c.size() && j <= order; ++j) {
        hp[j] = lambda * static_cast<double>(j + 1) * c[j];
    }
    const TruncatedSeries h_prime(std::move(hp));
    const double lambda_h1 = h_prime[0];

    WatsonExpansion out;
    out.prefactor = 1.0 / lambda_h1;
    const double h1 = model.derivative_at_origin(1);
    const double h2 = model.derivative_at_origin(2);
    out.closeness = h2 > 0.0 ? h1 / std::sqrt(h2) : std::numeric_limits<double>::infinity();

    TruncatedSeries current = series_reciprocal(h_prime);
    out.terms.push_back(lambda_h1 * current[0]);
    for (std::size_t r = 1; r <= order; ++r) {
        current = apply_watson_operator(current, h_prime);
        out.terms.push_back(lambda_h1 * current[0]);
    }

    double running = 0.0;
    for (double term : out.terms) {
        running += term;
        out.partial_sums.push_back(out.prefactor * running);
    }

    // Smallest term before |L_r| starts to grow; ties keep the earlier index.
    if (order >= 1) {
        constexpr double kTieTolerance = 1e-12;
        std::size_t best = 1;
        for (std::size_t r = 1; r + 1 <= order; ++r) {
            const double here = std::abs(out.terms[r]);
            const double next = std::abs(out.terms[r + 1]);
            if (next > here * (1.0 + kTieTolerance)) break;
            if (next < std::abs(out.terms[best]) * (1.0 - kTieTolerance)) best = r + 1;
        }
        out.optimal_index = best;
    }
    return out;
}

double mst_asymptotic_ratio(const PolynomialHazard& model, const HazardRatio& hr, int r_max) {
    const WatsonExpansion control = watson_expansion(model, HazardRatio(1.0), r_max);
    const WatsonExpansion experimental = watson_expansion(model, hr, r_max);
    // The prefactor ratio is lambda exactly; only the bracketed sums differ.
    double num = 0.0;
    double den = 0.0;
    for (double term : control.terms) num += term;
    for (double term : experimental.terms) den += term;
    if (!(den > 0.0)) {
        throw DivergenceError("mst_asymptotic_ratio: experimental partial sum is not positive", den);
    }
    if (!(num > 0.0)) {
        throw DivergenceError("mst_asymptotic_ratio: control partial sum is not positive", num);
    }
    return hr.value() * num / den;
}

double mst_ratio_three_term(double h1, double h2, double h3, const HazardRatio& hr) {
    if (!(h1 > 0.0) || !std::isfinite(h1)) throw DomainError("mst_ratio_three_term: H1 must be > 0");
    const double lambda = hr.value();
    const double h1_2 = h1 * h1;
    const double h1_3 = h1_2 * h1;
    const double h1_4 = h1_2 * h1_2;
    const double numerator = 1.0 - h2 / h1_2 + 3.0 * h2 * h2 / h1_4 - h3 / h1_3;
    const double denominator = 1.0 - h2 / (lambda * h1_2) + 3.0 * h2 * h2 / (lambda * lambda * h1_4) -
                               h3 / (lambda * lambda * h1_3);
    if (denominator == 0.0 || !std::isfinite(denominator)) {
        throw DivergenceError("mst_ratio_three_term: vanishing denominator", denominator);
    }
    return lambda * numerator / denominator;
}

}  // namespace hazardlens
