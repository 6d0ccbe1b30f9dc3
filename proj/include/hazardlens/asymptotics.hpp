#pragma once

// Asymptotic expansion of the mean survival time integral
//
//   int_0^inf exp(-H(t)) dt  ~  H_1^{-1} sum_r L_r,
//   L_r = H_1 [(1/H') d/dt]^r (1/H') evaluated at t = 0,
//
// computed with truncated Taylor series about the origin.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hazardlens/hazard_models.hpp"

namespace hazardlens {

/// Taylor coefficients a_0..a_n about t = 0. Every operation is exact in the
/// coefficients up to the stored order and never reads past it.
class TruncatedSeries {
public:
    explicit TruncatedSeries(std::vector<double> coefficients);
    TruncatedSeries(std::initializer_list<double> coefficients)
        : TruncatedSeries(std::vector<double>(coefficients)) {}

    static TruncatedSeries constant(double value, std::size_t order);

    std::size_t order() const noexcept { return coefficients_.size() - 1; }
    double operator[](std::size_t i) const { return coefficients_.at(i); }
    std::span<const double> coefficients() const noexcept { return coefficients_; }

    TruncatedSeries truncated(std::size_t order) const;
    /// Loses one order; throws TruncationError on an order-0 series.
    TruncatedSeries derivative() const;

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(double scale, const TruncatedSeries& s);

private:
    std::vector<double> coefficients_;
};

/// 1/s to the same order. Throws SingularSeriesError when a_0 == 0.
TruncatedSeries series_reciprocal(const TruncatedSeries& s);

/// One application of (1/H') d/dt: series_reciprocal(h_prime) * s', order s.order()-1.
TruncatedSeries apply_watson_operator(const TruncatedSeries& s, const TruncatedSeries& h_prime);

inline constexpr int kMaxWatsonOrder = 8;

struct WatsonExpansion {
    std::vector<double> terms;         // L_0..L_R
    std::vector<double> partial_sums;  // prefactor * sum_{i<=r} L_i
    double prefactor = 0.0;            // 1 / (lambda H_1)
    std::size_t optimal_index = 0;     // smallest |L_r| before the first increase
    double closeness = 0.0;            // H_1 / sqrt(H_2), +inf when H_2 = 0

    double optimal_sum() const { return partial_sums.at(optimal_index); }
};

/// Expansion of int exp(-lambda H(t)) dt for a polynomial baseline, r_max <= 8.
WatsonExpansion watson_expansion(const PolynomialHazard& model, const HazardRatio& hr, int r_max);

/// Control over experimental partial sums at r_max. Throws DivergenceError
/// when either partial sum is not positive.
double mst_asymptotic_ratio(const PolynomialHazard& model, const HazardRatio& hr, int r_max);

/// The closed three-term MST ratio
///   lambda (1 - H2/H1^2 + 3H2^2/H1^4 - H3/H1^3)
///        / (1 - H2/(lambda H1^2) + 3H2^2/(lambda^2 H1^4) - H3/(lambda^2 H1^3)).
double mst_ratio_three_term(double h1, double h2, double h3, const HazardRatio& hr);

}  // namespace hazardlens
