#pragma once

// Baseline hazard families and the proportional-hazards transform.
//
// A baseline is described by its cumulative hazard H(t). The experimental arm
// under hazard ratio lambda has cumulative hazard lambda * H(t), so its
// survival is exp(-lambda * H(t)) = S_0(t)^lambda.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hazardlens {

/// Multiplicative treatment effect on the baseline hazard. Any positive
/// finite value; lambda < 1 is protective.
class HazardRatio {
public:
    explicit HazardRatio(double lambda);

    double value() const noexcept { return lambda_; }
    bool protective() const noexcept { return lambda_ < 1.0; }

private:
    double lambda_;
};

/// Constant hazard gamma (events per unit time); H(t) = gamma * t.
class ExponentialHazard {
public:
    explicit ExponentialHazard(double gamma);

    double gamma() const noexcept { return gamma_; }

private:
    double gamma_;
};

/// The four textbook ways of writing a Weibull hazard with shape k and a
/// scale-like parameter s:
///   a: s k t^(k-1)      b: s^k k t^(k-1)
///   c: s t^(k-1)        d: s^(-k) k t^(k-1)
enum class WeibullForm { a, b, c, d };

/// Weibull baseline stored canonically as H(t) = (t / sigma)^k. The form it
/// was constructed from is kept for reporting only.
class WeibullHazard {
public:
    WeibullHazard(double sigma, double shape, WeibullForm origin = WeibullForm::d);

    double sigma() const noexcept { return sigma_; }
    double shape() const noexcept { return shape_; }
    WeibullForm origin_form() const noexcept { return origin_; }

private:
    double sigma_;
    double shape_;
    WeibullForm origin_;
};

/// Converts any of the four Weibull parameterizations to canonical form.
WeibullHazard make_weibull(WeibullForm form, double s, double k);

/// H(t) = sum_{j>=1} c_j t^j with c_1 > 0 and every c_j >= 0, so H is a valid
/// (monotone, unbounded) cumulative hazard with H(0) = 0.
class PolynomialHazard {
public:
    /// coefficients[0] is c_1, coefficients[1] is c_2, ...
    explicit PolynomialHazard(std::vector<double> coefficients);

    std::span<const double> coefficients() const noexcept { return coefficients_; }
    std::size_t degree() const noexcept { return coefficients_.size(); }

    /// j-th derivative of H at the origin, H_j = j! c_j (zero beyond the degree).
    double derivative_at_origin(std::size_t j) const;

private:
    std::vector<double> coefficients_;
};

class HazardModel {
public:
    using Variant = std::variant<ExponentialHazard, WeibullHazard, PolynomialHazard>;

    HazardModel(ExponentialHazard m) : model_(std::move(m)) {}
    HazardModel(WeibullHazard m) : model_(std::move(m)) {}
    HazardModel(PolynomialHazard m) : model_(std::move(m)) {}

    const Variant& variant() const noexcept { return model_; }

    template <class T>
    const T* get_if() const noexcept {
        return std::get_if<T>(&model_);
    }

    double cumulative_hazard(double t) const;
    double hazard(double t) const;
    double inverse_cumulative_hazard(double y) const;

    /// Cumulative hazard at every t (vectorized where the family allows).
    void cumulative_hazard(std::span<const double> t, std::span<double> out) const;

    /// Canonical spec string, e.g. "exp:0.1", "weibull:d:2:2", "poly:0.1,0.01".
    std::string describe() const;

private:
    Variant model_;
};

double cumulative_hazard(const HazardModel& model, double t);
double survival(const HazardModel& model, const HazardRatio& hr, double t);
double inverse_cumulative_hazard(const HazardModel& model, double y);
double average_hazard(const HazardModel& model, double a, double b);

/// exp(-lambda H(t_i)) for every t_i.
void survival(const HazardModel& model, const HazardRatio& hr, std::span<const double> t,
              std::span<double> out);

/// Parses `exp:<gamma>`, `weibull:<form>:<s>:<k>` (form one of a|b|c|d) or
/// `poly:<c1>,<c2>,...`. Throws DomainError on anything else.
HazardModel parse_model(std::string_view spec);

std::string_view to_string(WeibullForm form) noexcept;

}  // namespace hazardlens
