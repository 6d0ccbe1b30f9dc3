#include "hazardlens/hazard_models.hpp"

#include <charconv>
#include <cmath>

#include "hazardlens/error.hpp"
#include "hazardlens/kernels.hpp"
#include "hazardlens/numerics.hpp"

namespace hazardlens {
namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require_time(double t, const char* where) {
    if (!(t >= 0.0) || std::isinf(t)) {
        throw DomainError(std::string(where) + ": time must be finite and >= 0");
    }
}

std::string format_number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

double parse_number(std::string_view text, std::string_view spec) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw DomainError("invalid number '" + std::string(text) + "' in model spec '" +
                          std::string(spec) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

struct CumulativeHazard {
    double t;
    double operator()(const ExponentialHazard& m) const { return m.gamma() * t; }
    double operator()(const WeibullHazard& m) const { return std::pow(t / m.sigma(), m.shape()); }
    double operator()(const PolynomialHazard& m) const {
        const auto c = m.coefficients();
        double acc = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) acc = (acc + c[j]) * t;
        return acc;
    }
};

struct Hazard {
    double t;
    double operator()(const ExponentialHazard& m) const { return m.gamma(); }
    double operator()(const WeibullHazard& m) const {
        const double k = m.shape();
        return k / m.sigma() * std::pow(t / m.sigma(), k - 1.0);
    }
    double operator()(const PolynomialHazard& m) const {
        const auto c = m.coefficients();
        double acc = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * t + static_cast<double>(j + 1) * c[j];
        return acc;
    }
};

}  // namespace

HazardRatio::HazardRatio(double lambda) : lambda_(lambda) {
    if (!positive_finite(lambda)) throw DomainError("hazard ratio must be positive and finite");
}

ExponentialHazard::ExponentialHazard(double gamma) : gamma_(gamma) {
    if (!positive_finite(gamma)) throw DomainError("exponential rate must be positive and finite");
}

WeibullHazard::WeibullHazard(double sigma, double shape, WeibullForm origin)
    : sigma_(sigma), shape_(shape), origin_(origin) {
    if (!positive_finite(sigma) || !positive_finite(shape)) {
        throw DomainError("Weibull scale and shape must be positive and finite");
    }
}

WeibullHazard make_weibull(WeibullForm form, double s, double k) {
    if (!positive_finite(s) || !positive_finite(k)) {
        throw DomainError("make_weibull: s and k must be positive and finite");
    }
    switch (form) {
        case WeibullForm::a: return WeibullHazard(std::pow(s, -1.0 / k), k, form);
        case WeibullForm::b: return WeibullHazard(1.0 / s, k, form);
        case WeibullForm::c: return WeibullHazard(std::pow(k / s, 1.0 / k), k, form);
        case WeibullForm::d: return WeibullHazard(s, k, form);
    }
    throw DomainError("make_weibull: unknown form");
}

PolynomialHazard::PolynomialHazard(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
    if (coefficients_.empty() || !positive_finite(coefficients_.front())) {
        throw DomainError("polynomial hazard needs c_1 > 0");
    }
    for (double c : coefficients_) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw DomainError("polynomial hazard coefficients must be finite and >= 0");
        }
    }
    while (coefficients_.size() > 1 && coefficients_.back() == 0.0) coefficients_.pop_back();
}

double PolynomialHazard::derivative_at_origin(std::size_t j) const {
    if (j == 0) return 0.0;
    if (j > coefficients_.size()) return 0.0;
    return std::tgamma(static_cast<double>(j) + 1.0) * coefficients_[j - 1];
}

double HazardModel::cumulative_hazard(double t) const {
    require_time(t, "cumulative_hazard");
    return std::visit(CumulativeHazard{t}, model_);
}

double HazardModel::hazard(double t) const {
    require_time(t, "hazard");
    return std::visit(Hazard{t}, model_);
}

void HazardModel::cumulative_hazard(std::span<const double> t, std::span<double> out) const {
    if (out.size() < t.size()) throw DomainError("cumulative_hazard: output span too small");
    for (double ti : t) require_time(ti, "cumulative_hazard");
    if (const auto* poly = std::get_if<PolynomialHazard>(&model_)) {
        std::vector<double> coeffs(poly->degree() + 1, 0.0);
        std::copy(poly->coefficients().begin(), poly->coefficients().end(), coeffs.begin() + 1);
        kernels::polynomial_eval(coeffs, t, out);
        return;
    }
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = std::visit(CumulativeHazard{t[i]}, model_);
}

double HazardModel::inverse_cumulative_hazard(double y) const {
    if (!(y >= 0.0) || std::isinf(y)) {
        throw DomainError("inverse_cumulative_hazard: argument must be finite and >= 0");
    }
    if (const auto* e = std::get_if<ExponentialHazard>(&model_)) return y / e->gamma();
    if (const auto* w = std::get_if<WeibullHazard>(&model_)) {
        return w->sigma() * std::pow(y, 1.0 / w->shape());
    }
    if (y == 0.0) return 0.0;
    const auto& poly = std::get<PolynomialHazard>(model_);
    const auto H = [&](double t) { return CumulativeHazard{t}(poly); };
    double upper = 1.0;
    while (H(upper) <= y) {
        upper *= 2.0;
        if (!std::isfinite(upper)) throw NumericError("inverse_cumulative_hazard: bracket overflow");
    }
    return numerics::find_root_bracketed([&](double t) { return H(t) - y; }, 0.0, upper, 0.0);
}

std::string HazardModel::describe() const {
    struct Describe {
        std::string operator()(const ExponentialHazard& m) const {
            return "exp:" + format_number(m.gamma());
        }
        std::string operator()(const WeibullHazard& m) const {
            return "weibull:d:" + format_number(m.sigma()) + ":" + format_number(m.shape());
        }
        std::string operator()(const PolynomialHazard& m) const {
            std::string out = "poly:";
            const auto c = m.coefficients();
            for (std::size_t j = 0; j < c.size(); ++j) {
                if (j) out += ',';
                out += format_number(c[j]);
            }
            return out;
        }
    };
    return std::visit(Describe{}, model_);
}

double cumulative_hazard(const HazardModel& model, double t) { return model.cumulative_hazard(t); }

double survival(const HazardModel& model, const HazardRatio& hr, double t) {
    require_time(t, "survival");
    return std::exp(-hr.value() * model.cumulative_hazard(t));
}

void survival(const HazardModel& model, const HazardRatio& hr, std::span<const double> t,
              std::span<double> out) {
    model.cumulative_hazard(t, out);
    kernels::exp_neg_scaled(hr.value(), out.first(t.size()), out.first(t.size()));
}

double inverse_cumulative_hazard(const HazardModel& model, double y) {
    return model.inverse_cumulative_hazard(y);
}

double average_hazard(const HazardModel& model, double a, double b) {
    require_time(a, "average_hazard");
    require_time(b, "average_hazard");
    if (!(a < b)) throw DomainError("average_hazard: need a < b");
    return (model.cumulative_hazard(b) - model.cumulative_hazard(a)) / (b - a);
}

std::string_view to_string(WeibullForm form) noexcept {
    switch (form) {
        case WeibullForm::a: return "a";
        case WeibullForm::b: return "b";
        case WeibullForm::c: return "c";
        case WeibullForm::d: return "d";
    }
    return "?";
}

HazardModel parse_model(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string_view family = parts.front();
    if (family == "exp" && parts.size() == 2) {
        return ExponentialHazard(parse_number(parts[1], spec));
    }
    if (family == "weibull" && parts.size() == 4) {
        WeibullForm form;
        if (parts[1] == "a") form = WeibullForm::a;
        else if (parts[1] == "b") form = WeibullForm::b;
        else if (parts[1] == "c") form = WeibullForm::c;
        else if (parts[1] == "d") form = WeibullForm::d;
        else throw DomainError("unknown Weibull form '" + std::string(parts[1]) + "' (use a|b|c|d)");
        return make_weibull(form, parse_number(parts[2], spec), parse_number(parts[3], spec));
    }
    if (family == "poly" && parts.size() == 2) {
        std::vector<double> coeffs;
        for (auto piece : split(parts[1], ',')) coeffs.push_back(parse_number(piece, spec));
        return PolynomialHazard(std::move(coeffs));
    }
    throw DomainError("cannot parse model spec '" + std::string(spec) +
                      "' (expected exp:<gamma>, weibull:<form>:<s>:<k> or poly:<c1>,<c2>,...)");
}

}  // namespace hazardlens
