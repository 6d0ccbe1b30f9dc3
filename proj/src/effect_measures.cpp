#include "hazardlens/effect_measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "hazardlens/error.hpp"
#include "hazardlens/numerics.hpp"

namespace hazardlens {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

}  // namespace

double arr(const HazardModel& model, const HazardRatio& hr, double t) {
    const double lambda = hr.value();
    const double h = model.cumulative_hazard(t);
    // exp(-lambda H) (1 - exp(-(1 - lambda) H)): exact zero at lambda = 1 and
    // no cancellation for small H.
    return -std::exp(-lambda * h) * std::expm1(-(1.0 - lambda) * h);
}

ArrSensitivities arr_sensitivities(const HazardModel& model, const HazardRatio& hr, double t) {
    const auto* exponential = model.get_if<ExponentialHazard>();
    if (exponential == nullptr) {
        throw UnsupportedModelError("arr_sensitivities: requires an exponential baseline, got " +
                                    model.describe());
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("arr_sensitivities: t must be >= 0");
    const double gamma = exponential->gamma();
    const double lambda = hr.value();
    const double treated = std::exp(-lambda * gamma * t);
    return {-gamma * t * treated, t * (std::exp(-gamma * t) - lambda * treated)};
}

Nnt nnt(const HazardModel& model, const HazardRatio& hr, double t) {
    const double a = arr(model, hr, t);
    constexpr double kMaxDisplay = 9.0e18;
    if (!(a > 0.0)) return {std::numeric_limits<double>::infinity(), std::nullopt};
    const double raw = 1.0 / a;
    if (!(raw < kMaxDisplay)) return {raw, std::nullopt};
    return {raw, std::lround(raw)};
}

double median_survival(const HazardModel& model, const HazardRatio& hr) {
    if (const auto* e = model.get_if<ExponentialHazard>()) return kLn2 / (e->gamma() * hr.value());
    return model.inverse_cumulative_hazard(kLn2 / hr.value());
}

double median_difference(const HazardModel& model, const HazardRatio& hr) {
    if (hr.value() == 1.0) return 0.0;
    if (const auto* e = model.get_if<ExponentialHazard>()) {
        return kLn2 / (e->gamma() * hr.value()) - kLn2 / e->gamma();
    }
    return median_survival(model, hr) - median_survival(model, HazardRatio(1.0));
}

MdDecomposition md_decomposition(const HazardModel& model, const HazardRatio& hr) {
    const double lambda = hr.value();
    if (!(lambda < 1.0)) {
        throw DomainError("md_decomposition: requires a protective hazard ratio (lambda < 1)");
    }
    MdDecomposition out{};
    out.t_median_control = median_survival(model, HazardRatio(1.0));
    out.t_median_experimental = median_survival(model, hr);
    out.delta_avg_hazard = average_hazard(model, out.t_median_control, out.t_median_experimental);
    out.md_direct = out.t_median_experimental - out.t_median_control;
    out.md_identity = (1.0 - lambda) * kLn2 / (lambda * out.delta_avg_hazard);
    return out;
}

double critical_constant(double lambda) {
    require_positive(lambda, "hazard ratio");
    if (lambda == 1.0) return 1.0;
    const double delta = lambda - 1.0;
    return std::log1p(delta) / delta;
}

CriticalPoints critical_points(double gamma, const HazardRatio& hr, double t) {
    require_positive(gamma, "critical_points: gamma");
    require_positive(t, "critical_points: t");
    const double lambda = hr.value();
    const double c = critical_constant(lambda);
    CriticalPoints out{};
    out.gamma_crit = c / t;
    out.t_star = c / gamma;
    if (lambda == 1.0) {
        out.limit = true;
        out.arr_at_tstar = 0.0;
    } else {
        out.arr_at_tstar = std::pow(lambda, lambda / (1.0 - lambda)) -
                           std::pow(lambda, 1.0 / (1.0 - lambda));
    }
    out.nnt_at_tstar = out.arr_at_tstar > 0.0 ? 1.0 / out.arr_at_tstar
                                              : std::numeric_limits<double>::infinity();
    return out;
}

double mean_survival_time(const HazardModel& model, const HazardRatio& hr) {
    const double lambda = hr.value();
    if (const auto* e = model.get_if<ExponentialHazard>()) return 1.0 / (e->gamma() * lambda);
    if (const auto* w = model.get_if<WeibullHazard>()) {
        const double k = w->shape();
        return w->sigma() * std::pow(lambda, -1.0 / k) * std::tgamma(1.0 + 1.0 / k);
    }
    return mean_survival_time_quadrature(model, hr, 1e-10);
}

double mean_survival_time_quadrature(const HazardModel& model, const HazardRatio& hr,
                                     double rel_tol) {
    const double lambda = hr.value();
    return numerics::integrate_semi_infinite(
               [&](double t) { return std::exp(-lambda * model.cumulative_hazard(t)); }, rel_tol)
        .value;
}

double mst_ratio(const HazardModel& model, const HazardRatio& hr) {
    return mean_survival_time(model, HazardRatio(1.0)) / mean_survival_time(model, hr);
}

CostInputs::CostInputs(double c0, double ce) : c0_(c0), ce_(ce) {
    if (!(c0 >= 0.0) || !(ce >= 0.0) || !std::isfinite(c0) || !std::isfinite(ce)) {
        throw DomainError("costs must be finite and >= 0");
    }
    if (c0 == 0.0 && ce == 0.0) throw DomainError("costs must not both be zero");
}

Icer icer(const CostInputs& costs, double mst_control, double mst_experimental) {
    require_positive(mst_control, "icer: control MST");
    require_positive(mst_experimental, "icer: experimental MST");
    if (mst_control == mst_experimental) throw DomainError("icer: no incremental benefit");
    const double exact = (costs.ce() * mst_experimental - costs.c0() * mst_control) /
                         (mst_experimental - mst_control);
    const double rho = mst_control / mst_experimental;
    return {exact, costs.ce() / (1.0 - rho)};
}

EffectSummary summarize(const HazardModel& model, const HazardRatio& hr, double t) {
    EffectSummary out{};
    out.eval_time = t;
    out.arr = arr(model, hr, t);
    out.nnt = nnt(model, hr, t);
    out.md = median_difference(model, hr);
    out.mst_control = mean_survival_time(model, HazardRatio(1.0));
    out.mst_experimental = mean_survival_time(model, hr);
    out.mst_ratio = out.mst_control / out.mst_experimental;
    return out;
}

}  // namespace hazardlens
