#pragma once

// Absolute and relative treatment-effect measures under proportional hazards:
// ARR, NNT, median difference, mean survival time and ICER, plus the
// critical points of ARR for constant-hazard baselines.

#include <optional>

#include "hazardlens/hazard_models.hpp"

namespace hazardlens {

/// ARR(t) = S_E(t) - S_C(t) = exp(-lambda H(t)) - exp(-H(t)).
double arr(const HazardModel& model, const HazardRatio& hr, double t);

struct ArrSensitivities {
    double d_lambda;
    double d_gamma;
};

/// Partial derivatives of ARR for an exponential baseline:
///   dARR/dlambda = -gamma t exp(-lambda gamma t)
///   dARR/dgamma  = t (exp(-gamma t) - lambda exp(-lambda gamma t))
/// Throws UnsupportedModelError for any other family.
ArrSensitivities arr_sensitivities(const HazardModel& model, const HazardRatio& hr, double t);

struct Nnt {
    double raw;                   // 1/ARR, +inf when ARR <= 0
    std::optional<long> display;  // nearest integer; empty when there is no benefit

    bool no_effect() const noexcept { return !display.has_value(); }
};

/// Requires t > 0. ARR <= 0 (lambda >= 1) is reported through no_effect().
Nnt nnt(const HazardModel& model, const HazardRatio& hr, double t);

/// Median of the arm with hazard ratio lambda: solves lambda H(t) = ln 2.
double median_survival(const HazardModel& model, const HazardRatio& hr);

/// t_E - t_C; positive iff lambda < 1.
double median_difference(const HazardModel& model, const HazardRatio& hr);

struct MdDecomposition {
    double t_median_control;
    double t_median_experimental;
    double delta_avg_hazard;  // average hazard on [t_C, t_E]
    double md_direct;         // t_E - t_C
    double md_identity;       // (1 - lambda) ln2 / (lambda * delta_avg_hazard)
};

/// Median difference by the mean-value decomposition. Requires lambda < 1.
MdDecomposition md_decomposition(const HazardModel& model, const HazardRatio& hr);

struct CriticalPoints {
    double gamma_crit;    // baseline rate maximizing ARR at the given t
    double t_star;        // time maximizing ARR at the given gamma
    double arr_at_tstar;  // depends on lambda only
    double nnt_at_tstar;
    bool limit = false;   // lambda == 1: c(1) = 1 by continuity
};

/// c(lambda) = ln(lambda) / (lambda - 1), with c(1) = 1.
double critical_constant(double lambda);

CriticalPoints critical_points(double gamma, const HazardRatio& hr, double t);

/// Closed forms for exponential and Weibull, quadrature otherwise.
double mean_survival_time(const HazardModel& model, const HazardRatio& hr);

/// AUC of exp(-lambda H(t)) by semi-infinite quadrature, for any family.
double mean_survival_time_quadrature(const HazardModel& model, const HazardRatio& hr,
                                     double rel_tol = 1e-10);

/// MST_control / MST_experimental.
double mst_ratio(const HazardModel& model, const HazardRatio& hr);

/// Unit costs per unit of survival time for each arm.
class CostInputs {
public:
    CostInputs(double c0, double ce);

    double c0() const noexcept { return c0_; }
    double ce() const noexcept { return ce_; }

private:
    double c0_;
    double ce_;
};

struct Icer {
    double exact;   // (cE MST_E - c0 MST_0) / (MST_E - MST_0)
    double approx;  // cE / (1 - MST_0/MST_E), i.e. c0 neglected
};

/// Throws DomainError("no incremental benefit") when the MSTs coincide.
Icer icer(const CostInputs& costs, double mst_control, double mst_experimental);

struct EffectSummary {
    double eval_time;
    double arr;
    Nnt nnt;
    double md;
    double mst_control;
    double mst_experimental;
    double mst_ratio;
};

EffectSummary summarize(const HazardModel& model, const HazardRatio& hr, double t);

}  // namespace hazardlens
