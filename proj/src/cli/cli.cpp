#include "hazardlens/cli.hpp"

#include <cmath>
#include <sstream>

#include "CLI11.hpp"
#include "hazardlens/asymptotics.hpp"
#include "hazardlens/effect_measures.hpp"
#include "hazardlens/error.hpp"
#include "hazardlens/hazard_models.hpp"
#include "hazardlens/kernels.hpp"
#include "hazardlens/numerics.hpp"
#include "hazardlens/trial_sim.hpp"
#include "output.hpp"
#include "svg_chart.hpp"

namespace hazardlens::cli {
namespace {

using nlohmann::json;

struct Common {
    std::string format;
    std::string out_path;
};

void add_common(CLI::App* cmd, Common& common) {
    cmd->add_option("--format", common.format, "Output format (json|csv|svg)");
    cmd->add_option("--out", common.out_path, "Write the artifact to PATH instead of stdout");
}

// ---------------------------------------------------------------- measures

struct MeasuresArgs {
    Common common;
    std::string model;
    double hr = 0.0;
    double time = 1.0;
};

std::string run_measures(const MeasuresArgs& a) {
    const HazardModel model = parse_model(a.model);
    const HazardRatio hr(a.hr);
    const EffectSummary s = summarize(model, hr, a.time);
    const Format format = resolve_format(a.common.format, {Format::json, Format::csv}, Format::json);
    if (format == Format::csv) {
        std::ostringstream csv;
        write_csv_row(csv, {"model", "hr", "eval_time", "arr", "nnt_raw", "nnt_display", "md",
                            "mst_control", "mst_experimental", "mst_ratio"});
        write_csv_row(csv, {model.describe(), csv_number(hr.value()), csv_number(s.eval_time),
                            csv_number(s.arr), csv_number(s.nnt.raw),
                            s.nnt.display ? std::to_string(*s.nnt.display) : "",
                            csv_number(s.md), csv_number(s.mst_control),
                            csv_number(s.mst_experimental), csv_number(s.mst_ratio)});
        return csv.str();
    }
    json j;
    j["model"] = model.describe();
    j["hr"] = hr.value();
    j["eval_time"] = s.eval_time;
    j["arr"] = s.arr;
    j["nnt"] = s.nnt.no_effect() ? json("inf") : json(s.nnt.raw);
    j["nnt_raw"] = json_number(s.nnt.raw);
    j["nnt_display"] = s.nnt.display ? json(*s.nnt.display) : json(nullptr);
    j["md"] = s.md;
    j["mst_control"] = s.mst_control;
    j["mst_experimental"] = s.mst_experimental;
    j["mst_ratio"] = s.mst_ratio;
    return j.dump(2) + "\n";
}

// --------------------------------------------------------------- nnt-curve

struct NntCurveArgs {
    Common common;
    std::vector<std::string> models;
    double hr = 0.0;
    double t_max = 12.0;
    double step = 0.1;
    double t_min = 0.0;
    std::string svg_path;
    double y_cap = 60.0;
};

std::string run_nnt_curve(const NntCurveArgs& a, std::string& svg_payload) {
    const HazardRatio hr(a.hr);
    if (!(a.step > 0.0) || !(a.t_max > 0.0)) throw DomainError("nnt-curve: need --step > 0 and --t-max > 0");
    const auto n_steps = static_cast<std::size_t>(std::llround(a.t_max / a.step));
    if (n_steps == 0 || n_steps > 1'000'000) throw DomainError("nnt-curve: bad grid size");
    std::vector<double> t;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double tk = static_cast<double>(k) * a.step;
        if (tk >= a.t_min) t.push_back(tk);
    }

    std::vector<Series> curves;
    std::vector<double> h(t.size());
    std::vector<double> s_c(t.size());
    std::vector<double> s_e(t.size());
    for (const auto& spec : a.models) {
        const HazardModel model = parse_model(spec);
        model.cumulative_hazard(t, h);
        kernels::exp_neg_scaled(1.0, h, s_c);
        kernels::exp_neg_scaled(hr.value(), h, s_e);
        Series curve{model.describe(), t, std::vector<double>(t.size())};
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double arr_i = s_e[i] - s_c[i];
            curve.y[i] = arr_i > 0.0 ? 1.0 / arr_i : std::numeric_limits<double>::infinity();
        }
        curves.push_back(std::move(curve));
    }

    if (!a.svg_path.empty() || resolve_format(a.common.format, {Format::csv, Format::svg},
                                              Format::csv) == Format::svg) {
        std::ostringstream title;
        title << "Number needed to treat, HR " << hr.value();
        svg_payload = line_chart(curves, {title.str(), "time (years)", "NNT", a.y_cap});
    }

    std::ostringstream csv;
    std::vector<std::string> header{"t"};
    for (std::size_t m = 0; m < curves.size(); ++m) header.push_back("nnt_" + std::to_string(m + 1));
    write_csv_row(csv, header);
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<std::string> row{csv_number(t[i])};
        for (const auto& c : curves) row.push_back(csv_number(c.y[i]));
        write_csv_row(csv, row);
    }
    return csv.str();
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
    Common common;
    std::string model = "exp";
    std::string gammas;
    std::string hrs;
    double time = 1.0;
};

std::string trend(const std::vector<double>& x, const std::vector<double>& y) {
    int rises = 0;
    int falls = 0;
    int sign_changes = 0;
    int last = 0;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const int s = y[i] > y[i - 1] ? 1 : (y[i] < y[i - 1] ? -1 : 0);
        if (s > 0) ++rises;
        if (s < 0) ++falls;
        if (s != 0) {
            if (last != 0 && s != last) {
                ++sign_changes;
                if (last > 0) peak = i - 1;
            }
            last = s;
        }
    }
    if (rises == 0 && falls == 0) return "constant";
    if (falls == 0) return "increasing";
    if (rises == 0) return "decreasing";
    if (sign_changes == 1 && y[1] > y[0]) return "unimodal peak@" + csv_number(x[peak]);
    return "mixed";
}

std::string run_sweep(const SweepArgs& a) {
    if (a.model != "exp") throw DomainError("sweep: only --model exp is supported");
    resolve_format(a.common.format, {Format::csv}, Format::csv);
    const std::vector<double> gammas = parse_range(a.gammas);
    const std::vector<double> lambdas = parse_list(a.hrs);
    if (!(a.time > 0.0)) throw DomainError("sweep: --time must be > 0");
    for (double g : gammas) {
        if (!(g > 0.0)) throw DomainError("sweep: rates must be > 0");
    }

    std::vector<double> h(gammas.size());
    for (std::size_t i = 0; i < gammas.size(); ++i) h[i] = gammas[i] * a.time;
    std::vector<double> s_c(h.size());
    kernels::exp_neg_scaled(1.0, h, s_c);

    std::vector<std::string> header{"gamma"};
    std::vector<std::vector<double>> columns;
    std::vector<std::string> crit_row{"#gamma_crit"};
    for (double l : lambdas) {
        const HazardRatio hr(l);
        std::vector<double> s_e(h.size());
        kernels::exp_neg_scaled(hr.value(), h, s_e);
        std::vector<double> arr_col(h.size());
        std::vector<double> md_col(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            arr_col[i] = s_e[i] - s_c[i];
            md_col[i] = median_difference(ExponentialHazard(gammas[i]), hr);
        }
        header.push_back("arr_hr" + csv_number(l));
        header.push_back("md_hr" + csv_number(l));
        columns.push_back(std::move(arr_col));
        columns.push_back(std::move(md_col));
        crit_row.push_back(l == 1.0 ? "" : csv_number(critical_points(1.0, hr, a.time).gamma_crit));
        crit_row.emplace_back();
    }

    std::ostringstream csv;
    write_csv_row(csv, header);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        std::vector<std::string> row{csv_number(gammas[i])};
        for (const auto& col : columns) row.push_back(csv_number(col[i]));
        write_csv_row(csv, row);
    }
    std::vector<std::string> trend_row{"#trend"};
    for (const auto& col : columns) trend_row.push_back(trend(gammas, col));
    write_csv_row(csv, trend_row);
    write_csv_row(csv, crit_row);
    return csv.str();
}

// -------------------------------------------------------------------- icer

struct IcerArgs {
    Common common;
    std::string model;
    double hr = 0.0;
    double c0 = 0.0;
    double ce = 0.0;
};

std::string run_icer(const IcerArgs& a) {
    const HazardModel model = parse_model(a.model);
    const HazardRatio hr(a.hr);
    const CostInputs costs(a.c0, a.ce);
    const double mst0 = mean_survival_time(model, HazardRatio(1.0));
    const double mste = mean_survival_time(model, hr);
    const Icer result = icer(costs, mst0, mste);
    const Format format = resolve_format(a.common.format, {Format::json, Format::csv}, Format::json);
    if (format == Format::csv) {
        std::ostringstream csv;
        write_csv_row(csv, {"model", "hr", "c0", "ce", "mst_control", "mst_experimental",
                            "mst_ratio", "icer_exact", "icer_approx"});
        write_csv_row(csv, {model.describe(), csv_number(hr.value()), csv_number(a.c0),
                            csv_number(a.ce), csv_number(mst0), csv_number(mste),
                            csv_number(mst0 / mste), csv_number(result.exact),
                            csv_number(result.approx)});
        return csv.str();
    }
    json j;
    j["model"] = model.describe();
    j["hr"] = hr.value();
    j["c0"] = a.c0;
    j["ce"] = a.ce;
    j["mst_control"] = mst0;
    j["mst_experimental"] = mste;
    j["mst_ratio"] = mst0 / mste;
    j["icer_exact"] = result.exact;
    j["icer_approx"] = result.approx;
    return j.dump(2) + "\n";
}

// ------------------------------------------------------------- asymptotics

struct AsymptoticsArgs {
    Common common;
    std::string poly;
    double hr = 1.0;
    int terms = 4;
};

std::string run_asymptotics(const AsymptoticsArgs& a) {
    resolve_format(a.common.format, {Format::json}, Format::json);
    if (a.terms < 1 || a.terms > kMaxWatsonOrder + 1) {
        throw DomainError("asymptotics: --terms must lie in [1, " +
                          std::to_string(kMaxWatsonOrder + 1) + "]");
    }
    const PolynomialHazard poly(parse_list(a.poly));
    const HazardModel model(poly);
    const HazardRatio hr(a.hr);
    const int r_max = a.terms - 1;
    const WatsonExpansion w = watson_expansion(poly, hr, r_max);
    const auto quad = numerics::integrate_semi_infinite(
        [&](double t) { return std::exp(-hr.value() * model.cumulative_hazard(t)); }, 1e-12);

    json j;
    j["model"] = model.describe();
    j["hr"] = hr.value();
    j["r_max"] = r_max;
    j["closeness"] = json_number(w.closeness);
    j["prefactor"] = w.prefactor;
    j["terms"] = w.terms;
    j["partial_sums"] = w.partial_sums;
    j["optimal_index"] = w.optimal_index;
    j["optimal_sum"] = w.optimal_sum();
    j["quadrature"] = quad.value;
    j["quadrature_error_estimate"] = quad.abs_error_estimate;
    json errors = json::array();
    for (double s : w.partial_sums) errors.push_back(std::abs(s - quad.value));
    j["truncation_errors"] = errors;
    try {
        j["mst_ratio_asymptotic"] = mst_asymptotic_ratio(poly, hr, r_max);
    } catch (const DivergenceError&) {
        j["mst_ratio_asymptotic"] = nullptr;
    }
    const double quad_control = numerics::integrate_semi_infinite(
        [&](double t) { return std::exp(-model.cumulative_hazard(t)); }, 1e-12).value;
    j["mst_ratio_quadrature"] = quad_control / quad.value;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::string model;
    double hr = 0.0;
    std::size_t n = 100000;
    std::uint64_t seed = 42;
    std::vector<double> times{1.0};
};

struct SimRow {
    std::string quantity;
    double time;
    double empirical;
    double se;
    double analytic;
};

std::string run_simulate(const SimulateArgs& a) {
    const HazardModel model = parse_model(a.model);
    const HazardRatio hr(a.hr);
    const Format format = resolve_format(a.common.format, {Format::csv, Format::json}, Format::csv);
    const SimResult sim = sample_event_times({model, hr, a.n, a.seed});
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<SimRow> rows;
    for (double t : a.times) {
        const EmpiricalMeasures m = empirical_measures(sim, t);
        const double sc = survival(model, HazardRatio(1.0), t);
        const double se = survival(model, hr, t);
        const double n = static_cast<double>(a.n);
        rows.push_back({"survival_control", t, m.survival_control,
                        std::sqrt(m.survival_control * (1 - m.survival_control) / n), sc});
        rows.push_back({"survival_experimental", t, m.survival_experimental,
                        std::sqrt(m.survival_experimental * (1 - m.survival_experimental) / n), se});
        rows.push_back({"arr", t, m.arr_hat, m.arr_se, arr(model, hr, t)});
        rows.push_back({"nnt", t, m.nnt_hat, m.nnt_se, nnt(model, hr, t).raw});
    }
    const EmpiricalMeasures first = empirical_measures(sim, a.times.front());
    rows.push_back({"median_control", nan, sim.median_control,
                    median_standard_error(sim.control_times), median_survival(model, HazardRatio(1.0))});
    rows.push_back({"median_experimental", nan, sim.median_experimental,
                    median_standard_error(sim.experimental_times), median_survival(model, hr)});
    rows.push_back({"md", nan, first.md_hat, first.md_se, median_difference(model, hr)});
    const SampleMean mean_e = sample_mean(sim.experimental_times);
    rows.push_back({"mean_experimental", nan, mean_e.mean, mean_e.standard_error,
                    mean_survival_time(model, hr)});

    auto z_score = [nan](const SimRow& r) {
        return r.se > 0.0 && std::isfinite(r.se) ? (r.empirical - r.analytic) / r.se : nan;
    };
    if (format == Format::json) {
        json j;
        j["model"] = model.describe();
        j["hr"] = hr.value();
        j["n_per_arm"] = a.n;
        j["seed"] = a.seed;
        json arr_rows = json::array();
        for (const auto& r : rows) {
            json row;
            row["quantity"] = r.quantity;
            row["time"] = std::isnan(r.time) ? json(nullptr) : json(r.time);
            row["empirical"] = json_number(r.empirical);
            row["std_error"] = json_number(r.se);
            row["analytic"] = json_number(r.analytic);
            row["z"] = json_number(z_score(r));
            arr_rows.push_back(std::move(row));
        }
        j["rows"] = arr_rows;
        return j.dump(2) + "\n";
    }
    std::ostringstream csv;
    write_csv_row(csv, {"quantity", "time", "empirical", "std_error", "analytic", "z"});
    for (const auto& r : rows) {
        write_csv_row(csv, {r.quantity, std::isnan(r.time) ? std::string() : csv_number(r.time),
                            csv_number(r.empirical), csv_number(r.se), csv_number(r.analytic),
                            csv_number(z_score(r))});
    }
    return csv.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Treatment-effect measures for time-to-event outcomes", "hazardlens"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hazardlens 1.0.0");

    MeasuresArgs measures;
    auto* cmd_measures = app.add_subcommand("measures", "ARR, NNT, MD, MSTs at one time point");
    cmd_measures->add_option("--model", measures.model, "Baseline model spec")->required();
    cmd_measures->add_option("--hr", measures.hr, "Hazard ratio")->required();
    cmd_measures->add_option("--time", measures.time, "Evaluation time");
    add_common(cmd_measures, measures.common);

    NntCurveArgs curve;
    auto* cmd_curve = app.add_subcommand("nnt-curve", "NNT over a time grid for one or more baselines");
    cmd_curve->add_option("--model", curve.models, "Baseline model spec (repeatable)")->required();
    cmd_curve->add_option("--hr", curve.hr, "Hazard ratio")->required();
    cmd_curve->add_option("--t-max", curve.t_max, "Last time point");
    cmd_curve->add_option("--step", curve.step, "Grid spacing");
    cmd_curve->add_option("--t-min", curve.t_min, "Drop grid points below this time");
    cmd_curve->add_option("--svg", curve.svg_path, "Also write an SVG chart to PATH");
    cmd_curve->add_option("--y-cap", curve.y_cap, "Clip the chart's NNT axis");
    add_common(cmd_curve, curve.common);

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "ARR and MD over a grid of baseline rates");
    cmd_sweep->add_option("--model", sweep.model, "Baseline family (exp)");
    cmd_sweep->add_option("--gammas", sweep.gammas, "Rate range start:stop:step")->required();
    cmd_sweep->add_option("--hrs", sweep.hrs, "Comma-separated hazard ratios")->required();
    cmd_sweep->add_option("--time", sweep.time, "Evaluation time");
    add_common(cmd_sweep, sweep.common);

    IcerArgs icer_args;
    auto* cmd_icer = app.add_subcommand("icer", "Lifetime incremental cost-effectiveness ratio");
    cmd_icer->add_option("--model", icer_args.model, "Baseline model spec")->required();
    cmd_icer->add_option("--hr", icer_args.hr, "Hazard ratio")->required();
    cmd_icer->add_option("--c0", icer_args.c0, "Unit cost, control")->required();
    cmd_icer->add_option("--ce", icer_args.ce, "Unit cost, experimental")->required();
    add_common(cmd_icer, icer_args.common);

    AsymptoticsArgs asym;
    auto* cmd_asym = app.add_subcommand("asymptotics", "Asymptotic MST expansion for a polynomial H");
    cmd_asym->add_option("--poly", asym.poly, "Coefficients c1,c2,... of H(t)")->required();
    cmd_asym->add_option("--hr", asym.hr, "Hazard ratio (default 1)");
    cmd_asym->add_option("--terms", asym.terms, "Number of terms L_0.. (1-9)");
    add_common(cmd_asym, asym.common);

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo trial vs analytic values");
    cmd_sim->add_option("--model", sim.model, "Baseline model spec")->required();
    cmd_sim->add_option("--hr", sim.hr, "Hazard ratio")->required();
    cmd_sim->add_option("--n", sim.n, "Patients per arm")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--seed", sim.seed, "Master seed");
    cmd_sim->add_option("--time", sim.times, "Evaluation time (repeatable)");
    add_common(cmd_sim, sim.common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (cmd_measures->parsed()) {
            emit(measures.common.out_path, out, run_measures(measures));
        } else if (cmd_curve->parsed()) {
            std::string svg;
            const std::string csv = run_nnt_curve(curve, svg);
            const bool svg_main = resolve_format(curve.common.format, {Format::csv, Format::svg},
                                                 Format::csv) == Format::svg;
            emit(curve.common.out_path, out, svg_main ? svg : csv);
            if (!curve.svg_path.empty()) emit(curve.svg_path, out, svg);
        } else if (cmd_sweep->parsed()) {
            emit(sweep.common.out_path, out, run_sweep(sweep));
        } else if (cmd_icer->parsed()) {
            emit(icer_args.common.out_path, out, run_icer(icer_args));
        } else if (cmd_asym->parsed()) {
            emit(asym.common.out_path, out, run_asymptotics(asym));
        } else if (cmd_sim->parsed()) {
            emit(sim.common.out_path, out, run_simulate(sim));
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitOk;
}

}  // namespace hazardlens::cli
