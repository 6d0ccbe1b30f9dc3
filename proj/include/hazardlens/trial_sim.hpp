#pragma once

// Monte Carlo two-arm trial without censoring. Event times are drawn by
// inverse transform, t = H^{-1}(E / lambda) with E ~ Exp(1), so the empirical
// survival function is the whole story (no product-limit estimator needed).
//
// Random stream, frozen for reproducibility:
//   arm_seed(i) = splitmix64_mix(master_seed + (i + 1) * 0x9E3779B97F4A7C15)
//                 with arm 0 = control, arm 1 = experimental
//   generator   = xoshiro256**, state filled by four successive splitmix64
//                 outputs started from arm_seed(i)
//   uniform     = ((x >> 11) + 0.5) * 2^-53, strictly inside (0, 1)
//   E           = -log(uniform)

#include <array>
#include <cstdint>
#include <vector>

#include "hazardlens/hazard_models.hpp"

namespace hazardlens {

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// xoshiro256** seeded through splitmix64.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept;

    /// Uniform in the open interval (0, 1).
    double uniform_open() noexcept;

private:
    std::array<std::uint64_t, 4> state_;
};

/// Seed of the stream for arm `arm` (0 = control, 1 = experimental).
std::uint64_t arm_seed(std::uint64_t master_seed, unsigned arm) noexcept;

struct TrialSpec {
    HazardModel model;
    HazardRatio hr;
    std::size_t n_per_arm;
    std::uint64_t seed;
};

struct SimResult {
    std::vector<double> control_times;       // ascending
    std::vector<double> experimental_times;  // ascending
    double median_control = 0.0;
    double median_experimental = 0.0;
};

/// Deterministic in spec.seed. The two arms are drawn on separate threads
/// from independent sub-seeds.
SimResult sample_event_times(const TrialSpec& spec);

/// Fraction of times strictly greater than t. `times` must be ascending.
double empirical_survival(const std::vector<double>& times, double t);

/// Sample median of an ascending sequence (mean of the middle pair when even).
double empirical_median(const std::vector<double>& times);

struct SampleMean {
    double mean;
    double standard_error;
};

SampleMean sample_mean(const std::vector<double>& times);

struct EmpiricalMeasures {
    double eval_time;
    double survival_control;
    double survival_experimental;
    double arr_hat;
    double arr_se;       // sqrt(pE(1-pE)/nE + pC(1-pC)/nC)
    double nnt_hat;      // +inf when arr_hat <= 0
    double nnt_se;       // delta method, arr_se / arr_hat^2
    double md_hat;
    double md_se;        // from order-statistic confidence bands of each median
    bool no_effect;      // arr_hat <= 0
};

EmpiricalMeasures empirical_measures(const SimResult& result, double t);

/// Distribution-free standard error of the sample median, from the order
/// statistics bracketing a 95% binomial band around the middle rank.
double median_standard_error(const std::vector<double>& times);

}  // namespace hazardlens
