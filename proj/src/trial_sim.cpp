#include "hazardlens/trial_sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "hazardlens/error.hpp"
#include "hazardlens/kernels.hpp"

namespace hazardlens {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

std::vector<double> sample_arm(const HazardModel& model, double lambda, std::size_t n,
                               std::uint64_t seed) {
    Xoshiro256 rng(seed);
    std::vector<double> times(n);
    for (double& t : times) {
        const double e = -std::log(rng.uniform_open());
        t = model.inverse_cumulative_hazard(e / lambda);
    }
    std::sort(times.begin(), times.end());
    return times;
}

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Xoshiro256::Xoshiro256(std::uint64_t seed) noexcept {
    for (auto& word : state_) {
        seed += kGolden;
        word = splitmix64_mix(seed);
    }
}

Xoshiro256::result_type Xoshiro256::operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Xoshiro256::uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t arm_seed(std::uint64_t master_seed, unsigned arm) noexcept {
    return splitmix64_mix(master_seed + (static_cast<std::uint64_t>(arm) + 1) * kGolden);
}

SimResult sample_event_times(const TrialSpec& spec) {
    if (spec.n_per_arm == 0) throw DomainError("sample_event_times: n_per_arm must be >= 1");
    SimResult out;
    auto experimental = std::async(std::launch::async, sample_arm, std::cref(spec.model),
                                   spec.hr.value(), spec.n_per_arm, arm_seed(spec.seed, 1));
    out.control_times = sample_arm(spec.model, 1.0, spec.n_per_arm, arm_seed(spec.seed, 0));
    out.experimental_times = experimental.get();
    out.median_control = empirical_median(out.control_times);
    out.median_experimental = empirical_median(out.experimental_times);
    return out;
}

double empirical_survival(const std::vector<double>& times, double t) {
    if (times.empty()) throw DomainError("empirical_survival: empty sample");
    const auto above = times.end() - std::upper_bound(times.begin(), times.end(), t);
    return static_cast<double>(above) / static_cast<double>(times.size());
}

double empirical_median(const std::vector<double>& times) {
    if (times.empty()) throw DomainError("empirical_median: empty sample");
    const std::size_t n = times.size();
    if (n % 2 == 1) return times[n / 2];
    return 0.5 * (times[n / 2 - 1] + times[n / 2]);
}

double median_standard_error(const std::vector<double>& times) {
    const std::size_t n = times.size();
    if (n < 4) return std::numeric_limits<double>::infinity();
    constexpr double z = 1.959963984540054;
    const double half_width = z * std::sqrt(static_cast<double>(n)) / 2.0;
    const double centre = static_cast<double>(n) / 2.0;
    // 1-based ranks of the band's order statistics.
    const auto lo = static_cast<std::size_t>(std::max(1.0, std::floor(centre - half_width)));
    const auto hi = static_cast<std::size_t>(
        std::min(static_cast<double>(n), std::ceil(centre + half_width)));
    return (times[hi - 1] - times[lo - 1]) / (2.0 * z);
}

SampleMean sample_mean(const std::vector<double>& times) {
    if (times.empty()) throw DomainError("sample_mean: empty sample");
    const kernels::Moments m = kernels::moments(times);
    const double n = static_cast<double>(times.size());
    const double variance = times.size() > 1 ? m.sum_sq_dev / (n - 1.0) : 0.0;
    return {m.mean, std::sqrt(variance / n)};
}

EmpiricalMeasures empirical_measures(const SimResult& result, double t) {
    if (result.control_times.empty() || result.experimental_times.empty()) {
        throw DomainError("empirical_measures: both arms must be sampled");
    }
    EmpiricalMeasures out{};
    out.eval_time = t;
    out.survival_control = empirical_survival(result.control_times, t);
    out.survival_experimental = empirical_survival(result.experimental_times, t);
    const double n_c = static_cast<double>(result.control_times.size());
    const double n_e = static_cast<double>(result.experimental_times.size());
    const double p_c = out.survival_control;
    const double p_e = out.survival_experimental;
    out.arr_hat = p_e - p_c;
    out.arr_se = std::sqrt(p_e * (1.0 - p_e) / n_e + p_c * (1.0 - p_c) / n_c);
    out.no_effect = !(out.arr_hat > 0.0);
    if (out.no_effect) {
        out.nnt_hat = std::numeric_limits<double>::infinity();
        out.nnt_se = std::numeric_limits<double>::infinity();
    } else {
        out.nnt_hat = 1.0 / out.arr_hat;
        out.nnt_se = out.arr_se / (out.arr_hat * out.arr_hat);
    }
    out.md_hat = empirical_median(result.experimental_times) - empirical_median(result.control_times);
    const double se_c = median_standard_error(result.control_times);
    const double se_e = median_standard_error(result.experimental_times);
    out.md_se = std::sqrt(se_c * se_c + se_e * se_e);
    return out;
}

}  // namespace hazardlens
