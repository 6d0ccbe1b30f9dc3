#include <cmath>

#include "hazardlens/kernels.hpp"

namespace hazardlens::kernels::scalar {

void polynomial_eval(std::span<const double> coeffs, std::span<const double> t,
                     std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = coeffs.size(); j-- > 0;) {
            acc = acc * t[i] + coeffs[j];
        }
        out[i] = acc;
    }
}

void exp_neg_scaled(double scale, std::span<const double> x, std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::exp(-scale * x[i]);
    }
}

Moments moments(std::span<const double> x) {
    if (x.empty()) return {};
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) {
        const double d = v - mean;
        ss += d * d;
    }
    return {mean, ss};
}

}  // namespace hazardlens::kernels::scalar
