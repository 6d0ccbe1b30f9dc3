#pragma once

#include <stdexcept>
#include <string>

namespace hazardlens {

// Invalid argument: negative time, non-positive rate, lambda outside the
// range an operation supports, malformed model spec.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A numerical routine failed to deliver the requested accuracy.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, double best_estimate = 0.0,
                          double error_estimate = 0.0)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

// No sign change on the supplied interval.
class BracketError : public NumericError {
public:
    BracketError(const std::string& what, double a, double b, double fa, double fb)
        : NumericError(what), a_(a), b_(b), fa_(fa), fb_(fb) {}

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double fa() const noexcept { return fa_; }
    double fb() const noexcept { return fb_; }

private:
    double a_, b_, fa_, fb_;
};

// An operation that is only defined for a specific baseline family.
class UnsupportedModelError : public DomainError {
public:
    using DomainError::DomainError;
};

// Power series with vanishing constant term cannot be inverted.
class SingularSeriesError : public NumericError {
public:
    explicit SingularSeriesError(const std::string& what) : NumericError(what) {}
};

// Ran out of stored series order.
class TruncationError : public NumericError {
public:
    explicit TruncationError(const std::string& what) : NumericError(what) {}
};

// Asymptotic partial sum or closed-form ratio blew up (non-positive or zero
// denominator).
class DivergenceError : public NumericError {
public:
    explicit DivergenceError(const std::string& what, double value = 0.0)
        : NumericError(what, value) {}
};

}  // namespace hazardlens
