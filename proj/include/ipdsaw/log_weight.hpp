#pragma once

#include <cmath>
#include <limits>

namespace ipdsaw {

// Log-sum-exp of two log-scale values; -inf is the additive zero.
inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// A nonnegative quantity carried as its logarithm. Partition values grow like
// e^{beta L}, so every production-path sum runs on this scale.
struct LogWeight {
    double log_value = -std::numeric_limits<double>::infinity();

    static LogWeight zero() { return {}; }
    static LogWeight one() { return {0.0}; }
    static LogWeight from_log(double lv) { return {lv}; }
    static LogWeight from_value(double v) { return {std::log(v)}; }

    bool is_zero() const { return log_value == -std::numeric_limits<double>::infinity(); }
    double value() const { return std::exp(log_value); }

    LogWeight& operator+=(LogWeight o) {
        log_value = log_add(log_value, o.log_value);
        return *this;
    }
    LogWeight& operator*=(LogWeight o) {
        log_value = is_zero() || o.is_zero()
                        ? -std::numeric_limits<double>::infinity()
                        : log_value + o.log_value;
        return *this;
    }
    friend LogWeight operator+(LogWeight a, LogWeight b) { return a += b; }
    friend LogWeight operator*(LogWeight a, LogWeight b) { return a *= b; }
};

} // namespace ipdsaw
