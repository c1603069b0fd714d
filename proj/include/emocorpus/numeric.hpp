#pragma once

#include <cmath>
#include <span>

namespace emocorpus {

// Neumaier-compensated running sum. Results depend only on insertion order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

/// Arithmetic mean; caller guarantees a non-empty span.
inline double mean(std::span<const double> xs) {
    return compensated_sum(xs) / static_cast<double>(xs.size());
}

/// Population variance (divides by n), two-pass.
inline double population_variance(std::span<const double> xs) {
    const double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size());
}

}  // namespace emocorpus
