#pragma once

#include <cmath>

namespace spa::detail {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            compensation_ += (sum_ - t) + x;
        } else {
            compensation_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

template <typename Range>
double compensated_mean(const Range& values) {
    CompensatedSum s;
    double n = 0.0;
    for (double v : values) {
        s.add(v);
        n += 1.0;
    }
    return s.value() / n;
}

}  // namespace spa::detail
