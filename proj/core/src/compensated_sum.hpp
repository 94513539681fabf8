#pragma once

#include <cmath>

namespace fracqm::detail {

// Neumaier summation. Long sums of near-equal chord powers otherwise lose
// ~1e-12 relative accuracy by level 8.
template <class T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (magnitude(sum_) >= magnitude(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double magnitude(double x) { return std::abs(x); }
    template <class U>
    static double magnitude(const U& z) { return std::abs(z.real()) + std::abs(z.imag()); }

    T sum_{};
    T comp_{};
};

}  // namespace fracqm::detail
