#pragma once

#include <cmath>

#ifdef __FAST_MATH__
#error "-ffast-math would optimise away the compensation term"
#endif

namespace rabi {

// Neumaier's variant of Kahan summation. Terms must be added in a fixed
// order for the result to be reproducible; callers add in ascending n.
template <typename T>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(T initial) : sum_(initial) {}

    constexpr CompensatedSum& operator+=(T term) {
        const T t = sum_ + term;
        if (std::abs(sum_) >= std::abs(term)) {
            carry_ += (sum_ - t) + term;
        } else {
            carry_ += (term - t) + sum_;
        }
        sum_ = t;
        return *this;
    }

    constexpr T value() const { return sum_ + carry_; }

private:
    T sum_{};
    T carry_{};
};

}  // namespace rabi
