#pragma once

#include <cmath>

namespace sigmacalc {

// Neumaier's variant of Kahan summation.
template <typename T>
class NeumaierSum {
public:
    NeumaierSum() = default;
    explicit NeumaierSum(T init) : sum_(init) {}

    void add(T v)
    {
        const T t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    NeumaierSum& operator+=(T v)
    {
        add(v);
        return *this;
    }
    NeumaierSum& operator-=(T v)
    {
        add(-v);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

} // namespace sigmacalc
