#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace sigmacalc {

using RealFunction = std::function<double(double)>;

inline constexpr int kMaxDifferenceOrder = 30;

// Sampling lattice start, start+step, ..., start+(count-1)*step.
struct GridWindow {
    double start = 1.0;
    std::int64_t count = 1;
    double step = 1.0;

    double at(std::int64_t i) const { return start + static_cast<double>(i) * step; }
    double last() const { return at(count - 1); }
    void validate() const;
};

// x(x-1)...(x-k+1)/k!
double binom_real(double x, int k);
long double binom_long(long double x, int k);

// Delta_h^k f(x); compensated alternating sum.
double forward_diff(const RealFunction& f, int k, double x, double step = 1.0,
                    int max_order = kMaxDifferenceOrder);

double divided_diff(const RealFunction& f, const std::vector<double>& points);

// f(x+a) - sum_{j<p} C(x,j) Delta^j f(a)
double rho_remainder(const RealFunction& f, double a, int p, double x);

struct TaylorSplit {
    double expansion = 0.0;
    double remainder = 0.0;
};

// f(x+n) = sum_{j<=m} C(n,j) Delta^j f(x) + sum_{k<n} C(n-k-1,m) Delta^{m+1} f(x+k)
TaylorSplit discrete_taylor(const RealFunction& f, int m, double x, int n);

} // namespace sigmacalc
