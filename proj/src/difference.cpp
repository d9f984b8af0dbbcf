#include "sigmacalc/difference.hpp"

#include "sigmacalc/errors.hpp"
#include "sigmacalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigmacalc {

void GridWindow::validate() const
{
    if (count < 1)
        throw InvalidParameterError("grid window needs at least one point");
    if (!(step > 0.0))
        throw InvalidParameterError("grid window step must be positive");
    if (!(start > 0.0))
        throw InvalidParameterError("grid window must lie in x > 0");
}

long double binom_long(long double x, int k)
{
    if (k < 0)
        return 0.0L;
    long double r = 1.0L;
    for (int i = 0; i < k; ++i)
        r = r * (x - i) / (i + 1);
    return r;
}

double binom_real(double x, int k) { return static_cast<double>(binom_long(x, k)); }

double forward_diff(const RealFunction& f, int k, double x, double step, int max_order)
{
    if (k < 0)
        throw InvalidParameterError("difference order must be nonnegative");
    if (k > max_order)
        throw InvalidParameterError("difference order " + std::to_string(k) + " exceeds cap "
                                    + std::to_string(max_order));
    if (k == 0)
        return f(x);
    NeumaierSum<double> acc;
    double c = 1.0; // C(k, j)
    for (int j = 0; j <= k; ++j) {
        const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * c * f(x + j * step);
        c = c * (k - j) / (j + 1);
    }
    return acc.value();
}

double divided_diff(const RealFunction& f, const std::vector<double>& points)
{
    if (points.empty())
        throw InvalidParameterError("divided difference needs at least one point");
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("divided difference with duplicated points");
    if (points.size() > 24)
        throw InvalidParameterError("divided difference order too large");

    std::vector<double> col(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        col[i] = f(points[i]);
    for (std::size_t level = 1; level < points.size(); ++level)
        for (std::size_t i = 0; i + level < points.size(); ++i)
            col[i] = (col[i + 1] - col[i]) / (points[i + level] - points[i]);
    return col[0];
}

double rho_remainder(const RealFunction& f, double a, int p, double x)
{
    if (!(x > -a))
        throw DomainError("rho_remainder requires x > -a");
    NeumaierSum<double> acc(f(x + a));
    for (int j = 0; j < p; ++j)
        acc -= binom_real(x, j) * forward_diff(f, j, a);
    return acc.value();
}

TaylorSplit discrete_taylor(const RealFunction& f, int m, double x, int n)
{
    if (m < 0 || n < 0)
        throw InvalidParameterError("discrete_taylor needs m >= 0 and n >= 0");
    NeumaierSum<double> expansion, remainder;
    for (int j = 0; j <= m; ++j)
        expansion += binom_real(n, j) * forward_diff(f, j, x);
    for (int k = 0; k < n; ++k)
        remainder += binom_real(n - k - 1, m) * forward_diff(f, m + 1, x + k);
    return {expansion.value(), remainder.value()};
}

} // namespace sigmacalc
