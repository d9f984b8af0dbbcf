#include "sigmacalc/multiple_gamma.hpp"

#include "sigmacalc/catalog.hpp"
#include "sigmacalc/errors.hpp"
#include "sigmacalc/special.hpp"
#include "sigmacalc/summation.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace sigmacalc {

namespace {

const CatalogFunction& log_function()
{
    static const CatalogFunction g = catalog_get("log");
    return g;
}

void require_positive(double x, const char* what)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(std::string(what) + " needs x > 0");
}

// ln Gamma(k) - ln Gamma(x + k) without forming the two large logs for big k
long double ln_gamma_ratio(long double k, long double x)
{
    if (k < 32.0L)
        return std::lgamma(k) - std::lgamma(x + k);
    // Stirling: (k - 1/2) log1p(x/k) + x ln(k + x) - x, plus B_{2j} / (2j(2j-1)) z^{1-2j} terms
    static constexpr std::array<long double, 6> c{1.0L / 12, -1.0L / 360, 1.0L / 1260, -1.0L / 1680,
                                                  1.0L / 1188, -691.0L / 360360};
    long double r = (k - 0.5L) * std::log1p(x / k) + x * std::log(k + x) - x;
    const long double a = 1.0L / (k + x), b = 1.0L / k;
    long double pa = a, pb = b;
    for (long double cj : c) {
        r += cj * (pa - pb);
        pa *= a * a;
        pb *= b * b;
    }
    return -r;
}

} // namespace

std::string to_string(GammaRoute r)
{
    switch (r) {
    case GammaRoute::sigma: return "sigma";
    case GammaRoute::recurrence: return "recurrence";
    case GammaRoute::limit_product: return "limit-product";
    case GammaRoute::malmsten: return "malmsten";
    }
    return "?";
}

MultipleGammaValue ln_multiple_gamma(int m, double x, const SigmaControl& ctrl)
{
    if (m < 1)
        throw InvalidParameterError("multiple gamma order must be >= 1");
    require_positive(x, "ln_multiple_gamma");
    MultipleGammaValue v;
    v.m = m;
    v.x = x;
    const SigmaResult r = sigma_eval(log_function(), m - 1, x, ctrl);
    v.ln_value = r.value;
    v.route = r.termination == Termination::exact_lattice ? GammaRoute::recurrence : GammaRoute::sigma;
    return v;
}

double barnes_limit_product(double x, std::int64_t n, BarnesVariant variant, Exec exec)
{
    require_positive(x, "barnes_limit_product");
    if (n < 1)
        throw InvalidParameterError("barnes_limit_product needs n >= 1");
    using LD = long double;
    const LD xl = x;
    const LD nl = static_cast<LD>(n);
    const LD ln_nfact = std::lgamma(nl + 1.0L);
    const LD lg_x = std::lgamma(xl);
    NeumaierSum<LD> acc;
    acc += xl * ln_nfact;
    acc += xl * (xl - 1.0L) / 2.0L * std::log(nl);
    if (variant == BarnesVariant::outside_gamma) {
        acc -= nl * std::log(xl);
        acc -= (nl + 1.0L) * lg_x;
        acc += lattice_sum<LD>(1, n + 1, [&](std::int64_t k) {
            const LD kl = static_cast<LD>(k);
            return (kl - nl) * std::log1p(xl / kl);
        }, exec);
    } else {
        acc -= lg_x;
        acc += lattice_sum<LD>(1, n + 1, [&](std::int64_t k) {
            const LD kl = static_cast<LD>(k);
            return ln_gamma_ratio(kl, xl);
        }, exec);
    }
    return static_cast<double>(acc.value());
}

double barnes_limit_extrapolated(double x, std::int64_t n_max, BarnesVariant variant, int levels)
{
    if (levels < 1)
        throw InvalidParameterError("extrapolation needs at least one level");
    if ((n_max >> (levels - 1)) < 1)
        throw InvalidParameterError("n_max too small for the requested levels");
    // table[i] starts as f(n_max / 2^i); column k removes the 1/n^k term
    std::vector<long double> table(levels);
    for (int i = 0; i < levels; ++i)
        table[i] = barnes_limit_product(x, n_max >> i, variant);
    for (int k = 1; k < levels; ++k) {
        const long double w = std::ldexp(1.0L, k);
        for (int i = 0; i + k < levels; ++i)
            table[i] = (w * table[i] - table[i + 1]) / (w - 1.0L);
    }
    return static_cast<double>(table[0]);
}

double ln_K(double x, const SigmaControl& ctrl)
{
    require_positive(x, "ln_K");
    static const CatalogFunction g = catalog_get("xlogx");
    return sigma_eval(g, 0, x, ctrl).value;
}

double psi_minus2_shifted(double x, const SigmaControl& ctrl)
{
    require_positive(x, "psi_minus2_shifted");
    static const CatalogFunction g = catalog_get("xlogx_difference");
    return sigma_eval(g, 1, x, ctrl).value;
}

double log_derivative_at_one(int k)
{
    if (k < 0 || k > kMaxLogDerivativeOrder)
        throw InvalidParameterError("D ln G_k(1) is tabulated for k <= "
                                    + std::to_string(kMaxLogDerivativeOrder));
    if (k == 0)
        return 1.0; // G_0(x) = x
    if (k == 1)
        return -EulerConstants::gamma;

    static std::array<std::once_flag, kMaxLogDerivativeOrder + 1> once;
    static std::array<double, kMaxLogDerivativeOrder + 1> table{};
    std::call_once(once[k], [k] {
        SigmaControl ctrl;
        ctrl.tolerance = 1e-13;
        auto lnG = [&](double x) {
            try {
                return sigma_eval(log_function(), k - 1, x, ctrl).value;
            } catch (const NonConvergenceError& e) {
                return e.best().value;
            }
        };
        auto central = [&](double h) { return (lnG(1.0 + h) - lnG(1.0 - h)) / (2.0 * h); };
        const double h = 1e-2;
        table[k] = (4.0 * central(h / 2.0) - central(h)) / 3.0;
    });
    return table[k];
}

double multiple_gamma_log_derivative(int m, double x)
{
    if (m < 0)
        throw InvalidParameterError("m must be nonnegative");
    require_positive(x, "multiple_gamma_log_derivative");
    NeumaierSum<double> acc(binom_real(x - 1.0, m) * (digamma(x) - digamma(m + 1.0)));
    for (int j = 0; j <= m; ++j)
        acc += binom_real(x - 1.0, j) * log_derivative_at_one(m + 1 - j);
    return acc.value();
}

NewtonSeriesValue newton_series_ln_Gm(int m, double x, int terms)
{
    if (m < 1)
        throw InvalidParameterError("newton_series_ln_Gm needs m >= 1");
    if (terms < 1)
        throw InvalidParameterError("newton_series_ln_Gm needs terms >= 1");
    require_positive(x, "newton_series_ln_Gm");
    NeumaierSum<double> acc;
    for (int k = 0; k < terms; ++k)
        acc += binom_real(x - 1.0, k + m) * eval_delta(log_function(), k, 1.0);
    return {acc.value(), terms > kNewtonSeriesSafeTerms};
}

} // namespace sigmacalc
