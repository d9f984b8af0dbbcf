#include "sigmacalc/catalog.hpp"

#include "sigmacalc/errors.hpp"
#include "sigmacalc/malmsten.hpp"
#include "sigmacalc/special.hpp"
#include "sigmacalc/summation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sigmacalc {

namespace {

constexpr int kMaxIntParam = 20;

double sign_pow(int j) { return (j % 2 == 0) ? 1.0 : -1.0; }

void require_positive(double x, const std::string& id)
{
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError(id + " is undefined at x = " + std::to_string(x));
}

// sign of Delta^{q+1} is (-1)^q for q >= 0, positive for q = -1
KExpectation log_like(int q)
{
    if (q < 0)
        return KExpectation::positive;
    return q % 2 == 0 ? KExpectation::positive : KExpectation::negative;
}

// sign of Delta^{q+1} is (-1)^{q+1}
KExpectation reciprocal_like(int q)
{
    return (q + 1) % 2 == 0 ? KExpectation::positive : KExpectation::negative;
}

ConvexityProfile alternating(std::function<KExpectation(int)> e)
{
    return {ConvexityTag::all_orders_alternating, std::nullopt, std::move(e)};
}

// Delta^j of 1/x
double reciprocal_delta(int j, double x)
{
    double r = 1.0 / x;
    for (int i = 1; i <= j; ++i)
        r *= i / (x + i);
    return sign_pow(j) * r;
}

// sum_{r>=r0} c(r) B(r) with B(r) = j! S(r, j) / x^r; converges for x > j
template <typename Coef>
double surjection_series(int j, double x, int r0, int shift, Coef coef)
{
    // row[i] = i! S(r, i) / x^r for i = 0..j, advanced in r
    std::vector<double> row(j + 1, 0.0);
    row[0] = 1.0;
    NeumaierSum<double> acc;
    const int first = r0 + shift;
    for (int r = 1; r < 600; ++r) {
        for (int i = std::min(r, j); i >= 1; --i)
            row[i] = (i / x) * (row[i] + row[i - 1]);
        row[0] = 0.0;
        const int s = r - shift;
        if (r < first || s < 1)
            continue;
        const double term = coef(s) * row[j];
        acc += term;
        if (r > first + 2 && std::abs(term) <= 1e-18 * std::abs(acc.value()))
            break;
    }
    return acc.value();
}

bool series_region(int j, double x) { return x >= 4.0 * j; }

double log_delta(int j, double x)
{
    if (j == 0)
        return std::log(x);
    if (series_region(j, x))
        return surjection_series(j, x, j, 0, [](int r) { return sign_pow(r + 1) / r; });
    NeumaierSum<double> acc;
    double c = 1.0;
    for (int i = 0; i <= j; ++i) {
        acc += sign_pow(j - i) * c * std::log1p(i / x);
        c = c * (j - i) / (i + 1);
    }
    return acc.value();
}

double xlogx_delta(int j, double x)
{
    if (j == 0)
        return x * std::log(x);
    if (j >= 2 && series_region(j, x)) {
        // coefficient of x^{-s} pairs the r = s and r = s + 1 terms of the log series
        return x * surjection_series(j, x, j - 1, 1, [](int s) {
            return sign_pow(s + 1) / (static_cast<double>(s) * (s + 1));
        });
    }
    NeumaierSum<double> acc(j == 1 ? std::log(x) : 0.0);
    double c = 1.0;
    for (int i = 0; i <= j; ++i) {
        acc += sign_pow(j - i) * c * (x + i) * std::log1p(i / x);
        c = c * (j - i) / (i + 1);
    }
    return acc.value();
}

// Delta^j of 1/x^2 = -D Delta^j (1/x)
double inv_square_delta(int j, double x)
{
    NeumaierSum<double> harmonic;
    for (int i = 0; i <= j; ++i)
        harmonic += 1.0 / (x + i);
    return reciprocal_delta(j, x) * harmonic.value();
}

double piecewise_eval(double x)
{
    const double fl = std::floor(x);
    const double u = x - fl;
    return std::exp2(-fl) * (2.0 - 2.0 * u + u * u);
}

int int_param(const std::optional<int>& v, int fallback, const char* name)
{
    const int value = v.value_or(fallback);
    if (value < 0 || value > kMaxIntParam)
        throw InvalidParameterError(std::string(name) + " must lie in [0, "
                                    + std::to_string(kMaxIntParam) + "]");
    return value;
}

void forbid(bool present, const std::string& id, const char* name)
{
    if (present)
        throw InvalidParameterError(id + " takes no parameter " + name);
}

void only_params(const std::string& id, const CatalogParams& p, bool k, bool n, bool t, bool coeffs)
{
    forbid(!k && p.k.has_value(), id, "k");
    forbid(!n && p.n.has_value(), id, "n");
    forbid(!t && p.t.has_value(), id, "t");
    forbid(!coeffs && !p.coeffs.empty(), id, "coeffs");
}

std::string fmt_num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CatalogFunction make_log()
{
    CatalogFunction f;
    f.id = "log";
    f.eval = [](double x) {
        require_positive(x, "log");
        return std::log(x);
    };
    f.exact_delta = log_delta;
    f.p_min = 1;
    f.convexity = alternating(log_like);
    return f;
}

CatalogFunction make_reciprocal()
{
    CatalogFunction f;
    f.id = "reciprocal";
    f.eval = [](double x) {
        require_positive(x, "reciprocal");
        return 1.0 / x;
    };
    f.exact_delta = reciprocal_delta;
    f.p_min = 0;
    f.convexity = alternating(reciprocal_like);
    f.known_sigma = sigma_reciprocal_closed;
    return f;
}

CatalogFunction make_inv_square()
{
    CatalogFunction f;
    f.id = "inv_square";
    f.eval = [](double x) {
        require_positive(x, "inv_square");
        return 1.0 / (x * x);
    };
    f.exact_delta = [](int j, double x) {
        require_positive(x, "inv_square");
        return inv_square_delta(j, x);
    };
    f.p_min = 0;
    f.convexity = alternating(reciprocal_like);
    f.known_sigma = sigma_inv_square_closed;
    return f;
}

CatalogFunction make_xlogx()
{
    CatalogFunction f;
    f.id = "xlogx";
    f.eval = [](double x) {
        require_positive(x, "xlogx");
        return x * std::log(x);
    };
    f.exact_delta = xlogx_delta;
    f.p_min = 2;
    f.convexity = alternating([](int q) {
        if (q <= 0)
            return KExpectation::positive;
        return reciprocal_like(q);
    });
    return f;
}

CatalogFunction make_xlogx_difference()
{
    CatalogFunction f;
    f.id = "xlogx_difference";
    f.eval = [](double x) {
        require_positive(x, "xlogx_difference");
        return xlogx_delta(1, x) - 1.0;
    };
    f.exact_delta = [](int j, double x) {
        require_positive(x, "xlogx_difference");
        return j == 0 ? xlogx_delta(1, x) - 1.0 : xlogx_delta(j + 1, x);
    };
    f.p_min = 1;
    f.convexity = alternating(log_like);
    return f;
}

CatalogFunction make_newton_poly(std::vector<double> coeffs, const std::string& id)
{
    CatalogFunction f;
    f.id = id;
    f.eval = [coeffs](double x) {
        NeumaierSum<double> acc;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            acc += coeffs[i] * binom_real(x, static_cast<int>(i));
        return acc.value();
    };
    f.exact_delta = [coeffs](int j, double x) {
        NeumaierSum<double> acc;
        for (std::size_t i = static_cast<std::size_t>(j); i < coeffs.size(); ++i)
            acc += coeffs[i] * binom_real(x, static_cast<int>(i) - j);
        return acc.value();
    };
    int p = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0.0)
            p = static_cast<int>(i) + 1;
    f.p_min = p;
    f.convexity = {ConvexityTag::all_orders_convex, std::nullopt,
                   [](int) { return KExpectation::any; }};
    f.known_sigma = [coeffs](int m, double x) { return sigma_newton_poly(coeffs, m, x); };
    return f;
}

CatalogFunction make_binomial(int k)
{
    CatalogFunction f;
    f.id = "binomial_k";
    f.params.k = k;
    f.eval = [k](double x) { return binom_real(x, k); };
    f.exact_delta = [k](int j, double x) { return j > k ? 0.0 : binom_real(x, k - j); };
    f.p_min = k + 1;
    f.convexity = {ConvexityTag::all_orders_convex, std::nullopt, [k](int q) {
                       return q + 1 <= k ? KExpectation::positive : KExpectation::any;
                   }};
    f.known_sigma = [k](int m, double x) { return sigma_binom_closed(k, m, x); };
    return f;
}

CatalogFunction make_neg_falling(int n)
{
    CatalogFunction f;
    f.id = "neg_falling_n";
    f.params.n = n;
    f.eval = [n](double x) {
        require_positive(x, "neg_falling_n");
        return sign_pow(n) * reciprocal_delta(n, x);
    };
    f.exact_delta = [n](int j, double x) {
        require_positive(x, "neg_falling_n");
        // n!/(x...(x+n)) = (-1)^n Delta^n (1/x)
        return sign_pow(n) * reciprocal_delta(n + j, x);
    };
    f.p_min = 0;
    f.convexity = alternating(reciprocal_like);
    f.known_sigma = [n](int m, double x) { return sigma_neg_falling_closed(n, m, x); };
    return f;
}

CatalogFunction make_digamma()
{
    CatalogFunction f;
    f.id = "digamma";
    f.eval = [](double x) { return digamma(x); };
    f.exact_delta = [](int j, double x) {
        return j == 0 ? digamma(x) : reciprocal_delta(j - 1, x);
    };
    f.p_min = 1;
    f.convexity = alternating(log_like);
    f.known_sigma = sigma_digamma_closed;
    return f;
}

CatalogFunction make_exp_decay(double t)
{
    CatalogFunction f;
    f.id = "exp_decay_t";
    f.params.t = t;
    f.eval = [t](double x) {
        require_positive(x, "exp_decay_t");
        return -std::expm1((1.0 - x) * t);
    };
    f.exact_delta = [t](int j, double x) {
        require_positive(x, "exp_decay_t");
        if (j == 0)
            return -std::expm1((1.0 - x) * t);
        return -std::exp((1.0 - x) * t) * std::pow(std::expm1(-t), j);
    };
    f.p_min = 1;
    f.convexity = alternating(log_like);
    f.known_sigma = [t](int m, double x) { return malmsten_bracket(m, x, t); };
    return f;
}

CatalogFunction make_piecewise()
{
    CatalogFunction f;
    f.id = "piecewise_counterexample";
    f.eval = [](double x) {
        require_positive(x, "piecewise_counterexample");
        return piecewise_eval(x);
    };
    f.p_min = 0;
    auto bounded = [](int q) {
        if (q == -1)
            return KExpectation::positive;
        if (q == 0)
            return KExpectation::negative;
        return q == 1 ? KExpectation::mixed : KExpectation::any;
    };
    f.convexity = {ConvexityTag::order_bounded, 0, bounded};
    f.known_sigma = [](int, double x) {
        require_positive(x, "piecewise_counterexample");
        return 2.0 - 2.0 * piecewise_eval(x);
    };
    f.known_sigma_max_m = 0;
    f.sigma_convexity = ConvexityProfile{ConvexityTag::order_bounded, 0, [](int q) {
                                             if (q <= 0)
                                                 return KExpectation::positive;
                                             return q == 1 ? KExpectation::mixed
                                                           : KExpectation::any;
                                         }};
    f.k_window = {1.0, 200, 0.25};
    return f;
}

} // namespace

std::string to_string(KExpectation e)
{
    switch (e) {
    case KExpectation::positive: return "eventually +";
    case KExpectation::negative: return "eventually -";
    case KExpectation::mixed: return "mixed";
    case KExpectation::any: return "any";
    }
    return "?";
}

std::string ConvexityProfile::describe() const
{
    switch (tag) {
    case ConvexityTag::all_orders_alternating: return "all-orders-alternating";
    case ConvexityTag::all_orders_convex: return "all-orders-convex";
    case ConvexityTag::order_bounded: break;
    }
    std::string s = "order-bounded(" + std::to_string(max_order.value_or(0)) + ", ";
    const KExpectation e = expected ? expected(max_order.value_or(0)) : KExpectation::any;
    s += e == KExpectation::positive ? "+1)" : e == KExpectation::negative ? "-1)" : "?)";
    return s;
}

CatalogParams CatalogParams::parse(std::string_view text)
{
    CatalogParams p;
    std::string item;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidParameterError("parameter '" + item + "' is not key=value");
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        try {
            std::size_t used = 0;
            if (key == "k" || key == "n") {
                const int v = std::stoi(value, &used);
                if (value.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(value);
                (key == "k" ? p.k : p.n) = v;
            } else if (key == "t") {
                p.t = std::stod(value, &used);
                if (value.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(value);
            } else if (key == "coeffs") {
                std::stringstream cs(value);
                std::string c;
                while (std::getline(cs, c, ','))
                    p.coeffs.push_back(std::stod(c));
            } else {
                throw InvalidParameterError("unknown parameter '" + key + "'");
            }
        } catch (const InvalidParameterError&) {
            throw;
        } catch (const std::exception&) {
            throw InvalidParameterError("cannot parse parameter '" + item + "'");
        }
    }
    return p;
}

std::string CatalogParams::to_string() const
{
    std::string s;
    auto add = [&s](const std::string& kv) { s += (s.empty() ? "" : ";") + kv; };
    if (k)
        add("k=" + std::to_string(*k));
    if (n)
        add("n=" + std::to_string(*n));
    if (t)
        add("t=" + fmt_num(*t));
    if (!coeffs.empty()) {
        std::string c;
        for (double v : coeffs)
            c += (c.empty() ? "" : ",") + fmt_num(v);
        add("coeffs=" + c);
    }
    return s;
}

std::string CatalogFunction::label() const
{
    const std::string p = params.to_string();
    return p.empty() ? id : id + "[" + p + "]";
}

CatalogFunction catalog_get(std::string_view id_view, const CatalogParams& p)
{
    const std::string id(id_view);
    if (id == "log") {
        only_params(id, p, false, false, false, false);
        return make_log();
    }
    if (id == "reciprocal") {
        only_params(id, p, false, false, false, false);
        return make_reciprocal();
    }
    if (id == "inv_square") {
        only_params(id, p, false, false, false, false);
        return make_inv_square();
    }
    if (id == "xlogx") {
        only_params(id, p, false, false, false, false);
        return make_xlogx();
    }
    if (id == "xlogx_difference") {
        only_params(id, p, false, false, false, false);
        return make_xlogx_difference();
    }
    if (id == "binomial_k") {
        only_params(id, p, true, false, false, false);
        return make_binomial(int_param(p.k, 1, "k"));
    }
    if (id == "newton_poly") {
        only_params(id, p, false, false, false, true);
        std::vector<double> coeffs = p.coeffs.empty() ? std::vector<double>{0.0, 1.0} : p.coeffs;
        if (coeffs.size() > kMaxIntParam + 1)
            throw InvalidParameterError("newton_poly supports at most 21 coefficients");
        for (double c : coeffs)
            if (!std::isfinite(c))
                throw InvalidParameterError("newton_poly coefficients must be finite");
        auto f = make_newton_poly(coeffs, id);
        f.params.coeffs = coeffs;
        return f;
    }
    if (id == "neg_falling_n") {
        only_params(id, p, false, true, false, false);
        return make_neg_falling(int_param(p.n, 1, "n"));
    }
    if (id == "digamma") {
        only_params(id, p, false, false, false, false);
        return make_digamma();
    }
    if (id == "exp_decay_t") {
        only_params(id, p, false, false, true, false);
        const double t = p.t.value_or(1.0);
        if (!(t > 0.0) || !std::isfinite(t))
            throw InvalidParameterError("exp_decay_t needs t > 0");
        return make_exp_decay(t);
    }
    if (id == "piecewise_counterexample" || id == "piecewise") {
        only_params(id, p, false, false, false, false);
        return make_piecewise();
    }
    throw UnknownFunctionError("unknown function '" + id + "'");
}

std::vector<CatalogEntryInfo> catalog_list()
{
    return {
        {"log", {}, "1", 1, "all-orders-alternating", "ln x"},
        {"reciprocal", {}, "0", 0, "all-orders-alternating", "1/x"},
        {"inv_square", {}, "0", 0, "all-orders-alternating", "1/x^2"},
        {"xlogx", {}, "2", 2, "all-orders-alternating", "x ln x"},
        {"binomial_k", {"k: integer >= 0 (default 1)"}, "k+1", 2, "all-orders-convex", "C(x,k)"},
        {"newton_poly", {"coeffs: real list a_0,...,a_q (default 0,1)"}, "q+1", 2,
         "all-orders-convex", "sum_k a_k C(x,k)"},
        {"neg_falling_n", {"n: integer >= 0 (default 1)"}, "0", 0, "all-orders-alternating",
         "n!/(x(x+1)...(x+n))"},
        {"digamma", {}, "1", 1, "all-orders-alternating", "psi(x)"},
        {"exp_decay_t", {"t: real > 0 (default 1)"}, "1", 1, "all-orders-alternating",
         "1 - exp((1-x)t)"},
        {"piecewise_counterexample", {}, "0", 0, "order-bounded(0, -1)",
         "2^-floor(x) (2 - 2{x} + {x}^2)"},
        {"xlogx_difference", {}, "1", 1, "all-orders-alternating",
         "-1 + (x+1)ln(x+1) - x ln x"},
    };
}

double eval_delta(const CatalogFunction& g, int j, double x)
{
    if (j < 0)
        throw InvalidParameterError("difference order must be nonnegative");
    if (!(x > 0.0))
        throw DomainError(g.id + ": differences need x > 0");
    if (g.exact_delta)
        return g.exact_delta(j, x);
    return forward_diff(g.eval, j, x);
}

CatalogFunction sigma_of(const CatalogFunction& g)
{
    if (!g.has_known_sigma(0))
        throw InvalidParameterError(g.id + " has no closed form for its principal sum");
    CatalogFunction s;
    s.id = "sigma(" + g.id + ")";
    s.params = g.params;
    auto ks = g.known_sigma;
    s.eval = [ks](double x) { return ks(0, x); };
    if (g.exact_delta) {
        auto gd = g.exact_delta;
        s.exact_delta = [ks, gd](int j, double x) { return j == 0 ? ks(0, x) : gd(j - 1, x); };
    } else {
        auto ge = g.eval;
        s.exact_delta = [ks, ge](int j, double x) {
            return j == 0 ? ks(0, x) : forward_diff(ge, j - 1, x);
        };
    }
    s.p_min = g.p_min + 1;
    if (g.sigma_convexity) {
        s.convexity = *g.sigma_convexity;
    } else if (!g.convexity.max_order) {
        auto ge = g.convexity.expected;
        s.convexity = {g.convexity.tag, std::nullopt,
                       [ge](int q) { return q < 0 ? KExpectation::any : ge(q - 1); }};
    } else {
        s.convexity = {ConvexityTag::order_bounded, g.convexity.max_order,
                       [](int) { return KExpectation::any; }};
    }
    s.k_window = g.k_window;
    return s;
}

CatalogFunction identity_function()
{
    return catalog_get("newton_poly", CatalogParams::parse("coeffs=0,1"));
}

} // namespace sigmacalc
