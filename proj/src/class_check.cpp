#include "sigmacalc/class_check.hpp"

#include "sigmacalc/errors.hpp"
#include "sigmacalc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sigmacalc {

namespace {

constexpr double kDecayThreshold = 1e-6;
constexpr int kDecadeSamples = 64;
constexpr std::int64_t kStrictSamples = 50;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<double> last_decade(const GridWindow& w)
{
    const double hi = w.last();
    const double lo = std::max(w.start, hi / 10.0);
    std::vector<double> pts;
    for (int i = 0; i < kDecadeSamples; ++i) {
        const double v = lo * std::pow(hi / lo, static_cast<double>(i) / (kDecadeSamples - 1));
        const double idx = std::round((v - w.start) / w.step);
        const double p = w.start + idx * w.step;
        if (pts.empty() || p > pts.back())
            pts.push_back(p);
    }
    return pts;
}

bool decays(const std::vector<double>& mag)
{
    for (std::size_t i = 1; i < mag.size(); ++i)
        if (mag[i] > mag[i - 1] * (1.0 + 1e-12))
            return false;
    return mag.back() < kDecayThreshold || mag.back() <= 0.5 * mag.front();
}

struct Sample {
    double value = 0.0;
    double noise = 0.0;
};

Sample k_sample(const CatalogFunction& g, int order, double x, double step)
{
    if (step == 1.0 && g.exact_delta)
        return {g.exact_delta(order, x), 0.0};
    double scale = 0.0;
    for (int j = 0; j <= order; ++j)
        scale = std::max(scale, std::abs(g.eval(x + j * step)));
    return {forward_diff(g.eval, order, x, step), std::ldexp(8.0 * kEps * scale, order)};
}

KSign classify(const std::vector<Sample>& s)
{
    std::size_t pos = 0, neg = 0;
    for (const auto& v : s) {
        if (!(std::abs(v.value) > v.noise))
            continue;
        (v.value > 0 ? pos : neg) += 1;
    }
    if (pos > 0 && neg > 0)
        return KSign::mixed;
    if (2 * (pos + neg) < s.size() || pos + neg == 0)
        return KSign::inconclusive;
    return pos > 0 ? KSign::eventually_positive : KSign::eventually_negative;
}

bool sign_matches(KSign s, KExpectation e)
{
    switch (e) {
    case KExpectation::any: return true;
    case KExpectation::positive: return s == KSign::eventually_positive;
    case KExpectation::negative: return s == KSign::eventually_negative;
    case KExpectation::mixed: return s == KSign::mixed;
    }
    return false;
}

nlohmann::json window_json(const GridWindow& w)
{
    return {{"start", w.start}, {"count", w.count}, {"step", w.step}, {"end", w.last()}};
}

} // namespace

std::string to_string(KSign s)
{
    switch (s) {
    case KSign::eventually_positive: return "eventually +";
    case KSign::eventually_negative: return "eventually -";
    case KSign::mixed: return "mixed";
    case KSign::inconclusive: return "inconclusive";
    }
    return "?";
}

std::optional<int> check_D(const CatalogFunction& g, int p_max, const GridWindow& window)
{
    window.validate();
    if (window.last() < 1e4)
        throw InvalidParameterError("check_D needs a window reaching 1e4");
    const auto pts = last_decade(window);
    for (int p = 0; p <= p_max; ++p) {
        std::vector<double> mag(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            mag[i] = std::abs(eval_delta(g, p, pts[i]));
        if (std::all_of(mag.begin(), mag.end(), [](double v) { return std::isfinite(v); })
            && decays(mag))
            return p;
    }
    return std::nullopt;
}

KSign check_K(const CatalogFunction& g, int q, const GridWindow& window, bool strict)
{
    window.validate();
    if (q < -1)
        throw InvalidParameterError("check_K needs q >= -1");
    if (window.count < 200)
        throw InvalidParameterError("check_K needs at least 200 samples");
    const std::int64_t first = strict ? window.count - kStrictSamples : window.count / 4;
    std::vector<double> xs;
    for (std::int64_t i = first; i < window.count; ++i)
        xs.push_back(window.at(i));
    const int order = q + 1;
    auto samples = parallel_map<Sample>(
        xs, [&](double x) { return k_sample(g, order, x, window.step); });
    if (strict)
        for (auto& s : samples)
            s.noise = 0.0;
    return classify(samples);
}

ClassReport class_report(const CatalogFunction& g, int p_max, int q_max, const GridWindow& d_window)
{
    ClassReport r;
    r.subject = g.label();
    r.p_max = p_max;
    r.d_window = d_window;
    r.window = g.k_window;
    r.p_D_estimate = check_D(g, p_max, d_window);
    for (int q = -1; q <= q_max; ++q)
        r.K_evidence[q] = check_K(g, q, g.k_window);
    return r;
}

std::vector<std::string> metadata_mismatches(const ClassReport& report, const CatalogFunction& g)
{
    std::vector<std::string> out;
    if (report.p_D_estimate != std::optional<int>(g.p_min))
        out.push_back("p_D: declared " + std::to_string(g.p_min) + ", observed "
                      + (report.p_D_estimate ? std::to_string(*report.p_D_estimate) : "none"));
    for (const auto& [q, sign] : report.K_evidence) {
        const KExpectation e = g.convexity.expected ? g.convexity.expected(q) : KExpectation::any;
        if (!sign_matches(sign, e))
            out.push_back("K q=" + std::to_string(q) + ": declared " + to_string(e) + ", observed "
                          + to_string(sign));
    }
    return out;
}

nlohmann::json to_json(const ClassReport& report)
{
    nlohmann::json k = nlohmann::json::object();
    for (const auto& [q, sign] : report.K_evidence)
        k[std::to_string(q)] = to_string(sign);
    nlohmann::json j;
    j["subject"] = report.subject;
    j["p_max"] = report.p_max;
    j["p_D_estimate"] = report.p_D_estimate ? nlohmann::json(*report.p_D_estimate)
                                            : nlohmann::json("none");
    j["d_window"] = window_json(report.d_window);
    j["window"] = window_json(report.window);
    j["K_evidence"] = k;
    return j;
}

} // namespace sigmacalc
