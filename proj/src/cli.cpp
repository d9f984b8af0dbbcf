#include "sigmacalc/cli.hpp"

#include "sigmacalc/catalog.hpp"
#include "sigmacalc/class_check.hpp"
#include "sigmacalc/errors.hpp"
#include "sigmacalc/malmsten.hpp"
#include "sigmacalc/multiple_gamma.hpp"
#include "sigmacalc/parallel.hpp"
#include "sigmacalc/sigma.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

namespace sigmacalc::cli {

namespace {

constexpr std::int64_t kBarnesTerms = std::int64_t{1} << 20;
constexpr double kClosedFormTolerance = 1e-12;
constexpr double kToleranceSafety = 10.0;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string fn;
    std::string params;
    int m = 0;
    std::vector<double> xs;
    std::string grid;
    std::string route = "limit";
    std::string routes;
    std::optional<double> tol;
    std::optional<int> p_boost;
    std::optional<std::int64_t> n_max;
    std::optional<double> quad_tol;
    std::optional<int> quad_nodes;
    std::string format = "csv";
    std::string out;
    int sigma = 0;
};

using Cell = std::variant<double, std::int64_t, std::string, bool>;
using Row = std::vector<Cell>;

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

std::string cell_text(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<T, std::int64_t>)
                return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>)
                return v ? "true" : "false";
            else
                return v;
        },
        c);
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"')
            q += '"';
        q += ch;
    }
    return q + "\"";
}

nlohmann::json cell_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v))
                    return format_double(v);
                // keep the fixed 15-digit rendering in JSON as well
                return nlohmann::json::parse(format_double(v));
            } else {
                return v;
            }
        },
        c);
}

void write_table(const Table& t, const std::string& format, std::ostream& os)
{
    if (format == "csv") {
        for (std::size_t i = 0; i < t.header.size(); ++i)
            os << (i ? "," : "") << csv_field(t.header[i]);
        os << "\r\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_field(cell_text(row[i]));
            os << "\r\n";
        }
    } else if (format == "json") {
        for (const auto& row : t.rows) {
            nlohmann::ordered_json j;
            for (std::size_t i = 0; i < row.size(); ++i)
                j[t.header[i]] = cell_json(row[i]);
            os << j.dump() << "\n";
        }
    } else {
        std::vector<std::size_t> width(t.header.size());
        std::vector<std::vector<std::string>> text;
        for (std::size_t i = 0; i < t.header.size(); ++i)
            width[i] = t.header[i].size();
        for (const auto& row : t.rows) {
            text.emplace_back();
            for (std::size_t i = 0; i < row.size(); ++i) {
                text.back().push_back(cell_text(row[i]));
                width[i] = std::max(width[i], text.back().back().size());
            }
        }
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                os << cells[i];
                if (i + 1 < cells.size())
                    os << std::string(width[i] - cells[i].size() + 2, ' ');
            }
            os << "\n";
        };
        line(t.header);
        for (const auto& r : text)
            line(r);
    }
}

std::vector<double> parse_grid(const std::string& spec)
{
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("grid '" + spec + "' is not start:stop:step");
        }
    }
    if (parts.size() != 3)
        throw ConfigError("grid '" + spec + "' is not start:stop:step");
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0.0) || !std::isfinite(step))
        throw ConfigError("grid step must be positive");
    if (!(stop >= start))
        throw ConfigError("grid stop must not precede start");
    const double span = (stop - start) / step;
    if (span > 1e7)
        throw ConfigError("grid has too many points");
    const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> xs;
    for (std::int64_t i = 0; i < count; ++i)
        xs.push_back(start + static_cast<double>(i) * step);
    return xs;
}

std::vector<double> points(const Options& o)
{
    if (!o.xs.empty() && !o.grid.empty())
        throw ConfigError("give either --x or --grid, not both");
    std::vector<double> xs = o.grid.empty() ? o.xs : parse_grid(o.grid);
    if (xs.empty())
        throw ConfigError("no evaluation points: use --x or --grid");
    for (double x : xs)
        if (!(x > 0.0) || !std::isfinite(x))
            throw ConfigError("evaluation points must be positive");
    return xs;
}

std::vector<std::string> split_routes(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty() && std::find(out.begin(), out.end(), item) == out.end())
            out.push_back(item);
    return out;
}

SigmaControl control(const Options& o)
{
    SigmaControl c;
    if (o.tol)
        c.tolerance = *o.tol;
    if (o.p_boost)
        c.p_boost = *o.p_boost;
    if (o.n_max)
        c.n_max = *o.n_max;
    c.validate();
    return c;
}

QuadratureSpec quadrature(const Options& o)
{
    QuadratureSpec q;
    if (o.quad_tol)
        q.target_tol = *o.quad_tol;
    if (o.quad_nodes)
        q.nodes_per_panel = *o.quad_nodes;
    q.validate();
    return q;
}

struct RouteValue {
    double value = 0.0;
    std::int64_t n_used = 0;
    double remainder = 0.0;
    bool converged = true;
    std::string termination;
    double tolerance = 0.0; // for cross-route comparison
};

struct Request {
    CatalogFunction g;
    int m = 0; // Sigma^{m+1} g
    SigmaControl ctrl;
    QuadratureSpec quad;
};

void check_route(const std::string& route, const Request& r)
{
    const bool is_log = r.g.id == "log";
    if (route == "limit" || route == "cauchy")
        return;
    if (route == "closed") {
        if (!r.g.has_known_sigma(r.m))
            throw ConfigError("route 'closed' has no closed form for " + r.g.label());
        return;
    }
    if (route == "malmsten") {
        if (!is_log)
            throw ConfigError("route 'malmsten' applies to --fn log only");
        return;
    }
    if (route == "barnes") {
        if (!is_log || r.m != 1)
            throw ConfigError("route 'barnes' applies to --fn log with Sigma^2 only");
        return;
    }
    throw ConfigError("unknown route '" + route + "'");
}

RouteValue from_sigma(const SigmaResult& s, double nominal)
{
    RouteValue v;
    v.value = s.value;
    v.n_used = s.n_used;
    v.remainder = s.remainder_estimate;
    v.converged = s.converged;
    v.termination = to_string(s.termination);
    v.tolerance = kToleranceSafety * std::max(nominal, s.remainder_estimate) * std::max(1.0, std::abs(s.value));
    return v;
}

RouteValue evaluate(const std::string& route, const Request& r, double x)
{
    try {
        if (route == "limit")
            return from_sigma(sigma_eval(r.g, r.m, x, r.ctrl), r.ctrl.tolerance);
        if (route == "cauchy")
            return from_sigma(sigma_via_cauchy(r.g, r.m, x, r.ctrl), r.ctrl.tolerance);
        if (route == "closed")
            return from_sigma(sigma_closed(r.g, r.m, x), kClosedFormTolerance);
        if (route == "malmsten") {
            const QuadratureResult q = malmsten_ln_Gm_detailed(r.m, x, r.quad);
            RouteValue v;
            v.value = q.value;
            v.n_used = q.panels;
            v.remainder = q.error_estimate;
            v.converged = q.tolerance_met;
            v.termination = q.tolerance_met ? "converged" : "budget-exhausted";
            v.tolerance = kToleranceSafety * std::max(r.quad.target_tol, q.error_estimate);
            return v;
        }
        if (route == "barnes") {
            RouteValue v;
            v.value = barnes_limit_extrapolated(x, kBarnesTerms, BarnesVariant::outside_gamma);
            const double coarse =
                barnes_limit_extrapolated(x, kBarnesTerms / 2, BarnesVariant::outside_gamma);
            v.n_used = kBarnesTerms;
            v.remainder = std::abs(v.value - coarse);
            v.termination = "extrapolated";
            v.tolerance = kToleranceSafety * std::max(1e-12, v.remainder) * std::max(1.0, std::abs(v.value));
            return v;
        }
    } catch (const NonConvergenceError& e) {
        RouteValue v = from_sigma(e.best(), r.ctrl.tolerance);
        v.converged = false;
        return v;
    } catch (const QuadratureError& e) {
        RouteValue v;
        v.value = e.best().value;
        v.remainder = e.best().error_estimate;
        v.converged = false;
        v.termination = "budget-exhausted";
        return v;
    }
    throw ConfigError("unknown route '" + route + "'");
}

Request make_request(const Options& o, int sigma_m)
{
    if (o.fn.empty())
        throw ConfigError("--fn is required");
    Request r{catalog_get(o.fn, CatalogParams::parse(o.params)), sigma_m, control(o), quadrature(o)};
    return r;
}

std::ostream& sink(const Options& o, std::ostream& out, std::ofstream& file)
{
    if (o.out.empty())
        return out;
    file.open(o.out, std::ios::binary);
    if (!file)
        throw ConfigError("cannot open output file '" + o.out + "'");
    return file;
}

void require_format(const Options& o)
{
    if (o.format != "csv" && o.format != "json" && o.format != "plain")
        throw ConfigError("unknown format '" + o.format + "'");
}

int cmd_list(const Options& o, std::ostream& out)
{
    std::ofstream file;
    std::ostream& os = sink(o, out, file);
    for (const auto& e : catalog_list()) {
        nlohmann::ordered_json j;
        j["id"] = e.id;
        j["params"] = e.param_schema;
        j["p_min"] = e.p_min_default;
        j["p_min_rule"] = e.p_min_rule;
        j["convexity"] = e.convexity;
        j["description"] = e.description;
        os << j.dump() << "\n";
    }
    return kOk;
}

int cmd_eval(const Options& o, std::ostream& out)
{
    require_format(o);
    if (o.m < 0)
        throw ConfigError("--m must be nonnegative");
    Request r = make_request(o, o.m);
    const auto xs = points(o);
    check_route(o.route, r);
    require_admissible(r.g, r.m);

    const auto values =
        parallel_map<RouteValue>(xs, [&](double x) { return evaluate(o.route, r, x); });
    Table t{{"x", "value", "route", "n_used", "remainder_estimate", "converged", "termination"}, {}};
    bool all = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto& v = values[i];
        all = all && v.converged;
        t.rows.push_back({xs[i], v.value, o.route, v.n_used, v.remainder, v.converged, v.termination});
    }
    std::ofstream file;
    write_table(t, o.format, sink(o, out, file));
    return all ? kOk : kNotConverged;
}

struct Comparison {
    std::vector<RouteValue> values;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool ok = true;
};

Comparison compare_point(const std::vector<std::string>& routes, const Request& r, double x)
{
    Comparison c;
    for (const auto& route : routes)
        c.values.push_back(evaluate(route, r, x));
    c.tolerance = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < routes.size(); ++a) {
        c.ok = c.ok && c.values[a].converged;
        for (std::size_t b = a + 1; b < routes.size(); ++b) {
            const double dev = std::abs(c.values[a].value - c.values[b].value);
            const double tol = c.values[a].tolerance + c.values[b].tolerance;
            c.deviation = std::max(c.deviation, dev);
            c.tolerance = std::min(c.tolerance, tol);
            if (!(dev <= tol))
                c.ok = false;
        }
    }
    return c;
}

int cmd_compare(const Options& o, std::ostream& out)
{
    require_format(o);
    if (o.m < 0)
        throw ConfigError("--m must be nonnegative");
    const auto routes = split_routes(o.routes);
    if (routes.size() < 2)
        throw ConfigError("compare needs at least two distinct --routes");
    Request r = make_request(o, o.m);
    const auto xs = points(o);
    for (const auto& route : routes)
        check_route(route, r);
    require_admissible(r.g, r.m);

    const auto cmp =
        parallel_map<Comparison>(xs, [&](double x) { return compare_point(routes, r, x); });
    Table t;
    t.header.push_back("x");
    for (const auto& route : routes)
        t.header.push_back("value_" + route);
    for (const auto& h : {"max_deviation", "tolerance", "ok"})
        t.header.push_back(h);
    bool all = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Row row{xs[i]};
        for (const auto& v : cmp[i].values)
            row.emplace_back(v.value);
        row.emplace_back(cmp[i].deviation);
        row.emplace_back(cmp[i].tolerance);
        row.emplace_back(cmp[i].ok);
        all = all && cmp[i].ok;
        t.rows.push_back(std::move(row));
    }
    std::ofstream file;
    write_table(t, o.format, sink(o, out, file));
    return all ? kOk : kNotConverged;
}

int cmd_check(const Options& o, std::ostream& out)
{
    if (o.fn.empty())
        throw ConfigError("--fn is required");
    if (o.sigma != 0 && o.sigma != 1)
        throw ConfigError("--sigma must be 0 or 1");
    CatalogFunction g = catalog_get(o.fn, CatalogParams::parse(o.params));
    if (o.sigma == 1) {
        if (!g.has_known_sigma(0))
            throw ConfigError(g.label() + " has no closed-form principal sum to check");
        g = sigma_of(g);
    }
    const ClassReport report = class_report(g);
    const auto mismatches = metadata_mismatches(report, g);
    nlohmann::json j = to_json(report);
    nlohmann::json k = nlohmann::json::object();
    for (const auto& [q, sign] : report.K_evidence) {
        (void)sign;
        k[std::to_string(q)] = to_string(g.convexity.expected ? g.convexity.expected(q) : KExpectation::any);
    }
    j["declared"] = {{"p_min", g.p_min}, {"convexity", g.convexity.describe()}, {"K_expected", k}};
    j["mismatches"] = mismatches;
    j["consistent"] = mismatches.empty();
    std::ofstream file;
    sink(o, out, file) << j.dump(2) << "\n";
    return mismatches.empty() ? kOk : kNotConverged;
}

int cmd_gamma_table(const Options& o, std::ostream& out)
{
    require_format(o);
    if (o.m < 1)
        throw ConfigError("gamma-table needs --m >= 1");
    const auto routes = split_routes(o.routes.empty() ? "limit,malmsten" : o.routes);
    Options lo = o;
    lo.fn = "log";
    lo.params.clear();
    Request r = make_request(lo, o.m - 1);
    const auto xs = points(o);
    for (const auto& route : routes)
        check_route(route, r);

    const auto cmp =
        parallel_map<Comparison>(xs, [&](double x) { return compare_point(routes, r, x); });
    Table t;
    t.header.push_back("x");
    for (const auto& route : routes)
        t.header.push_back("lnG_" + route);
    t.header.push_back("max_deviation");
    bool all = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Row row{xs[i]};
        for (const auto& v : cmp[i].values) {
            row.emplace_back(v.value);
            all = all && v.converged;
        }
        row.emplace_back(cmp[i].deviation);
        t.rows.push_back(std::move(row));
    }
    std::ofstream file;
    write_table(t, o.format, sink(o, out, file));
    return all ? kOk : kNotConverged;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Principal indefinite sums and multiple gamma functions"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file (flags override it)")
        ->envname("SIGMA_CALC_CONFIG");

    Options o;
    app.add_option("--fn", o.fn, "catalog function id");
    app.add_option("--params", o.params, "function parameters, e.g. k=2 or coeffs=0,1,2");
    app.add_option("--m", o.m, "iteration index: evaluates Sigma^{m+1} g (gamma-table: G_m)");
    app.add_option("--x", o.xs, "evaluation point(s)")->delimiter(',');
    app.add_option("--grid", o.grid, "start:stop:step");
    app.add_option("--route", o.route, "limit | cauchy | closed | malmsten | barnes");
    app.add_option("--routes", o.routes, "comma-separated routes");
    app.add_option("--tol", o.tol, "limit-route tolerance");
    app.add_option("--p-boost", o.p_boost, "extra Newton correction terms");
    app.add_option("--n-max", o.n_max, "largest n in the doubling schedule");
    app.add_option("--quad-tol", o.quad_tol, "quadrature target tolerance");
    app.add_option("--quad-nodes", o.quad_nodes, "Gauss-Legendre nodes per panel");
    app.add_option("--format", o.format, "csv | json | plain");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--sigma", o.sigma, "check: 1 inspects Sigma g instead of g");

    auto* list = app.add_subcommand("list-functions", "catalog as JSON lines")->fallthrough();
    auto* eval = app.add_subcommand("eval", "evaluate Sigma^{m+1} g")->fallthrough();
    auto* compare = app.add_subcommand("compare", "cross-route deviations")->fallthrough();
    auto* check = app.add_subcommand("check", "class membership evidence")->fallthrough();
    auto* table = app.add_subcommand("gamma-table", "ln G_m over a grid")->fallthrough();

    std::vector<std::string> argv_store{"sigma_calc"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (list->parsed())
            return cmd_list(o, out);
        if (eval->parsed())
            return cmd_eval(o, out);
        if (compare->parsed())
            return cmd_compare(o, out);
        if (check->parsed())
            return cmd_check(o, out);
        if (table->parsed())
            return cmd_gamma_table(o, out);
    } catch (const AdmissibilityError& e) {
        err << "refused: " << e.what() << "\n";
        return kRefused;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kConfigError;
    }
    err << "error: no command\n";
    return kConfigError;
}

} // namespace sigmacalc::cli
