#include "torusfill/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>

#include "torusfill/diophantine.hpp"
#include "torusfill/errors.hpp"
#include "torusfill/filling.hpp"
#include "torusfill/lattice.hpp"
#include "torusfill/simulator.hpp"

namespace torusfill::cli {
namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
    int precision = 10;
    std::uint64_t seed = 1;
    std::uint64_t budget = kDefaultBudget;
    std::string format = "plain";
};

// Union of every subcommand's inputs; each subcommand binds the subset it uses.
struct Inputs {
    std::string alpha;
    std::string theta;
    std::string theta0;
    std::string q_list;
    std::string deltas;
    std::string strategy = "slab";
    std::string family = "none";
    bool normalize = false;
    bool simulate = false;
    int n = 2;
    std::int64_t q = 1;
    double tau = 1;
    double gamma = 0.1;
    double cutoff = 0;
    double delta = 0.1;
    double max_order = 10;
    double tol = 0;
    double a = 1;
    double b = 1;
    double margin = kResonantMargin;
    std::uint64_t samples = 10000;
    std::optional<double> delta_opt;
    std::optional<double> dt;
    std::optional<double> max_time;
    std::optional<double> min_cell;
};

struct Outcome {
    Json result = Json::object();
    Json diagnostics = Json::object();
    int code = kSuccess;
    bool tabular = false;  // result["rows"] holds one object per CSV row
};

double parse_decimal(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw DomainError("not a number: '" + std::string(s) + "'");
    }
    return v;
}

// Decimal or p/q rational.
double parse_scalar(std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return parse_decimal(s);
    const double den = parse_decimal(s.substr(slash + 1));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(s) + "'");
    return parse_decimal(s.substr(0, slash)) / den;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t from = 0;
    while (true) {
        const auto at = s.find(sep, from);
        parts.push_back(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from));
        if (at == std::string_view::npos) return parts;
        from = at + 1;
    }
}

RealVec parse_vector(const std::string& text) {
    RealVec v;
    for (auto part : split(text, ',')) v.push_back(parse_scalar(part));
    return v;
}

std::int64_t parse_integer(std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw DomainError("not an integer: '" + std::string(s) + "'");
    }
    return v;
}

// Comma list of integers or inclusive ranges lo:hi.
std::vector<std::int64_t> parse_integer_list(const std::string& text) {
    std::vector<std::int64_t> out;
    for (auto part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string_view::npos) {
            out.push_back(parse_integer(part));
            continue;
        }
        const auto lo = parse_integer(part.substr(0, colon));
        const auto hi = parse_integer(part.substr(colon + 1));
        if (hi < lo || hi - lo > 10000) throw DomainError("bad range '" + std::string(part) + "'");
        for (auto q = lo; q <= hi; ++q) out.push_back(q);
    }
    return out;
}

DirectionVector direction_from(const std::string& raw, bool normalize) {
    const RealVec v = parse_vector(raw);
    return normalize ? DirectionVector::normalize(v) : DirectionVector(v);
}

Enumeration strategy_from(const std::string& s) { return s == "box" ? Enumeration::box : Enumeration::slab; }

double round_digits(double v, int digits) {
    if (!std::isfinite(v) || v == 0) return v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

void round_numbers(Json& j, int digits) {
    if (j.is_number_float()) {
        j = round_digits(j.get<double>(), digits);
    } else if (j.is_structured()) {
        for (auto& item : j) round_numbers(item, digits);
    }
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Binds options on a subcommand and remembers how to echo each one.
class Binder {
public:
    explicit Binder(CLI::App* sub) : sub_(sub) {}

    template <typename T>
    CLI::Option* value(const std::string& name, T& slot, const std::string& help) {
        echo_.emplace_back(name, [&slot] { return Json(slot); });
        return sub_->add_option("--" + name, slot, help)->capture_default_str();
    }

    CLI::Option* maybe(const std::string& name, std::optional<double>& slot, const std::string& help) {
        echo_.emplace_back(name, [&slot] { return slot ? Json(*slot) : Json(); });
        return sub_->add_option("--" + name, slot, help);
    }

    CLI::Option* vector(const std::string& name, std::string& slot, const std::string& help) {
        echo_.emplace_back(name, [&slot] { return slot.empty() ? Json() : Json(parse_vector(slot)); });
        return sub_->add_option("--" + name, slot, help);
    }

    CLI::Option* integers(const std::string& name, std::string& slot, const std::string& help) {
        echo_.emplace_back(name, [&slot] { return slot.empty() ? Json() : Json(parse_integer_list(slot)); });
        return sub_->add_option("--" + name, slot, help);
    }

    CLI::Option* flag(const std::string& name, bool& slot, const std::string& help) {
        echo_.emplace_back(name, [&slot] { return Json(slot); });
        return sub_->add_flag("--" + name, slot, help);
    }

    void config(RunConfig& cfg) {
        value("precision", cfg.precision, "significant digits in the report")->check(CLI::Range(1, 17));
        value("seed", cfg.seed, "seed for randomized subcommands");
        value("budget", cfg.budget, "enumeration node budget")->check(CLI::PositiveNumber);
        value("format", cfg.format, "json, csv or plain")->check(CLI::IsMember({"json", "csv", "plain"}));
    }

    [[nodiscard]] Json params() const {
        Json p = Json::object();
        for (const auto& [name, get] : echo_) p[name] = get();
        return p;
    }

    [[nodiscard]] CLI::App* app() const { return sub_; }

private:
    CLI::App* sub_;
    std::vector<std::pair<std::string, std::function<Json()>>> echo_;
};

Json witness_json(const ViolationWitness& w) {
    return Json{{"k", w.k}, {"inner", w.inner}, {"threshold", w.threshold}};
}

Json basis_json(const AdaptedBasis& basis) {
    const auto report = check_invariants(basis);
    Json j;
    j["alpha"] = basis.alpha.coords();
    j["columns"] = basis.integer_basis.columns;
    j["multipliers"] = basis.multipliers;
    j["directions"] = basis.directions;
    j["lambdas"] = basis.cylinder_minima.lambdas;
    j["minima_witnesses"] = basis.cylinder_minima.witnesses;
    j["invariants"] = Json{{"multiplier_lower", report.multiplier_lower},
                           {"multiplier_upper", report.multiplier_upper},
                           {"deviations", report.deviations},
                           {"deviation_bounds", report.deviation_bounds},
                           {"determinant", report.determinant},
                           {"multipliers_ok", report.multipliers_ok},
                           {"deviations_ok", report.deviations_ok},
                           {"unimodular", report.unimodular},
                           {"all_ok", report.all_ok()}};
    return j;
}

DioParams dio_params(int n, const Inputs& in) {
    DioParams p{n, in.tau, in.gamma, in.cutoff};
    p.validate();
    return p;
}

Outcome run_check(const Inputs& in, const RunConfig& cfg) {
    const auto alpha = direction_from(in.alpha, in.normalize);
    const auto params = dio_params(static_cast<int>(alpha.dim()), in);
    const auto res = check_truncated(alpha, params, strategy_from(in.strategy), cfg.budget);
    Outcome o;
    o.result["alpha"] = alpha.coords();
    o.result["passed"] = res.passed();
    o.result["witness"] = res.violation ? witness_json(*res.violation) : Json();
    o.code = res.passed() ? kSuccess : kMathFailure;
    return o;
}

Outcome run_gamma(const Inputs& in, const RunConfig& cfg) {
    const auto alpha = direction_from(in.alpha, in.normalize);
    const auto best = best_gamma(alpha, in.tau, in.cutoff, strategy_from(in.strategy), cfg.budget);
    Outcome o;
    o.result["alpha"] = alpha.coords();
    o.result["gamma_max"] = best.gamma_max;
    o.result["argmin"] = best.argmin;
    return o;
}

Outcome run_resonances(const Inputs& in, const RunConfig& cfg) {
    const auto alpha = direction_from(in.alpha, in.normalize);
    const auto found = resonance_search(alpha, in.max_order, in.tol, cfg.budget);
    Outcome o;
    o.tabular = true;
    o.result["rows"] = Json::array();
    for (const auto& r : found) {
        o.result["rows"].push_back(Json{{"k", r.k}, {"order", r.order}, {"residual", r.residual}});
    }
    o.diagnostics["alpha"] = alpha.coords();
    o.diagnostics["count"] = found.size();
    return o;
}

Outcome run_cutoff(const Inputs& in, const RunConfig&) {
    Outcome o;
    o.result["cutoff"] = critical_cutoff(in.n, in.delta);
    return o;
}

Outcome run_bound(const Inputs& in, const RunConfig&) {
    Outcome o;
    o.result["bound"] = filling_time_bound(in.n, in.tau, in.gamma, in.delta);
    o.result["constant"] = bound_constant(in.n, in.tau);
    o.result["critical_cutoff"] = critical_cutoff(in.n, in.delta);
    return o;
}

Outcome run_basis(const Inputs& in, const RunConfig& cfg) {
    const auto alpha = direction_from(in.alpha, in.normalize);
    const auto params = dio_params(static_cast<int>(alpha.dim()), in);
    Outcome o;
    try {
        const auto basis = adapted_basis(alpha, params, cfg.budget);
        o.result = basis_json(basis);
        o.code = o.result["invariants"]["all_ok"].get<bool>() ? kSuccess : kMathFailure;
    } catch (const HypothesisError& e) {
        o.result["alpha"] = alpha.coords();
        o.result["hypothesis"] = false;
        o.result["witness"] = witness_json(e.witness());
        o.code = kMathFailure;
    }
    return o;
}

Outcome run_hit(const Inputs& in, const RunConfig& cfg) {
    const auto alpha = direction_from(in.alpha, in.normalize);
    const auto params = dio_params(static_cast<int>(alpha.dim()), in);
    const RealVec theta = parse_vector(in.theta);
    Outcome o;
    try {
        const auto basis = adapted_basis(alpha, params, cfg.budget);
        const auto c = hitting_time(basis, theta, in.delta);
        o.result["theta"] = c.theta;
        o.result["coords"] = c.coords;
        o.result["time"] = c.time;
        o.result["endpoint_distance"] = c.endpoint_distance;
        o.result["distance_bound"] = c.distance_bound;
        o.result["multiplier_sum"] = c.multiplier_sum;
        o.result["bound"] = c.bound;
        o.result["delta"] = c.delta;
        o.result["cutoff_used"] = c.cutoff_used;
        o.result["critical_cutoff"] = c.critical_cutoff;
        o.result["guarantee_applies"] = c.guarantee_applies;
        o.result["reached"] = c.endpoint_distance < c.delta;
        o.diagnostics["columns"] = basis.integer_basis.columns;
        o.diagnostics["multipliers"] = basis.multipliers;
        o.code = c.endpoint_distance < c.delta ? kSuccess : kMathFailure;
    } catch (const HypothesisError& e) {
        o.result["alpha"] = alpha.coords();
        o.result["hypothesis"] = false;
        o.result["witness"] = witness_json(e.witness());
        o.code = kMathFailure;
    }
    return o;
}

Json coverage_json(const CoverageResult& r) {
    return Json{{"delta", r.delta},
                {"dt", r.time_step},
                {"filled", r.fill_time.has_value()},
                {"fill_time", r.fill_time ? Json(*r.fill_time) : Json()},
                {"steps", r.steps},
                {"uncovered_cells", r.uncovered_cells}};
}

Outcome run_fill(const Inputs& in, const RunConfig&) {
    if (!in.max_time) throw DomainError("fill needs --max-time");
    std::vector<double> deltas;
    if (!in.deltas.empty()) {
        deltas = parse_vector(in.deltas);
    } else if (in.delta_opt) {
        deltas.push_back(*in.delta_opt);
    } else {
        throw DomainError("fill needs --delta or --deltas");
    }

    struct Flow {
        std::optional<std::int64_t> q;
        DirectionVector alpha;
    };
    std::vector<Flow> flows;
    if (in.family == "none") {
        if (!in.q_list.empty()) throw DomainError("--q needs --family");
        if (in.alpha.empty()) throw DomainError("fill needs --alpha or --family");
        flows.push_back({std::nullopt, direction_from(in.alpha, in.normalize)});
    } else {
        if (!in.alpha.empty()) throw DomainError("--alpha and --family are exclusive");
        if (in.q_list.empty()) throw DomainError("--family needs --q");
        const double second = in.family == "resonant" ? 1.0 : std::sqrt(2.0);
        for (auto q : parse_integer_list(in.q_list)) {
            const double v[2] = {static_cast<double>(q), second};
            flows.push_back({q, DirectionVector::normalize(v)});
        }
    }

    CoverageOptions options;
    options.min_cell_diameter = in.min_cell.value_or(0);
    const bool sweep = flows.front().q.has_value() || deltas.size() > 1 || !in.deltas.empty();
    Outcome o;
    o.tabular = sweep;
    o.result["rows"] = Json::array();
    for (const auto& flow : flows) {
        RealVec start(flow.alpha.dim(), 0.0);
        if (!in.theta0.empty()) start = parse_vector(in.theta0);
        for (double delta : deltas) {
            const double dt = in.dt.value_or(delta / 10);
            const auto r = empirical_fill_time(flow.alpha, start, delta, dt, *in.max_time, options);
            if (!r.fill_time) o.code = kMathFailure;
            Json row;
            if (flow.q) row["q"] = *flow.q;
            const Json cov = coverage_json(r);
            for (const auto& [k, v] : cov.items()) row[k] = v;
            if (!sweep) {
                row["alpha"] = flow.alpha.coords();
                o.diagnostics["grid_side"] = r.grid_side;
                o.diagnostics["min_cell_diameter"] = r.min_cell_diameter;
                o.result = row;
                return o;
            }
            o.result["rows"].push_back(row);
        }
    }
    return o;
}

Outcome run_duality(const Inputs& in, const RunConfig& cfg) {
    const CylinderBody body{direction_from(in.alpha, in.normalize), in.a, in.b};
    validate(body);
    const auto polar = polar_body(body);
    const auto products = duality_check(body, cfg.budget);
    const double upper = factorial(static_cast<int>(body.axis.dim()));
    bool in_range = true;
    for (double p : products) in_range = in_range && p >= 1 - 1e-9 && p <= upper + 1e-9;
    Outcome o;
    o.result["axis"] = body.axis.coords();
    o.result["products"] = products;
    o.result["lower"] = 1.0;
    o.result["upper"] = upper;
    o.result["in_range"] = in_range;
    o.diagnostics["cylinder_minima"] = successive_minima(body, cfg.budget).lambdas;
    o.diagnostics["polar_minima"] = successive_minima(polar, cfg.budget).lambdas;
    o.code = in_range ? kSuccess : kMathFailure;
    return o;
}

Outcome run_measure(const Inputs& in, const RunConfig& cfg) {
    const auto params = dio_params(in.n, in);
    const auto est = complement_measure_estimate(params, in.samples, cfg.seed);
    Outcome o;
    o.result["fraction"] = est.fraction;
    o.result["standard_error"] = est.standard_error;
    o.result["samples"] = est.samples;
    o.result["excluded"] = est.excluded;
    return o;
}

Outcome run_demo_resonant(const Inputs& in, const RunConfig&) {
    if (in.q < 1 || in.q > 1000) throw DomainError("--q must lie in [1, 1000]");
    const auto ref = resonant_reference(static_cast<int>(in.q));
    Outcome o;
    o.result["q"] = in.q;
    o.result["alpha"] = ref.alpha.coords();
    o.result["delta"] = ref.delta;
    o.result["expected_time"] = ref.expected_time;
    if (!in.simulate) return o;
    if (!(in.margin > 0 && in.margin < 1)) throw DomainError("--margin must lie in (0, 1)");

    const double dt = ref.delta / 10;
    CoverageOptions options;
    options.min_cell_diameter = in.margin * ref.delta;
    const double start[2] = {0, 0};
    const auto r = empirical_fill_time(ref.alpha, start, ref.delta * (1 + in.margin), dt,
                                       in.max_time.value_or(2 * ref.expected_time), options);
    const double tolerance = 2 * dt;
    const bool within = r.fill_time && std::abs(*r.fill_time - ref.expected_time) <= tolerance;
    o.result["simulated_delta"] = r.delta;
    o.result["dt"] = dt;
    o.result["measured_time"] = r.fill_time ? Json(*r.fill_time) : Json();
    o.result["error"] = r.fill_time ? Json(*r.fill_time - ref.expected_time) : Json();
    o.result["tolerance"] = tolerance;
    o.result["within_tolerance"] = within;
    o.diagnostics["steps"] = r.steps;
    o.diagnostics["uncovered_cells"] = r.uncovered_cells;
    o.diagnostics["min_cell_diameter"] = r.min_cell_diameter;
    o.code = within ? kSuccess : kMathFailure;
    return o;
}

// Shortest round-trip text, so values rounded to p digits print with at most p.
std::string scalar_text(const Json& j, bool mark_float = true) {
    if (!j.is_number_float()) return j.dump();
    const double v = j.get<double>();
    if (!std::isfinite(v)) return "null";
    char buf[64];
    const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
    std::string s(buf, end);
    if (mark_float && s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

void write_json(const Json& j, std::ostream& out, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    if (j.is_object() && !j.empty()) {
        out << "{\n";
        std::size_t i = 0;
        for (const auto& [k, v] : j.items()) {
            out << pad << Json(k).dump() << ": ";
            write_json(v, out, depth + 1);
            out << (++i < j.size() ? ",\n" : "\n");
        }
        out << close << '}';
    } else if (j.is_array() && !j.empty()) {
        out << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out << pad;
            write_json(j[i], out, depth + 1);
            out << (i + 1 < j.size() ? ",\n" : "\n");
        }
        out << close << ']';
    } else {
        out << scalar_text(j);
    }
}

std::string inline_text(const Json& j, const char* sep) {
    if (j.is_string()) return j.get<std::string>();
    if (!j.is_array()) return scalar_text(j, false);
    std::string s = "(";
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) s += sep;
        s += inline_text(j[i], sep);
    }
    return s + ")";
}

void flatten(const Json& j, const std::string& prefix, const char* sep,
             std::vector<std::pair<std::string, std::string>>& out) {
    const auto join = [&](const std::string& key) { return prefix.empty() ? key : prefix + "." + key; };
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, join(k), sep, out);
        return;
    }
    if (j.is_array() && std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_object(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", sep, out);
        return;
    }
    out.emplace_back(prefix, inline_text(j, sep));
}

void write_csv_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
}

void render(const Json& report, const Outcome& o, const RunConfig& cfg, std::ostream& out) {
    if (cfg.format == "json") {
        write_json(report, out, 0);
        out << '\n';
        return;
    }
    if (cfg.format == "csv") {
        Json rows = o.tabular ? report["result"]["rows"] : Json::array({report["result"]});
        if (rows.empty()) return;
        std::vector<std::string> header;
        for (const auto& [k, v] : rows.front().items()) header.push_back(k);
        write_csv_line(out, header);
        for (const auto& row : rows) {
            std::vector<std::string> cells;
            for (const auto& key : header) {
                std::vector<std::pair<std::string, std::string>> parts;
                flatten(row.contains(key) ? row[key] : Json(), "", " ", parts);
                std::string cell;
                for (const auto& [k, v] : parts) cell += (cell.empty() ? "" : " ") + v;
                cells.push_back(cell);
            }
            write_csv_line(out, cells);
        }
        return;
    }
    std::vector<std::pair<std::string, std::string>> lines;
    lines.emplace_back("command", report["command"].get<std::string>());
    flatten(report["result"], "", ", ", lines);
    if (!report["diagnostics"].empty()) flatten(report["diagnostics"], "diagnostics", ", ", lines);
    for (const auto& [k, v] : lines) out << k << ": " << v << '\n';
}

std::uint64_t budget_from_environment() {
    const char* raw = std::getenv(kBudgetVariable);
    if (raw == nullptr || *raw == '\0') return kDefaultBudget;
    const auto v = parse_integer(raw);
    if (v < 1) throw DomainError(std::string(kBudgetVariable) + " must be a positive integer");
    return static_cast<std::uint64_t>(v);
}

using Handler = Outcome (*)(const Inputs&, const RunConfig&);

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg.budget = budget_from_environment();
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    Inputs in;
    CLI::App app("Filling times for linear flows on the n-torus", "torusfill");
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::vector<std::pair<Binder, Handler>> commands;
    const auto add = [&](const std::string& name, const std::string& help, Handler run) -> Binder& {
        commands.emplace_back(Binder(app.add_subcommand(name, help)), run);
        return commands.back().first;
    };
    const auto direction = [&](Binder& b, const std::string& name = "alpha") {
        b.vector(name, in.alpha, "direction, comma separated decimals or p/q")->required();
        b.flag("normalize", in.normalize, "scale the direction to unit length");
    };

    commands.reserve(11);
    {
        auto& b = add("check", "test the truncated Diophantine condition", run_check);
        direction(b);
        b.value("tau", in.tau, "exponent tau >= n - 1")->required();
        b.value("gamma", in.gamma, "constant gamma in (0, 1)")->required();
        b.value("N", in.cutoff, "truncation order")->required();
        b.value("strategy", in.strategy, "slab or box")->check(CLI::IsMember({"slab", "box"}));
        b.config(cfg);
    }
    {
        auto& b = add("gamma", "largest gamma admitted up to order N", run_gamma);
        direction(b);
        b.value("tau", in.tau, "exponent tau")->required();
        b.value("N", in.cutoff, "truncation order")->required();
        b.value("strategy", in.strategy, "slab or box")->check(CLI::IsMember({"slab", "box"}));
        b.config(cfg);
    }
    {
        auto& b = add("resonances", "primitive near-resonances up to a given order", run_resonances);
        direction(b);
        b.value("max-order", in.max_order, "largest |k|")->required();
        b.value("tol", in.tol, "largest |k.alpha|");
        b.config(cfg);
    }
    {
        auto& b = add("cutoff", "critical truncation order N*(delta)", run_cutoff);
        b.value("n", in.n, "dimension")->required();
        b.value("delta", in.delta, "target density")->required();
        b.config(cfg);
    }
    {
        auto& b = add("bound", "filling time bound", run_bound);
        b.value("n", in.n, "dimension")->required();
        b.value("tau", in.tau, "exponent tau")->required();
        b.value("gamma", in.gamma, "constant gamma")->required();
        b.value("delta", in.delta, "target density")->required();
        b.config(cfg);
    }
    {
        auto& b = add("basis", "adapted Z-basis with invariant report", run_basis);
        direction(b);
        b.value("tau", in.tau, "exponent tau")->required();
        b.value("gamma", in.gamma, "constant gamma")->required();
        b.value("N", in.cutoff, "truncation order")->required();
        b.config(cfg);
    }
    {
        auto& b = add("hit", "hitting time certificate for a target point", run_hit);
        direction(b);
        b.value("tau", in.tau, "exponent tau")->required();
        b.value("gamma", in.gamma, "constant gamma")->required();
        b.value("N", in.cutoff, "truncation order")->required();
        b.vector("theta", in.theta, "target point on the torus")->required();
        b.value("delta", in.delta, "target density")->required();
        b.config(cfg);
    }
    {
        auto& b = add("fill", "simulated fill time, optionally swept over q or delta", run_fill);
        b.vector("alpha", in.alpha, "direction, comma separated decimals or p/q");
        b.flag("normalize", in.normalize, "scale the direction to unit length");
        b.value("family", in.family, "none, resonant N(q,1) or sqrt2 N(q,sqrt 2)")
            ->check(CLI::IsMember({"none", "resonant", "sqrt2"}));
        b.integers("q", in.q_list, "q values for --family, list or lo:hi");
        b.maybe("delta", in.delta_opt, "target density");
        b.vector("deltas", in.deltas, "list of densities to sweep");
        b.maybe("dt", in.dt, "time step, delta/10 when absent");
        b.maybe("max-time", in.max_time, "time horizon")->required();
        b.vector("theta0", in.theta0, "starting point, origin when absent");
        b.maybe("min-cell", in.min_cell, "smallest certified cell diameter");
        b.config(cfg);
    }
    {
        auto& b = add("duality", "successive minima products of a cylinder and its polar", run_duality);
        direction(b, "axis");
        b.value("a", in.a, "axial half-length")->required();
        b.value("b", in.b, "radial half-width")->required();
        b.config(cfg);
    }
    {
        auto& b = add("measure", "Monte Carlo measure of the excluded directions", run_measure);
        b.value("n", in.n, "dimension")->required();
        b.value("tau", in.tau, "exponent tau")->required();
        b.value("gamma", in.gamma, "constant gamma")->required();
        b.value("N", in.cutoff, "truncation order")->required();
        b.value("samples", in.samples, "number of random directions")->check(CLI::PositiveNumber);
        b.config(cfg);
    }
    {
        auto& b = add("demo-resonant", "resonant reference flow N(q,1)", run_demo_resonant);
        b.value("q", in.q, "slope numerator")->required();
        b.flag("simulate", in.simulate, "measure the fill time with the simulator");
        b.value("margin", in.margin, "relative radius margin of the simulation");
        b.maybe("max-time", in.max_time, "time horizon, twice the expected time when absent");
        b.config(cfg);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsageError;
    }

    for (auto& [binder, run] : commands) {
        if (!binder.app()->parsed()) continue;
        try {
            Json report;
            report["command"] = binder.app()->get_name();
            report["params"] = binder.params();
            Outcome o = run(in, cfg);
            round_numbers(o.result, cfg.precision);
            round_numbers(o.diagnostics, cfg.precision);
            report["result"] = o.result;
            report["diagnostics"] = o.diagnostics;
            report["version"] = kVersion;
            render(report, o, cfg, out);
            return o.code;
        } catch (const DomainError& e) {
            err << "error: " << e.what() << '\n';
            return kUsageError;
        } catch (const ResourceError& e) {
            err << "resource limit: " << e.what() << '\n';
            return kResourceError;
        } catch (const InvariantError& e) {
            err << "invariant failure: " << e.what() << '\n';
            return kMathFailure;
        }
    }
    err << app.help();
    return kUsageError;
}

std::vector<std::string> args_from_report(const std::string& json_report) {
    const Json report = Json::parse(json_report);
    std::vector<std::string> args{report.at("command").get<std::string>()};
    const auto scalar = [](const Json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_float()) return format_double(v.get<double>());
        return v.dump();
    };
    for (const auto& [name, v] : report.at("params").items()) {
        if (v.is_null() || (v.is_boolean() && !v.get<bool>())) continue;
        if (v.is_boolean()) {
            args.push_back("--" + name);
            continue;
        }
        std::string text;
        if (v.is_array()) {
            for (const auto& e : v) text += (text.empty() ? "" : ",") + scalar(e);
        } else {
            text = scalar(v);
        }
        args.push_back("--" + name + "=" + text);
    }
    return args;
}

}  // namespace torusfill::cli
