#include "smalldiv/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "smalldiv/census.hpp"
#include "smalldiv/divisor_sums.hpp"
#include "smalldiv/error.hpp"
#include "smalldiv/euler.hpp"
#include "smalldiv/sieve.hpp"
#include "smalldiv/weights.hpp"

namespace smalldiv::cli {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (const char ch : s) {
        quoted += ch;
        if (ch == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else {
                return std::to_string(v);
            }
        },
        c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::ordered_json(v); }, c);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

// Integer option text: plain digits or an exactly integral "1e7".
std::uint64_t to_count(const std::string& text, std::string_view name) {
    const std::string s = trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) {
        return value;
    }
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d) || d < 0 ||
        d != std::floor(d) || d > 9.0e15) {
        throw config_error("--" + std::string(name) + " expects a non-negative integer, got '" +
                           text + "'");
    }
    return static_cast<std::uint64_t>(d);
}

std::vector<std::uint64_t> to_counts(const std::vector<std::string>& texts,
                                     std::string_view name) {
    std::vector<std::uint64_t> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        out.push_back(to_count(t, name));
    }
    return out;
}

std::map<std::uint32_t, double> parse_overrides(const std::vector<std::string>& items) {
    std::map<std::uint32_t, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw config_error("--override expects p=v, got '" + item + "'");
        }
        const auto p = to_count(item.substr(0, eq), "override");
        if (p > std::numeric_limits<std::uint32_t>::max()) {
            throw config_error("override prime out of range: " + item);
        }
        const std::string value = trim(item.substr(eq + 1));
        char* end = nullptr;
        const double v = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size()) {
            throw config_error("--override value is not a number: '" + item + "'");
        }
        if (!out.emplace(static_cast<std::uint32_t>(p), v).second) {
            throw config_error("prime " + std::to_string(p) + " overridden twice");
        }
    }
    return out;
}

struct Common {
    std::string limit;
    std::string format = "csv";
    std::string output;
    std::string threads = "auto";
    std::uint64_t seed = 1;
    bool check = false;
    bool no_strict = false;
};

struct Params {
    std::string x, n, m_max, trunc = "1000000", e_max = "0";
    std::vector<std::string> x_grid;
    int k = 2;
    double c = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> overrides;
    std::uint32_t prime = 2;
    std::vector<double> v_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::string which = "f0";
    double z = 1.0;
    bool weighted = false;
    int omega = 0;
    std::size_t samples = 0;
    std::string source = "sieve_index";
    double a = -1.0, b = 1.0;
    std::string f = "log_shift";
    std::size_t points = 50;
};

Threads resolve_threads(const std::string& text) {
    if (trim(text) == "auto") {
        return Threads::automatic();
    }
    const auto n = to_count(text, "threads");
    if (n < 1 || n > 1024) {
        throw config_error("--threads must be 'auto' or in [1, 1024]");
    }
    return Threads{static_cast<unsigned>(n)};
}

// Sieve extent: --limit when given (and large enough), else just what is needed.
std::uint64_t resolve_limit(const Common& common, std::uint64_t needed) {
    needed = std::max<std::uint64_t>(needed, 2);
    if (common.limit.empty()) {
        return needed;
    }
    const auto limit = to_count(common.limit, "limit");
    if (limit < needed) {
        throw config_error("request needs a sieve up to " + std::to_string(needed) +
                           " but --limit is " + std::to_string(limit));
    }
    return limit;
}

double require_c(const Params& p) {
    if (std::isnan(p.c)) {
        throw config_error("--c is required");
    }
    return p.c;
}

std::uint64_t require_count(const std::string& text, std::string_view name) {
    if (text.empty()) {
        throw config_error("--" + std::string(name) + " is required");
    }
    return to_count(text, name);
}

std::vector<Cell> doubles(const std::vector<double>& row) {
    return {row.begin(), row.end()};
}

using Input = std::pair<std::string, Cell>;

Table run_sieve_stats(const Common& common, const Params&, Threads threads) {
    if (common.limit.empty()) {
        throw config_error("--limit is required");
    }
    const auto limit = resolve_limit(common, 0);
    const SieveTables tables = build_sieve(limit);
    const OmegaCounts counts = omega_class_counts(limit, tables, threads);
    Table t;
    t.inputs = {Input{"limit", limit}};
    t.columns = {"omega", "count"};
    std::uint64_t total = 0;
    for (std::size_t w = 0; w < counts.size(); ++w) {
        t.rows.push_back({std::uint64_t{w}, counts[w]});
        total += counts[w];
    }
    t.summary = {Input{"squarefree", total},
                 Input{"primes", std::uint64_t{tables.primes().size()}}};
    return t;
}

Table run_ratio(const Common& common, const Params& p, Threads threads) {
    const double c = require_c(p);
    const bool strict = !common.no_strict;
    Table t;
    if (!p.x_grid.empty()) {
        if (!p.x.empty() || !p.overrides.empty()) {
            throw config_error("--x-grid cannot be combined with --x or --override");
        }
        const auto grid = to_counts(p.x_grid, "x-grid");
        const auto limit = resolve_limit(common, *std::max_element(grid.begin(), grid.end()));
        const SieveTables tables = build_sieve(limit);
        t.inputs = {Input{"k", std::int64_t{p.k}}, Input{"c", c}, Input{"limit", limit},
                    Input{"strict", std::string(strict ? "true" : "false")}};
        append_report(t, ratio_convergence(p.k, c, grid, tables, strict, threads));
        return t;
    }
    const auto x = require_count(p.x, "x");
    const PrimeWeight w(c, parse_overrides(p.overrides), p.k, strict);
    const auto limit = resolve_limit(common, x);
    const SieveTables tables = build_sieve(limit);
    const RatioReport r = ratio(x, p.k, w, tables, threads);
    t.inputs = {Input{"x", x}, Input{"k", std::int64_t{p.k}}, Input{"c", c},
                Input{"limit", limit}, Input{"strict", std::string(strict ? "true" : "false")}};
    for (const auto& [prime, value] : w.overrides()) {
        t.inputs.emplace_back("override_" + std::to_string(prime), value);
    }
    t.columns = {"x", "k", "c", "s_full", "s_small", "ratio", "k_pow_neg_c"};
    t.rows.push_back({x, std::int64_t{p.k}, c, r.s_full, r.s_small, r.ratio, r.predicted_limit});
    return t;
}

Table run_monotone(const Common& common, const Params& p, Threads threads) {
    const double c = require_c(p);
    const auto x = require_count(p.x, "x");
    const auto limit = resolve_limit(common, x);
    const SieveTables tables = build_sieve(limit);
    Table t;
    t.inputs = {Input{"x", x}, Input{"k", std::int64_t{p.k}}, Input{"c", c},
                Input{"prime", std::uint64_t{p.prime}}, Input{"limit", limit}};
    append_report(t, monotonicity_scan(x, p.k, c, p.prime, p.v_grid, tables,
                                       !common.no_strict, threads));
    return t;
}

Table run_adbc(const Common& common, const Params& p, Threads threads) {
    const double c = require_c(p);
    const auto x = require_count(p.x, "x");
    const PrimeWeight w(c, parse_overrides(p.overrides), p.k, !common.no_strict);
    const auto limit = resolve_limit(common, x);
    const SieveTables tables = build_sieve(limit);
    const AbcdResult r = abcd(x, p.k, w, p.prime, tables, threads);
    Table t;
    t.inputs = {Input{"x", x}, Input{"k", std::int64_t{p.k}}, Input{"c", c},
                Input{"prime", std::uint64_t{p.prime}}, Input{"limit", limit}};
    t.columns = {"A", "B", "C", "D", "ad_minus_bc", "identity_residual_small",
                 "identity_residual_full"};
    t.rows.push_back({r.a, r.b, r.c, r.d, r.ad_minus_bc(), r.residual_small(), r.residual_full()});
    t.summary = {Input{"h_p", r.h_p},
                 Input{"s_small", r.s_small},
                 Input{"s_full", r.s_full},
                 Input{"small_identity_exact", std::string(r.small_identity_exact ? "true" : "false")},
                 Input{"full_identity_exact", std::string(r.full_identity_exact ? "true" : "false")}};
    t.verdict = r.small_identity_exact && r.full_identity_exact ? Verdict::pass : Verdict::fail;
    t.notes = "pass iff h(p)A + B = S_small and h(p)C + D = S_full hold at class level";
    return t;
}

Table run_euler(const Common&, const Params& p, Threads) {
    if (p.which != "f0" && p.which != "f1") {
        throw config_error("--which must be f0 or f1");
    }
    const auto trunc = to_count(p.trunc, "trunc");
    const EulerConstant e = p.which == "f0" ? f0(p.z, trunc) : f1(p.z, trunc);
    Table t;
    t.inputs = {Input{"which", p.which}, Input{"z", p.z}, Input{"trunc", trunc}};
    t.columns = {"which", "z", "value", "trunc", "tail_bound"};
    t.rows.push_back({p.which, p.z, e.value, trunc, e.tail_bound});
    t.summary = {Input{"largest_prime", e.truncation_prime}};
    return t;
}

Table run_predict(const Common&, const Params& p, Threads) {
    const double c = require_c(p);
    const auto x = require_count(p.x, "x");
    const auto trunc = to_count(p.trunc, "trunc");
    const double xd = static_cast<double>(x);
    const double full = predict_s_full(xd, c, trunc);
    const double small = predict_s_small(xd, p.k, c, trunc);
    Table t;
    t.inputs = {Input{"x", x}, Input{"k", std::int64_t{p.k}}, Input{"c", c},
                Input{"trunc", trunc}};
    t.columns = {"x", "k", "c", "s_full_predicted", "s_small_predicted", "ratio",
                 "s_full_predicted_via_f0"};
    t.rows.push_back(
        {x, std::int64_t{p.k}, c, full, small, small / full, predict_s_full_via_f0(xd, c, trunc)});
    return t;
}

Table run_prop32(const Common& common, const Params& p, Threads threads) {
    const auto m_max = p.m_max.empty() ? std::uint64_t{1000} : to_count(p.m_max, "m-max");
    const auto grid = p.x_grid.empty() ? std::vector<std::uint64_t>{10'000, 100'000, 1'000'000}
                                       : to_counts(p.x_grid, "x-grid");
    const auto e_max = to_count(p.e_max, "e-bound-max");
    const auto needed = std::max({m_max, e_max, *std::max_element(grid.begin(), grid.end())});
    const auto limit = resolve_limit(common, needed);
    const SieveTables tables = build_sieve(limit);
    Table t;
    t.inputs = {Input{"m_max", m_max}, Input{"limit", limit}, Input{"e_bound_max", e_max}};
    append_report(t, prop32_scan(m_max, grid, tables, threads));
    if (e_max > 0) {
        const EBoundScan e = e_bound_scan(e_max, tables);
        t.summary.emplace_back("e_bound_checked", e.checked);
        t.summary.emplace_back("e_bound_violations", e.violations);
        t.summary.emplace_back("e_bound_max_ratio", e.max_ratio);
        t.summary.emplace_back("e_bound_argmax", e.argmax);
        if (e.violations > 0) {
            t.verdict = Verdict::fail;
        }
    }
    return t;
}

Table run_census(const Common& common, const Params& p, Threads threads) {
    Table t;
    t.columns = {"n", "k", "omega", "tau_k", "g_k", "ratio"};
    auto push = [&t](const CensusRecord& r) {
        t.rows.push_back({r.n, std::int64_t{r.k}, std::int64_t{r.omega_n}, r.tau_k, r.g_k,
                          r.ratio});
    };
    if (!p.n.empty()) {
        if (p.omega != 0) {
            throw config_error("--n and --omega are mutually exclusive");
        }
        const auto n = to_count(p.n, "n");
        const auto limit = resolve_limit(common, n);
        const SieveTables tables = build_sieve(limit);
        t.inputs = {Input{"n", n}, Input{"k", std::int64_t{p.k}}};
        push(census(n, p.k, tables));
        return t;
    }
    if (p.omega == 0 || p.samples == 0) {
        throw config_error("census needs --n, or --omega with --samples");
    }
    SampleSource source;
    if (p.source == "sieve_index") {
        source = SampleSource::sieve_index;
    } else if (p.source == "prime_pool") {
        source = SampleSource::prime_pool;
    } else {
        throw config_error("--source must be sieve_index or prime_pool");
    }
    const std::uint64_t default_limit = source == SampleSource::sieve_index ? 10'000'000 : 100;
    const auto limit = common.limit.empty() ? default_limit : resolve_limit(common, 0);
    const SieveTables tables = build_sieve(limit);
    const CensusSample s =
        census_sample(p.omega, p.k, p.samples, common.seed, tables, source, threads);
    t.inputs = {Input{"omega", std::int64_t{p.omega}}, Input{"k", std::int64_t{p.k}},
                Input{"samples", std::uint64_t{p.samples}}, Input{"seed", common.seed},
                Input{"source", p.source}, Input{"limit", limit}};
    for (const auto& r : s.records) {
        push(r);
    }
    t.summary = {Input{"population", s.population},
                 Input{"mean_ratio", s.mean_ratio},
                 Input{"min_ratio", s.min_ratio},
                 Input{"max_ratio", s.max_ratio},
                 Input{"half_k", static_cast<double>(p.k) / 2.0},
                 Input{"distance_from_half_k", s.distance_from_half_k}};
    return t;
}

Table run_erdos_kac(const Common& common, const Params& p, Threads) {
    const auto x = p.x.empty() ? std::uint64_t{10'000'000} : to_count(p.x, "x");
    const auto limit = resolve_limit(common, x);
    const SieveTables tables = build_sieve(limit);
    Table t;
    t.inputs = {Input{"x", x}, Input{"a", p.a}, Input{"b", p.b}, Input{"limit", limit}};
    append_report(t, erdos_kac_histogram(x, p.a, p.b, tables));
    return t;
}

Table run_gamma_lemma(const Common& common, const Params& p, Threads) {
    GammaFunction f;
    if (p.f == "log_shift") {
        f = GammaFunction::log_shift;
    } else if (p.f == "h_table") {
        f = GammaFunction::h_table;
    } else {
        throw config_error("--f must be log_shift or h_table");
    }
    const auto n = p.n.empty() ? std::uint64_t{1'000'000} : to_count(p.n, "n");
    const double c = std::isnan(p.c) ? 0.3 : p.c;
    const PrimeWeight w(c, parse_overrides(p.overrides), 2, !common.no_strict);
    const auto limit = resolve_limit(common, f == GammaFunction::h_table ? n : 2);
    const SieveTables tables = build_sieve(limit);
    Table t;
    t.inputs = {Input{"n", n}, Input{"f", p.f}, Input{"points", std::uint64_t{p.points}}};
    if (f == GammaFunction::h_table) {
        t.inputs.emplace_back("c", c);
        t.inputs.emplace_back("prime", std::uint64_t{p.prime});
    }
    append_report(t, gamma_lemma_check(n, f, p.points, tables, w, p.prime));
    return t;
}

Table run_selberg(const Common& common, const Params& p, Threads threads) {
    const auto grid = p.x_grid.empty()
                          ? std::vector<std::uint64_t>{10'000, 100'000, 1'000'000, 10'000'000}
                          : to_counts(p.x_grid, "x-grid");
    const auto limit = resolve_limit(common, *std::max_element(grid.begin(), grid.end()));
    const SieveTables tables = build_sieve(limit);
    Table t;
    t.inputs = {Input{"z", p.z}, Input{"weighted", std::string(p.weighted ? "true" : "false")},
                Input{"limit", limit}};
    append_report(t, selberg_trend(p.z, p.weighted, grid, tables, threads));
    return t;
}

const std::set<std::string, std::less<>> flag_keys = {"check", "no-strict", "weighted"};

bool truthy(const std::string& v) {
    if (v == "true" || v == "yes" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "off" || v == "0") {
        return false;
    }
    throw config_error("expected a boolean, got '" + v + "'");
}

bool mentions(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Pulls --config out of the arguments and appends its entries as flags,
// skipping any key the command line already sets.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    for (auto it = args.begin(); it != args.end();) {
        if (*it == "--config") {
            if (std::next(it) == args.end()) {
                throw config_error("--config needs a path");
            }
            path = *std::next(it);
            it = args.erase(it, std::next(it, 2));
        } else if (it->rfind("--config=", 0) == 0) {
            path = it->substr(9);
            it = args.erase(it);
        } else {
            ++it;
        }
    }
    if (path.empty()) {
        return args;
    }
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot read config file '" + path + "'");
    }
    const std::vector<std::string> given = args;
    for (auto [key, value] : parse_config(in)) {
        if (key == "strict") {
            if (!truthy(value)) {
                key = "no-strict";
                value = "true";
            } else {
                continue;
            }
        }
        const std::string flag = "--" + key;
        if (mentions(given, flag)) {
            continue;
        }
        if (flag_keys.count(key) != 0) {
            if (truthy(value)) {
                args.push_back(flag);
            }
        } else {
            args.push_back(flag);
            args.push_back(value);
        }
    }
    return args;
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << csv_field(t.columns[i]);
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_field(cell_text(row[i]));
        }
        out << '\n';
    }
    out << "# command = " << t.command << '\n';
    for (const auto& [key, value] : t.inputs) {
        out << "# input " << key << " = " << cell_text(value) << '\n';
    }
    for (const auto& [key, value] : t.summary) {
        out << "# " << key << " = " << cell_text(value) << '\n';
    }
    if (t.verdict) {
        out << "# verdict = " << to_string(*t.verdict) << '\n';
    }
    if (!t.notes.empty()) {
        out << "# notes = " << t.notes << '\n';
    }
}

void write_json(std::ostream& out, const Table& t) {
    nlohmann::ordered_json doc;
    doc["command"] = t.command;
    doc["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.inputs) {
        doc["inputs"][key] = cell_json(value);
    }
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            obj[t.columns[i]] = cell_json(row[i]);
        }
        doc["rows"].push_back(std::move(obj));
    }
    doc["summary"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.summary) {
        doc["summary"][key] = cell_json(value);
    }
    doc["verdict"] = t.verdict ? nlohmann::ordered_json(std::string(to_string(*t.verdict)))
                               : nlohmann::ordered_json(nullptr);
    doc["notes"] = t.notes;
    out << doc.dump(2) << '\n';
}

void append_report(Table& t, const TrendReport& rep) {
    t.columns = rep.columns;
    t.rows.clear();
    for (const auto& row : rep.rows) {
        t.rows.push_back(doubles(row));
    }
    if (rep.target) {
        t.summary.emplace_back("target", *rep.target);
    } else {
        t.summary.emplace_back("target", rep.target_text);
    }
    for (const auto& [key, value] : rep.summary) {
        t.summary.emplace_back(key, value);
    }
    t.verdict = rep.verdict;
    t.notes = rep.notes;
}

std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(number) + ": expected key = value");
        }
        std::string key = trim(std::string_view(s).substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        const std::string value = trim(std::string_view(s).substr(eq + 1));
        if (key.empty()) {
            throw config_error("config line " + std::to_string(number) + ": empty key");
        }
        out.emplace_back(std::move(key), value);
    }
    return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Common common;
    Params p;

    CLI::App app{"Small-divisor sums over squarefree integers: exact counts and experiments",
                 "smalldiv"};
    app.require_subcommand(1);
    app.add_option("--config", "Read `key = value` defaults from a file; flags win");
    app.add_option("--limit", common.limit, "Sieve extent (default: whatever the request needs)");
    app.add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output", common.output, "Write to a file instead of standard output");
    app.add_option("--threads", common.threads, "Worker threads, or auto");
    app.add_option("--seed", common.seed, "Seed for sampled runs");
    app.add_flag("--check", common.check, "Exit with status 2 when a verdict is fail");
    app.add_flag("--no-strict", common.no_strict, "Admit h(p) >= 1/(k-1)");

    auto k_option = [&p](CLI::App* sub) {
        sub->add_option("--k", p.k, "Small-divisor exponent (d^k <= n)")
            ->check(CLI::Range(2, 64));
    };
    auto weight_options = [&p](CLI::App* sub) {
        sub->add_option("--c", p.c, "Base weight h(p) = c");
        sub->add_option("--override", p.overrides, "Per-prime weight p=v (repeatable)");
    };

    std::map<std::string, std::function<Table(const Common&, const Params&, Threads)>> handlers;
    auto add = [&](const std::string& name, const std::string& help, auto&& handler) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        handlers[name] = handler;
        return sub;
    };

    add("sieve-stats", "Squarefree counts per omega class up to --limit", run_sieve_stats);

    auto* ratio_cmd = add("ratio", "S_full, S_small and their ratio", run_ratio);
    ratio_cmd->add_option("--x", p.x, "Upper bound x");
    ratio_cmd->add_option("--x-grid", p.x_grid, "Grid for a convergence run")->delimiter(',');
    k_option(ratio_cmd);
    weight_options(ratio_cmd);

    auto* monotone_cmd = add("monotone", "Ratio as h(p) varies at one prime", run_monotone);
    monotone_cmd->add_option("--x", p.x, "Upper bound x");
    k_option(monotone_cmd);
    monotone_cmd->add_option("--c", p.c, "Base weight");
    monotone_cmd->add_option("--prime", p.prime, "The varied prime");
    monotone_cmd->add_option("--v-grid", p.v_grid, "Values of h(p)")->delimiter(',');

    auto* adbc_cmd = add("adbc", "A, B, C, D split by divisibility by a prime", run_adbc);
    adbc_cmd->add_option("--x", p.x, "Upper bound x");
    k_option(adbc_cmd);
    weight_options(adbc_cmd);
    adbc_cmd->add_option("--prime", p.prime, "The split prime");

    auto* euler_cmd = add("euler", "Truncated Euler products f0, f1", run_euler);
    euler_cmd->add_option("--which", p.which, "f0 or f1");
    euler_cmd->add_option("--z", p.z, "Argument z > 0");
    euler_cmd->add_option("--trunc", p.trunc, "Largest prime included");

    auto* predict_cmd = add("predict", "Main-term predictors for S_full and S_small", run_predict);
    predict_cmd->add_option("--x", p.x, "Upper bound x");
    k_option(predict_cmd);
    predict_cmd->add_option("--c", p.c, "Base weight");
    predict_cmd->add_option("--trunc", p.trunc, "Euler product truncation");

    auto* prop32_cmd = add("prop32", "Coprime squarefree counting error constants", run_prop32);
    prop32_cmd->add_option("--m-max", p.m_max, "Largest modulus m (default 1000)");
    prop32_cmd->add_option("--x-grid", p.x_grid, "Grid of x")->delimiter(',');
    prop32_cmd->add_option("--e-bound-max", p.e_max, "Also check E(m) < 2 tau(m)^(2/3) up to this");

    auto* census_cmd = add("census", "g_k(n) against tau_k(n)", run_census);
    census_cmd->add_option("--n", p.n, "One squarefree n");
    k_option(census_cmd);
    census_cmd->add_option("--omega", p.omega, "Sample n with this many prime factors");
    census_cmd->add_option("--samples", p.samples, "Sample size");
    census_cmd->add_option("--source", p.source, "sieve_index or prime_pool");

    auto* ek_cmd = add("erdos-kac", "Normalised omega(n) window fraction", run_erdos_kac);
    ek_cmd->add_option("--x", p.x, "Upper bound x (default 1e7)");
    ek_cmd->add_option("--a", p.a, "Window start");
    ek_cmd->add_option("--b", p.b, "Window end");

    auto* gamma_cmd = add("gamma-lemma", "f(x) f(N/x) on (sqrt N, N)", run_gamma_lemma);
    gamma_cmd->add_option("--n", p.n, "N (default 1e6)");
    gamma_cmd->add_option("--f", p.f, "log_shift or h_table");
    gamma_cmd->add_option("--points", p.points, "Sample points");
    weight_options(gamma_cmd);
    gamma_cmd->add_option("--prime", p.prime, "Excluded prime for h_table");

    auto* selberg_cmd = add("selberg", "Sum of z^omega(n) against its main term", run_selberg);
    selberg_cmd->add_option("--z", p.z, "z in (0, 4]");
    selberg_cmd->add_flag("--weighted", p.weighted, "Include g(n)");
    selberg_cmd->add_option("--x-grid", p.x_grid, "Grid of x")->delimiter(',');

    std::vector<std::string> args;
    try {
        args = merge_config(raw_args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    Table table;
    try {
        const Threads threads = resolve_threads(common.threads);
        for (const auto* sub : app.get_subcommands()) {
            table = handlers.at(sub->get_name())(common, p, threads);
            table.command = sub->get_name();
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    std::ostringstream text;
    if (common.format == "json") {
        write_json(text, table);
    } else {
        write_csv(text, table);
    }
    if (common.output.empty()) {
        out << text.str();
    } else {
        std::ofstream file(common.output, std::ios::binary);
        if (!(file << text.str())) {
            err << "error: cannot write '" << common.output << "'\n";
            return 1;
        }
    }
    return common.check && table.verdict == Verdict::fail ? 2 : 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

}  // namespace smalldiv::cli
