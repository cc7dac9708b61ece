#include "apg/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "apg/census.hpp"
#include "apg/characters.hpp"
#include "apg/construction.hpp"
#include "apg/factor.hpp"
#include "apg/field.hpp"
#include "apg/parallel.hpp"
#include "apg/pseudorandom.hpp"

namespace apg::cli {

namespace {

void render_value(const ojson& v, std::string& out) {
    switch (v.type()) {
        case ojson::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.12g", v.get<double>());
            out += buf;
            break;
        }
        case ojson::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& e : v) {
                if (!first) out += ',';
                first = false;
                render_value(e, out);
            }
            out += ']';
            break;
        }
        case ojson::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += ojson(it.key()).dump();
                out += ':';
                render_value(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            out += v.dump();
    }
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Opts {
    u64 p = 0;
    u64 d = 0;
    int r = 2;
    double delta = 0.5;
    std::string strategy = "uniform";
    u64 trials = 0;
    u64 seed = 1;
    unsigned threads = 0;
    std::string format = "json";
    std::string log_path;
    std::string manifest_path;
    u64 tmax = 1000;
    double eta = 0.2;
    int r0 = 0;
    int u = 2;
    u64 prime_budget = 10000;
    u64 pmin = 0;
    u64 pmax = 0;
    std::string window = "0:1";
    u64 cap = 0;
    std::string shifts;
    std::string z = "1";

    unsigned effective_threads() const { return threads == 0 ? default_threads() : threads; }
};

std::pair<double, double> parse_window(const std::string& w) {
    auto colon = w.find(':');
    if (colon == std::string::npos) throw domain_error("window must look like \"0.5:0.8\"");
    try {
        double lo = std::stod(w.substr(0, colon));
        double hi = std::stod(w.substr(colon + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw domain_error("window must look like \"0.5:0.8\"");
    }
}

std::pair<i64, i64> parse_rational(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return {std::stoll(s), 1};
        return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
    } catch (const std::exception&) {
        throw domain_error("rational must look like \"num\" or \"num/den\"");
    }
}

std::vector<u64> parse_shift_list(const std::string& s) {
    std::vector<u64> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    if (out.empty()) throw domain_error("shifts must be a comma-separated residue list");
    return out;
}

void append_log(const std::string& path, const std::string& command, const ojson& params,
                u64 seed, const ojson& result) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::app);
    if (!out) throw domain_error("cannot open log file: " + path);
    ojson record;
    record["manifest"] = make_manifest(command, params, seed);
    record["result"] = result;
    out << render_json(record) << "\n";
}

// Runs one subcommand, emits to stdout, logs. Returns the exit code.
using Runner = std::function<int(const Opts&)>;

int emit_single(const std::string& command, const ojson& params, const Opts& o,
                const ojson& result, bool verified) {
    std::cout << render_json(result) << "\n";
    append_log(o.log_path, command, params, o.seed, result);
    return verified ? 0 : 2;
}

int run_census(const Opts& o) {
    if (o.format != "json" && o.format != "csv") throw domain_error("format must be json or csv");
    if (o.p != 0) {
        ojson params{{"p", o.p}, {"d", o.d}, {"r", o.r}};
        FieldContext ctx(o.p);
        Subgroup G = ctx.subgroup(o.d);
        CensusResult c = count_normalized(G, o.r);
        DecompositionReport rep = decomposition_check(c);
        ojson result = c.to_json();
        result["residual"] = rep.residual;
        result["decomposition_ok"] = rep.decomposition_ok;
        result["threshold_met"] = rep.threshold_met;
        result["positivity_ok"] = rep.positivity_ok;
        result["pass"] = rep.pass;
        if (o.format == "csv") {
            std::cout << CensusResult::csv_header() << "\n" << c.csv_row() << "\n";
            append_log(o.log_path, "census", params, o.seed, result);
            return rep.pass ? 0 : 2;
        }
        return emit_single("census", params, o, result, rep.pass);
    }
    if (o.pmin == 0 || o.pmax == 0) throw domain_error("census needs --p/--d or --pmin/--pmax");
    auto [lo, hi] = parse_window(o.window);
    ojson params{{"pmin", o.pmin}, {"pmax", o.pmax}, {"r", o.r}, {"window", o.window}};
    auto rows = census_sweep(o.pmin, o.pmax, o.r, lo, hi, o.effective_threads());
    ojson rows_json = ojson::array();
    for (const auto& row : rows) rows_json.push_back(row.to_json());
    if (o.format == "csv") {
        std::cout << CensusResult::csv_header() << "\n";
        for (const auto& row : rows) std::cout << row.csv_row() << "\n";
    } else {
        for (const auto& row : rows_json) std::cout << render_json(row) << "\n";
    }
    append_log(o.log_path, "census", params, o.seed, rows_json);
    return 0;
}

int run_weil(const Opts& o) {
    ojson params{{"p", o.p}, {"d", o.d}, {"r", o.r}, {"cap", o.cap}, {"seed", o.seed}};
    FieldContext ctx(o.p);
    WeilReport rep = verify_weil(ctx.subgroup(o.d), o.r, o.cap, o.seed, o.effective_threads());
    return emit_single("weil", params, o, rep.to_json(), rep.pass);
}

int run_linforms(const Opts& o) {
    u64 count = o.trials == 0 ? 10 : o.trials;
    ojson params{{"p", o.p}, {"d", o.d}, {"r", o.r}, {"trials", count}, {"seed", o.seed}};
    FieldContext ctx(o.p);
    Subgroup G = ctx.subgroup(o.d);
    GtParameters gt = gt_parameters(o.r);
    const int t = 2;
    const i64 bound = 3;
    const int m_cap = static_cast<int>(std::min<i64>(gt.m0, 4));

    ojson systems = ojson::array();
    double max_dev = 0.0;
    bool all_within = true;
    for (u64 i = 0; i < count; ++i) {
        std::mt19937_64 rng(derive_seed(o.seed, i));
        int m = 1 + static_cast<int>(uniform_below(rng, static_cast<u64>(m_cap)));
        LinearFormSystem sys = LinearFormSystem::random_valid(rng, t, m, bound);
        ExpectationResult e = linear_forms_expectation(G, sys, ExpectationMode::exhaustive);
        double dev_bound = linear_forms_deviation_bound(G, m);
        bool within = e.deviation <= dev_bound;
        all_within = all_within && within;
        max_dev = std::max(max_dev, e.deviation);
        ojson entry = sys.to_json();
        entry["value"] = e.value;
        entry["deviation"] = e.deviation;
        entry["bound"] = dev_bound;
        entry["within_bound"] = within;
        systems.push_back(entry);
    }
    ojson result;
    result["p"] = o.p;
    result["d"] = o.d;
    result["r"] = o.r;
    result["m0"] = gt.m0;
    result["t"] = t;
    result["L_bound"] = bound;
    result["systems"] = systems;
    result["max_deviation"] = max_dev;
    result["all_within_bound"] = all_within;
    return emit_single("linforms", params, o, result, all_within);
}

int run_corr(const Opts& o) {
    std::vector<u64> shifts;
    if (!o.shifts.empty()) {
        shifts = parse_shift_list(o.shifts);
    } else {
        std::mt19937_64 rng(derive_seed(o.seed, 0));
        for (int i = 0; i < o.r; ++i) shifts.push_back(uniform_below(rng, o.p));
    }
    ojson params{{"p", o.p}, {"d", o.d}, {"shifts", shifts}, {"seed", o.seed}};
    FieldContext ctx(o.p);
    CorrelationResult res = correlation_expectation(ctx.subgroup(o.d), shifts);
    ojson result;
    result["p"] = o.p;
    result["d"] = o.d;
    result["q"] = shifts.size();
    result["shifts"] = shifts;
    result["value"] = res.value;
    ojson profile = ojson::array();
    for (auto [h, mult] : res.coincidence_profile) profile.push_back(ojson::array({h, mult}));
    result["coincidence_profile"] = profile;
    return emit_single("corr", params, o, result, true);
}

int run_subset_exp(const Opts& o) {
    u64 trials = o.trials == 0 ? 100 : o.trials;
    ojson params{{"p", o.p},         {"d", o.d},     {"r", o.r},
                 {"delta", o.delta}, {"strategy", o.strategy}, {"trials", trials},
                 {"seed", o.seed}};
    FieldContext ctx(o.p);
    ExperimentStats st = subset_ap_experiment(ctx.subgroup(o.d), o.delta, o.r,
                                              parse_strategy(o.strategy), trials, o.seed,
                                              o.effective_threads());
    return emit_single("subset-exp", params, o, st.to_json(), true);
}

int run_ord_scan(const Opts& o) {
    ojson params{{"p", o.p}, {"r", o.r}};
    FieldContext ctx(o.p);
    OrdScanResult res = min_ord_scan(ctx, o.r, o.effective_threads());
    return emit_single("ord-scan", params, o, res.to_json(o.p, o.r), true);
}

int run_prime_density(const Opts& o) {
    ojson params{{"tmax", o.tmax}, {"eta", o.eta}};
    PrimeDensityResult res = prime_density(o.tmax, o.eta);
    return emit_single("prime-density", params, o, res.to_json(o.tmax, o.eta), true);
}

int run_construct(const Opts& o) {
    ojson params{{"r", o.r}, {"r0", o.r0}, {"u", o.u}, {"prime_budget", o.prime_budget}};
    ConstructionConfig cfg = ConstructionConfig::make(o.r, o.r0, o.u);
    CertificateResult res = bad_prime_certificate(cfg, o.prime_budget);
    return emit_single("construct", params, o, res.to_json(), res.all_nonzero);
}

int run_mult_indep(const Opts& o) {
    ojson params{{"z", o.z}, {"r", o.r}};
    auto [num, den] = parse_rational(o.z);
    IndependenceResult res = mult_independent_subset(Rational(num, den), o.r);
    return emit_single("mult-indep", params, o, res.to_json(), true);
}

int run_apfree_search(const Opts& o) {
    auto [lo, hi] = parse_window(o.window);
    ojson params{{"pmin", o.pmin}, {"pmax", o.pmax}, {"r", o.r}, {"window", o.window}};
    auto rows = apfree_search(o.pmin, o.pmax, o.r, lo, hi, o.effective_threads());
    ojson rows_json = ojson::array();
    for (const auto& row : rows) rows_json.push_back(row.to_json());
    if (o.format == "csv") {
        std::cout << ApFreeRow::csv_header() << "\n";
        for (const auto& row : rows) std::cout << row.csv_row() << "\n";
    } else {
        for (const auto& row : rows_json) std::cout << render_json(row) << "\n";
    }
    append_log(o.log_path, "apfree-search", params, o.seed, rows_json);
    return 0;
}

int run_gt_params(const Opts& o) {
    ojson params{{"r", o.r}};
    GtParameters gt = gt_parameters(o.r);
    return emit_single("gt-params", params, o, gt.to_json(), true);
}

int run_manifest_file(const Opts& o);

int dispatch_parsed(CLI::App& app, const Opts& o) {
    static const std::vector<std::pair<std::string, Runner>> runners = {
        {"census", run_census},
        {"weil", run_weil},
        {"linforms", run_linforms},
        {"corr", run_corr},
        {"subset-exp", run_subset_exp},
        {"ord-scan", run_ord_scan},
        {"prime-density", run_prime_density},
        {"construct", run_construct},
        {"mult-indep", run_mult_indep},
        {"apfree-search", run_apfree_search},
        {"gt-params", run_gt_params},
    };
    if (!o.manifest_path.empty()) return run_manifest_file(o);
    for (const auto& [name, runner] : runners)
        if (app.get_subcommand(name)->parsed()) return runner(o);
    std::cerr << app.help();
    return 1;
}

}  // namespace

std::string render_json(const ojson& doc) {
    std::string out;
    render_value(doc, out);
    return out;
}

std::string param_hash(const std::string& command, const ojson& params) {
    // Plain (key-sorted) json gives the canonical byte stream.
    nlohmann::json canonical = nlohmann::json::parse(params.dump());
    u64 h = fnv1a64(command + "\x1f" + canonical.dump());
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ojson make_manifest(const std::string& command, const ojson& params, u64 seed) {
    ojson m;
    m["command"] = command;
    m["params"] = params;
    m["seed"] = seed;
    m["version"] = kVersion;
    m["timestamp"] = iso_timestamp();
    m["param_hash"] = param_hash(command, params);
    return m;
}

namespace {

int dispatch_impl(const std::vector<std::string>& args, bool allow_manifest) {
    Opts o;
    CLI::App app{"arithmetic progressions in multiplicative subgroups of prime fields"};
    app.require_subcommand(0, 1);
    app.fallthrough(false);

    app.add_option("--manifest", o.manifest_path, "JSON list of parameter maps to run in sequence");
    app.add_option("--log", o.log_path, "append {manifest, result} JSONL records here");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--threads", o.threads, "worker cap, 0 = machine parallelism");
        cmd->add_option("--format", o.format, "json or csv (csv for tabular output only)");
        cmd->add_option("--log", o.log_path, "append {manifest, result} JSONL records here");
    };

    auto* census = app.add_subcommand("census", "progression census for one subgroup or a sweep");
    census->add_option("--p", o.p, "prime modulus");
    census->add_option("--d", o.d, "subgroup order, divides p-1");
    census->add_option("--r", o.r, "progression parameter: counts (r+1)-term progressions");
    census->add_option("--pmin", o.pmin, "sweep: first prime");
    census->add_option("--pmax", o.pmax, "sweep: last prime");
    census->add_option("--window", o.window, "sweep divisor window as p-exponents, e.g. 0.5:0.8");
    add_common(census);

    auto* weil = app.add_subcommand("weil", "character-sum bound verification");
    weil->add_option("--p", o.p)->required();
    weil->add_option("--d", o.d)->required();
    weil->add_option("--r", o.r);
    weil->add_option("--cap", o.cap, "sample this many tuples when the space is larger; 0 = exhaustive");
    add_common(weil);

    auto* linforms = app.add_subcommand("linforms", "linear-forms condition on random valid systems");
    linforms->add_option("--p", o.p)->required();
    linforms->add_option("--d", o.d)->required();
    linforms->add_option("--r", o.r, "progression parameter fixing m0");
    linforms->add_option("--trials", o.trials, "number of random systems (default 10)");
    add_common(linforms);

    auto* corr = app.add_subcommand("corr", "correlation expectation over shifted copies");
    corr->add_option("--p", o.p)->required();
    corr->add_option("--d", o.d)->required();
    corr->add_option("--r", o.r, "number of random shifts when --shifts is absent");
    corr->add_option("--shifts", o.shifts, "comma-separated shift list, e.g. 3,3,5");
    add_common(corr);

    auto* subset = app.add_subcommand("subset-exp", "progression counts in subsets of a subgroup");
    subset->add_option("--p", o.p)->required();
    subset->add_option("--d", o.d)->required();
    subset->add_option("--r", o.r);
    subset->add_option("--delta", o.delta, "subset density in (0, 1]");
    subset->add_option("--strategy", o.strategy, "uniform | greedy_avoid | interval");
    subset->add_option("--trials", o.trials, "trials (default 100)");
    add_common(subset);

    auto* ord = app.add_subcommand("ord-scan", "minimum order of <1+t, ..., 1+rt> over t");
    ord->add_option("--p", o.p)->required();
    ord->add_option("--r", o.r);
    add_common(ord);

    auto* density = app.add_subcommand("prime-density", "primes whose p-1 has a divisor in the window");
    density->add_option("--tmax", o.tmax, "count primes up to here")->required();
    density->add_option("--eta", o.eta, "window exponent in (0, 1/2)");
    add_common(density);

    auto* construct = app.add_subcommand("construct", "product-difference family resultant certificate");
    construct->add_option("--r", o.r);
    construct->add_option("--r0", o.r0, "block size (default floor(ln r), min 1)");
    construct->add_option("--u", o.u, "exponent cap");
    construct->add_option("--prime-budget", o.prime_budget, "report bad primes up to here");
    add_common(construct);

    auto* indep = app.add_subcommand("mult-indep", "multiplicatively independent subset of {1+sz}");
    indep->add_option("--z", o.z, "rational point, e.g. 1 or 1/2");
    indep->add_option("--r", o.r);
    add_common(indep);

    auto* apfree = app.add_subcommand("apfree-search", "largest AP-free subgroup order per prime");
    apfree->add_option("--pmin", o.pmin)->required();
    apfree->add_option("--pmax", o.pmax)->required();
    apfree->add_option("--r", o.r);
    apfree->add_option("--window", o.window, "divisor window as p-exponents");
    add_common(apfree);

    auto* gt = app.add_subcommand("gt-params", "transference parameters for r");
    gt->add_option("--r", o.r)->required();
    add_common(gt);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (!allow_manifest && !o.manifest_path.empty()) {
        std::cerr << "error: nested --manifest is not allowed\n";
        return 1;
    }

    try {
        return dispatch_parsed(app, o);
    } catch (const verification_error& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_manifest_file(const Opts& o) {
    std::ifstream in(o.manifest_path);
    if (!in) throw domain_error("cannot open manifest file: " + o.manifest_path);
    ojson doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw domain_error(std::string("manifest parse error: ") + e.what());
    }
    if (!doc.is_array()) throw domain_error("manifest must be a JSON array of parameter maps");

    int worst = 0;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("command"))
            throw domain_error("manifest entries must be objects with a \"command\" key");
        std::vector<std::string> args{entry["command"].get<std::string>()};
        for (auto it = entry.begin(); it != entry.end(); ++it) {
            if (it.key() == "command") continue;
            if (it.key() == "manifest") throw domain_error("manifest entries cannot nest manifests");
            args.push_back("--" + it.key());
            const auto& v = it.value();
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
        if (!o.log_path.empty()) {
            args.push_back("--log");
            args.push_back(o.log_path);
        }
        worst = std::max(worst, dispatch_impl(args, /*allow_manifest=*/false));
    }
    return worst;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) { return dispatch_impl(args, true); }

}  // namespace apg::cli
