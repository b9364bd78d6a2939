#include "discdrift/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "discdrift/atlas.hpp"
#include "discdrift/csv.hpp"
#include "discdrift/errors.hpp"
#include "discdrift/noise.hpp"
#include "discdrift/parallel.hpp"
#include "discdrift/study.hpp"

namespace discdrift::cli {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
    case ExperimentKind::Converge:
        return "converge";
    case ExperimentKind::Evolution:
        return "evolution";
    case ExperimentKind::Histogram:
        return "histogram";
    case ExperimentKind::Stationary:
        return "stationary";
    case ExperimentKind::Atlas:
        return "atlas";
    case ExperimentKind::Paths:
        return "paths";
    }
    return "converge";
}

namespace {

constexpr std::array<ExperimentKind, 6> kKinds{
    ExperimentKind::Converge,   ExperimentKind::Evolution, ExperimentKind::Histogram,
    ExperimentKind::Stationary, ExperimentKind::Atlas,     ExperimentKind::Paths};

std::set<std::string> allowed_keys(ExperimentKind kind) {
    std::set<std::string> keys{"experiment", "output_dir", "master_seed"};
    const auto add = [&](std::initializer_list<const char*> more) { keys.insert(more.begin(), more.end()); };
    switch (kind) {
    case ExperimentKind::Converge:
        add({"catalog", "drift", "scheme", "xi", "sigma", "T", "fine_exponent",
             "coarse_exponents", "M", "regression_window"});
        break;
    case ExperimentKind::Evolution:
        add({"catalog", "drift", "scheme", "xi", "sigma", "T", "fine_exponent",
             "coarse_exponents", "samples"});
        break;
    case ExperimentKind::Histogram:
        add({"catalog", "drift", "scheme", "xi", "sigma", "T", "fine_exponent",
             "coarse_exponents", "M"});
        break;
    case ExperimentKind::Paths:
        add({"catalog", "drift", "scheme", "xi", "sigma", "T", "fine_exponent", "paths"});
        break;
    case ExperimentKind::Stationary:
        add({"catalog", "drift", "xi", "dt", "burn_in", "length", "probes"});
        break;
    case ExperimentKind::Atlas:
        add({"dimension", "g", "sigma", "initial_log_caps", "horizons", "dt", "M",
             "noise_substeps"});
        break;
    }
    return keys;
}

double number_field(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
    return x;
}

std::uint64_t unsigned_field(const json& obj, const std::string& key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(key, "expected a non-negative integer");
}

int int_field(const json& obj, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < -1000 || x > 1000) throw ConfigError(key, "integer out of range");
    return static_cast<int>(x);
}

std::vector<double> number_array(const json& v, const std::string& field) {
    if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw ConfigError(field + "[" + std::to_string(i) + "]", "expected a number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::string string_field(const json& obj, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
}

// Drift from {"catalog": name} at top level or inside "drift", or from
// {"drift": {"breakpoints": [...], "values": [...]}}.
void parse_drift(const json& obj, ExperimentConfig& cfg) {
    const bool top_catalog = obj.contains("catalog");
    const bool has_drift = obj.contains("drift");
    if (top_catalog == has_drift) {
        throw ConfigError("drift", "give exactly one of \"catalog\" or \"drift\"");
    }
    const double xi = number_field(obj, "xi", 0.0);
    std::string name;
    if (top_catalog) {
        name = string_field(obj, "catalog");
    } else {
        const json& drift = obj.at("drift");
        if (!drift.is_object()) throw ConfigError("drift", "expected an object");
        for (const auto& [key, _] : drift.items()) {
            if (key != "catalog" && key != "breakpoints" && key != "values") {
                throw ConfigError("drift." + key, "unknown key");
            }
        }
        if (drift.contains("catalog")) {
            if (drift.contains("breakpoints") || drift.contains("values")) {
                throw ConfigError("drift", "catalog cannot be combined with breakpoints/values");
            }
            name = string_field(drift, "catalog");
        } else {
            if (!drift.contains("values")) throw ConfigError("drift.values", "missing field");
            auto breakpoints = drift.contains("breakpoints")
                                   ? number_array(drift.at("breakpoints"), "drift.breakpoints")
                                   : std::vector<double>{};
            auto values = number_array(drift.at("values"), "drift.values");
            try {
                cfg.spec.drift = PiecewiseDrift(std::move(breakpoints), std::move(values));
            } catch (const ParameterError& e) {
                throw ConfigError("drift", e.what());
            }
            cfg.spec.initial_value = xi;
            return;
        }
    }
    try {
        cfg.spec = catalog(name, xi);
    } catch (const LookupError& e) {
        throw ConfigError(top_catalog ? "catalog" : "drift.catalog", e.what());
    }
    cfg.catalog_name = name;
}

void parse_sde(const json& obj, ExperimentConfig& cfg) {
    parse_drift(obj, cfg);
    cfg.spec.sigma = number_field(obj, "sigma", 1.0);
    cfg.spec.horizon = number_field(obj, "T", 1.0);
    if (!(cfg.spec.sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    if (!(cfg.spec.horizon > 0.0)) throw ConfigError("T", "must be positive");
    if (obj.contains("scheme")) {
        try {
            cfg.scheme = scheme_from_string(string_field(obj, "scheme"));
        } catch (const LookupError& e) {
            throw ConfigError("scheme", e.what());
        }
    }
    cfg.fine_exponent = int_field(obj, "fine_exponent", cfg.fine_exponent);
    if (cfg.fine_exponent < 1 || cfg.fine_exponent > 24) {
        throw ConfigError("fine_exponent", "must lie in [1, 24]");
    }
    if (obj.contains("coarse_exponents")) {
        const json& v = obj.at("coarse_exponents");
        if (!v.is_array() || v.empty()) {
            throw ConfigError("coarse_exponents", "expected a non-empty array of integers");
        }
        cfg.coarse_exponents.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer()) {
                throw ConfigError("coarse_exponents[" + std::to_string(i) + "]",
                                  "expected an integer");
            }
            cfg.coarse_exponents.push_back(v[i].get<int>());
        }
        std::sort(cfg.coarse_exponents.begin(), cfg.coarse_exponents.end());
        cfg.coarse_exponents.erase(
            std::unique(cfg.coarse_exponents.begin(), cfg.coarse_exponents.end()),
            cfg.coarse_exponents.end());
    }
    for (int e : cfg.coarse_exponents) {
        if (e < 0 || e >= cfg.fine_exponent) {
            throw ConfigError("coarse_exponents", "every exponent must lie in [0, fine_exponent)");
        }
    }
    if (cfg.experiment == ExperimentKind::Paths) return;
    cfg.replications = unsigned_field(obj, "M", cfg.replications);
    if (cfg.replications < 2) throw ConfigError("M", "must be at least 2");
}

void parse_stationary(const json& obj, ExperimentConfig& cfg) {
    parse_drift(obj, cfg);
    const auto breakpoints = cfg.spec.drift.breakpoints();
    const DriftDirection direction = classify(cfg.spec.drift);
    if (breakpoints.size() != 1 || breakpoints[0] != 0.0 ||
        direction.kind != DriftDirection::Kind::Inward) {
        throw ConfigError("drift", "stationary experiment needs a two-region inward drift about 0");
    }
    auto& st = cfg.stationary;
    st.dt = number_field(obj, "dt", st.dt);
    if (!(st.dt > 0.0)) throw ConfigError("dt", "must be positive");
    st.burn_in = unsigned_field(obj, "burn_in", st.burn_in);
    st.length = unsigned_field(obj, "length", st.length);
    if (st.length == 0) throw ConfigError("length", "must be positive");
    if (obj.contains("probes")) {
        const json& p = obj.at("probes");
        if (!p.is_object()) throw ConfigError("probes", "expected {\"lo\", \"hi\", \"count\"}");
        for (const auto& [key, _] : p.items()) {
            if (key != "lo" && key != "hi" && key != "count") {
                throw ConfigError("probes." + key, "unknown key");
            }
        }
        st.probe_lo = number_field(p, "lo", st.probe_lo);
        st.probe_hi = number_field(p, "hi", st.probe_hi);
        st.probe_count = unsigned_field(p, "count", st.probe_count);
    }
    if (!(st.probe_hi > st.probe_lo) || st.probe_count < 2) {
        throw ConfigError("probes", "need lo < hi and count >= 2");
    }
}

void parse_atlas(const json& obj, ExperimentConfig& cfg) {
    auto& at = cfg.atlas;
    cfg.replications = 1000;
    at.dimension = unsigned_field(obj, "dimension", at.dimension);
    at.g = number_field(obj, "g", at.g);
    at.sigma = number_field(obj, "sigma", at.sigma);
    at.dt = number_field(obj, "dt", at.dt);
    at.noise_substeps = unsigned_field(obj, "noise_substeps", at.noise_substeps);
    cfg.replications = unsigned_field(obj, "M", cfg.replications);
    if (obj.contains("initial_log_caps")) {
        at.initial_log_caps = number_array(obj.at("initial_log_caps"), "initial_log_caps");
    }
    if (obj.contains("horizons")) at.horizons = number_array(obj.at("horizons"), "horizons");

    if (at.dimension == 0) throw ConfigError("dimension", "must be positive");
    if (at.initial_log_caps.size() != at.dimension) {
        throw ConfigError("initial_log_caps", "needs one value per firm");
    }
    if (!(at.g > 0.0)) throw ConfigError("g", "must be positive");
    if (!(at.sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    if (!(at.dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (at.noise_substeps == 0) throw ConfigError("noise_substeps", "must be positive");
    if (cfg.replications == 0) throw ConfigError("M", "must be positive");
    if (at.horizons.empty()) throw ConfigError("horizons", "needs at least one horizon");
    for (std::size_t i = 0; i < at.horizons.size(); ++i) {
        const double steps = at.horizons[i] / at.dt;
        if (!(at.horizons[i] > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * steps) {
            throw ConfigError("horizons[" + std::to_string(i) + "]",
                              "must be a positive integer multiple of dt");
        }
    }
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

json drift_json(const ExperimentConfig& cfg) {
    if (cfg.catalog_name) return json{{"catalog", *cfg.catalog_name}};
    const auto b = cfg.spec.drift.breakpoints();
    const auto v = cfg.spec.drift.values();
    return json{{"breakpoints", std::vector<double>(b.begin(), b.end())},
                {"values", std::vector<double>(v.begin(), v.end())}};
}

} // namespace

ExperimentConfig parse_config(std::string_view text) {
    json obj;
    try {
        obj = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON at line " +
                                  std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                                  ": " + e.what());
    }
    if (!obj.is_object()) throw ConfigError("", "config must be a JSON object");
    if (!obj.contains("experiment")) throw ConfigError("experiment", "missing field");

    ExperimentConfig cfg;
    const std::string kind = string_field(obj, "experiment");
    const auto found = std::find_if(kKinds.begin(), kKinds.end(),
                                    [&](ExperimentKind k) { return to_string(k) == kind; });
    if (found == kKinds.end()) {
        throw ConfigError("experiment", "unknown experiment '" + kind +
                                            "' (expected converge, evolution, histogram, "
                                            "stationary, atlas, paths)");
    }
    cfg.experiment = *found;

    const auto keys = allowed_keys(cfg.experiment);
    for (const auto& [key, _] : obj.items()) {
        if (!keys.contains(key)) {
            throw ConfigError(key, "unknown key for experiment '" + kind + "'");
        }
    }

    cfg.master_seed = unsigned_field(obj, "master_seed", cfg.master_seed);
    if (obj.contains("output_dir")) cfg.output_dir = string_field(obj, "output_dir");

    switch (cfg.experiment) {
    case ExperimentKind::Converge:
    case ExperimentKind::Evolution:
    case ExperimentKind::Histogram:
    case ExperimentKind::Paths:
        parse_sde(obj, cfg);
        break;
    case ExperimentKind::Stationary:
        parse_stationary(obj, cfg);
        break;
    case ExperimentKind::Atlas:
        parse_atlas(obj, cfg);
        break;
    }

    if (cfg.experiment == ExperimentKind::Converge && obj.contains("regression_window")) {
        const auto window = number_array(obj.at("regression_window"), "regression_window");
        if (window.size() != 2 || window[0] != std::floor(window[0]) ||
            window[1] != std::floor(window[1]) || window[0] > window[1]) {
            throw ConfigError("regression_window", "expected [first, last] exponents, first <= last");
        }
        cfg.regression_window = std::pair{static_cast<int>(window[0]), static_cast<int>(window[1])};
    }
    if (cfg.experiment == ExperimentKind::Evolution) {
        cfg.samples = unsigned_field(obj, "samples", cfg.samples);
        if (cfg.samples == 0) throw ConfigError("samples", "must be positive");
    }
    if (cfg.experiment == ExperimentKind::Paths) {
        cfg.path_count = unsigned_field(obj, "paths", cfg.path_count);
        if (cfg.path_count == 0) throw ConfigError("paths", "must be positive");
    }
    return cfg;
}

// output_dir is left out so that runs written to different places compare
// byte for byte.
json ExperimentConfig::to_json() const {
    json out{{"experiment", to_string(experiment)}, {"master_seed", master_seed}};
    switch (experiment) {
    case ExperimentKind::Converge:
    case ExperimentKind::Evolution:
    case ExperimentKind::Histogram:
    case ExperimentKind::Paths:
        out["drift"] = drift_json(*this);
        out["xi"] = spec.initial_value;
        out["sigma"] = spec.sigma;
        out["T"] = spec.horizon;
        out["scheme"] = discdrift::to_string(scheme);
        out["fine_exponent"] = fine_exponent;
        if (experiment != ExperimentKind::Paths) {
            out["coarse_exponents"] = coarse_exponents;
        }
        if (experiment == ExperimentKind::Converge || experiment == ExperimentKind::Histogram) {
            out["M"] = replications;
        }
        if (experiment == ExperimentKind::Converge) {
            out["regression_window"] =
                regression_window ? json::array({regression_window->first, regression_window->second})
                                  : json(nullptr);
        }
        if (experiment == ExperimentKind::Evolution) out["samples"] = samples;
        if (experiment == ExperimentKind::Paths) out["paths"] = path_count;
        break;
    case ExperimentKind::Stationary:
        out["drift"] = drift_json(*this);
        out["xi"] = spec.initial_value;
        out["dt"] = stationary.dt;
        out["burn_in"] = stationary.burn_in;
        out["length"] = stationary.length;
        out["probes"] = {{"lo", stationary.probe_lo},
                         {"hi", stationary.probe_hi},
                         {"count", stationary.probe_count}};
        break;
    case ExperimentKind::Atlas:
        out["dimension"] = atlas.dimension;
        out["g"] = atlas.g;
        out["sigma"] = atlas.sigma;
        out["initial_log_caps"] = atlas.initial_log_caps;
        out["horizons"] = atlas.horizons;
        out["dt"] = atlas.dt;
        out["M"] = replications;
        out["noise_substeps"] = atlas.noise_substeps;
        break;
    }
    return out;
}

namespace {

class OutputDir {
public:
    explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) {
            throw std::runtime_error("cannot create output directory " + dir_.string() + ": " +
                                     ec.message());
        }
    }

    template <class Fill>
    void write(const std::string& name, Fill&& fill) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        fill(out);
        out.flush();
        if (!out) throw std::runtime_error("failed writing " + path.string());
        files_.push_back(path);
    }

    std::vector<std::filesystem::path> take_files() { return std::move(files_); }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
};

ConvergenceStudyConfig study_config(const ExperimentConfig& cfg, unsigned threads) {
    ConvergenceStudyConfig study;
    study.spec = cfg.spec;
    study.scheme = cfg.scheme;
    study.fine_exponent = cfg.fine_exponent;
    study.coarse_exponents = cfg.coarse_exponents;
    study.replications = cfg.replications;
    study.master_seed = cfg.master_seed;
    study.regression_window = cfg.regression_window;
    study.threads = threads;
    return study;
}

json direction_json(const PiecewiseDrift& drift) {
    const DriftDirection d = classify(drift);
    json out{{"kind", discdrift::to_string(d.kind)}};
    out["point"] = d.kind == DriftDirection::Kind::Neither ? json(nullptr) : json(d.point);
    return out;
}

json optional_number(const std::optional<double>& value) {
    return value ? json(*value) : json(nullptr);
}

void run_converge(const ExperimentConfig& cfg, unsigned threads, OutputDir& dir, json& summary) {
    const ConvergenceReport report = run_convergence(study_config(cfg, threads));
    dir.write("convergence.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        w.header({"exponent", "step", "rmse", "rmse_standard_error", "log2_rmse",
                  "mean_drift_changes", "fraction_with_drift_change", "max_error", "min_error"});
        for (const auto& l : report.levels) {
            w.row(l.exponent, cfg.spec.horizon / std::ldexp(1.0, l.exponent), l.rmse,
                  l.rmse_standard_error, std::log2(l.rmse), l.mean_drift_changes,
                  l.fraction_with_drift_change, l.max_error, l.min_error);
        }
    });
    summary["direction"] = direction_json(cfg.spec.drift);
    summary["rate"] = optional_number(report.rate);
    summary["rate_note"] = report.rate_note;
    if (report.regression) {
        summary["regression"] = {{"slope", report.regression->slope},
                                 {"intercept", report.regression->intercept},
                                 {"residual_norm", report.regression->residual_norm},
                                 {"slope_standard_error", report.regression->slope_standard_error}};
    } else {
        summary["regression"] = nullptr;
    }
    summary["reference"] = {
        {"mean_drift_changes", report.reference_mean_drift_changes},
        {"fraction_with_drift_change", report.reference_fraction_with_drift_change},
        {"paths_with_drift_change", report.reference_paths_with_drift_change}};
    json levels = json::array();
    for (const auto& l : report.levels) {
        levels.push_back({{"exponent", l.exponent},
                          {"rmse", l.rmse},
                          {"rmse_standard_error", l.rmse_standard_error},
                          {"max_error", l.max_error},
                          {"min_error", l.min_error},
                          {"mean_drift_changes", l.mean_drift_changes}});
    }
    summary["levels"] = std::move(levels);
}

void run_evolution(const ExperimentConfig& cfg, unsigned threads, OutputDir& dir, json& summary) {
    const ConvergenceStudyConfig study = study_config(cfg, threads);
    json per_level = json::array();
    for (int exponent : cfg.coarse_exponents) {
        const ErrorEvolution evo = error_evolution(study, exponent, cfg.samples);
        dir.write("evolution_n" + std::to_string(exponent) + ".csv", [&](std::ostream& os) {
            csv::Writer w(os);
            w.header({"time", "rmse", "coarse_drift_changes", "reference_drift_changes"});
            for (std::size_t k = 0; k < evo.times.size(); ++k) {
                w.row(evo.times[k], evo.rmse[k], evo.coarse_changes[k], evo.reference_changes[k]);
            }
        });
        per_level.push_back({{"exponent", exponent},
                             {"terminal_rmse", evo.rmse.back()},
                             {"mean_coarse_drift_changes", evo.mean_coarse_changes},
                             {"mean_reference_drift_changes", evo.mean_reference_changes},
                             {"most_frequent_drift_change_times", evo.most_frequent_times},
                             {"earliest_reference_drift_change",
                              optional_number(evo.earliest_reference_change)},
                             {"earliest_coarse_drift_change",
                              optional_number(evo.earliest_coarse_change)}});
    }
    summary["levels"] = std::move(per_level);
}

void run_histogram(const ExperimentConfig& cfg, unsigned threads, OutputDir& dir, json& summary) {
    const ConvergenceStudyConfig study = study_config(cfg, threads);
    json per_level = json::array();
    for (int exponent : cfg.coarse_exponents) {
        const ErrorHistogram hist = error_histogram(study, exponent);
        dir.write("histogram_n" + std::to_string(exponent) + ".csv", [&](std::ostream& os) {
            csv::Writer w(os);
            w.header({"lower", "upper", "count"});
            w.row(0.0, kMachineAccuracy, hist.underflow);
            for (const auto& bin : hist.bins) w.row(bin.lower, bin.upper, bin.count);
        });
        per_level.push_back(
            {{"exponent", exponent}, {"total", hist.total}, {"underflow", hist.underflow}});
    }
    summary["machine_accuracy"] = kMachineAccuracy;
    summary["levels"] = std::move(per_level);
}

void run_stationary(const ExperimentConfig& cfg, OutputDir& dir, json& summary) {
    StationaryConfig st;
    st.alpha1 = cfg.spec.drift.values()[0];
    st.alpha2 = cfg.spec.drift.values()[1];
    st.dt = cfg.stationary.dt;
    st.burn_in = cfg.stationary.burn_in;
    st.length = cfg.stationary.length;
    st.initial_value = cfg.spec.initial_value;
    st.probes = uniform_probes(cfg.stationary.probe_lo, cfg.stationary.probe_hi,
                               cfg.stationary.probe_count);
    st.seed = cfg.master_seed;
    const StationaryCheck check = stationary_check(st);
    dir.write("stationary.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        w.header({"probe", "empirical_cdf", "invariant_cdf"});
        for (std::size_t j = 0; j < check.probes.size(); ++j) {
            w.row(check.probes[j], check.empirical_cdf[j], check.invariant_cdf[j]);
        }
    });
    summary["sup_distance"] = check.sup_distance;
    summary["ergodic_second_moment"] = check.ergodic_second_moment;
    summary["invariant_second_moment"] = check.invariant_second_moment;
}

void run_atlas(const ExperimentConfig& cfg, unsigned threads, OutputDir& dir, json& summary) {
    const auto& at = cfg.atlas;
    const FirstOrderModel model = atlas_model(at.dimension, at.g, at.sigma, at.initial_log_caps);
    const std::size_t d = at.dimension;
    std::vector<OccupationMatrix> blocks;
    json per_horizon = json::array();
    for (double horizon : at.horizons) {
        MarketRun run;
        run.horizon = horizon;
        run.dt = at.dt;
        run.replications = cfg.replications;
        run.seed = cfg.master_seed;
        run.noise_substeps = at.noise_substeps;
        run.threads = threads;
        blocks.push_back(simulate_market(model, run));
        const auto deviation = occupation_deviation(blocks.back());
        json rows = json::array();
        for (std::size_t k = 0; k < d; ++k) {
            std::vector<double> row(d);
            for (std::size_t i = 0; i < d; ++i) row[i] = blocks.back().at(i, k);
            rows.push_back(row);
        }
        per_horizon.push_back(
            {{"T", horizon}, {"occupation_by_rank", rows}, {"quadratic_deviation", deviation}});
    }
    dir.write("atlas.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        std::vector<std::string> header{"T", "row"};
        for (std::size_t i = 0; i < d; ++i) header.push_back("firm_" + std::to_string(i + 1));
        w.header(header);
        for (const auto& occupation : blocks) {
            for (std::size_t k = 0; k < d; ++k) {
                std::vector<std::string> fields{csv::format_number(occupation.horizon),
                                                "rank_" + std::to_string(k + 1)};
                for (std::size_t i = 0; i < d; ++i) {
                    fields.push_back(csv::format_number(occupation.at(i, k)));
                }
                w.row(fields);
            }
            std::vector<std::string> fields{csv::format_number(occupation.horizon),
                                            "quadratic_deviation"};
            for (double dev : occupation_deviation(occupation)) {
                fields.push_back(csv::format_number(dev));
            }
            w.row(fields);
        }
    });
    summary["horizons"] = std::move(per_horizon);
}

void run_paths(const ExperimentConfig& cfg, unsigned threads, OutputDir& dir, json& summary) {
    const NoiseOptions noise{.bridge_integrals = cfg.scheme == SchemeKind::Platen};
    std::vector<Trajectory> paths(cfg.path_count);
    for_each_block(cfg.path_count, 1, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const NoisePath path =
                generate(cfg.master_seed, p, cfg.fine_exponent, cfg.spec.horizon, noise);
            paths[p] = simulate(cfg.spec, cfg.scheme, path, cfg.fine_exponent);
        }
    });
    const std::size_t n = std::size_t{1} << cfg.fine_exponent;
    const double dt = cfg.spec.horizon / static_cast<double>(n);
    dir.write("paths.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        std::vector<std::string> header{"time"};
        for (std::size_t p = 0; p < cfg.path_count; ++p) {
            header.push_back("path_" + std::to_string(p + 1));
        }
        w.header(header);
        std::vector<std::string> fields(cfg.path_count + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            fields[0] = csv::format_number(static_cast<double>(k) * dt);
            for (std::size_t p = 0; p < cfg.path_count; ++p) {
                fields[p + 1] = csv::format_number(paths[p].values[k]);
            }
            w.row(fields);
        }
    });
    std::size_t with_change = 0;
    for (const auto& t : paths) with_change += t.drift_changes.empty() ? 0 : 1;
    summary["rows"] = n + 1;
    summary["columns"] = cfg.path_count + 1;
    summary["paths_with_drift_change"] = with_change;
    summary["discontinuities"] = std::vector<double>(cfg.spec.drift.breakpoints().begin(),
                                                     cfg.spec.drift.breakpoints().end());
}

} // namespace

RunResult run(ExperimentConfig cfg, const RunOptions& options) {
    if (options.seed) cfg.master_seed = *options.seed;
    if (options.output_dir) cfg.output_dir = *options.output_dir;

    OutputDir dir(cfg.output_dir);
    RunResult result;
    json& summary = result.summary;
    summary["experiment"] = to_string(cfg.experiment);
    summary["master_seed"] = cfg.master_seed;
    summary["config"] = cfg.to_json();

    switch (cfg.experiment) {
    case ExperimentKind::Converge:
        run_converge(cfg, options.threads, dir, summary);
        break;
    case ExperimentKind::Evolution:
        run_evolution(cfg, options.threads, dir, summary);
        break;
    case ExperimentKind::Histogram:
        run_histogram(cfg, options.threads, dir, summary);
        break;
    case ExperimentKind::Stationary:
        run_stationary(cfg, dir, summary);
        break;
    case ExperimentKind::Atlas:
        run_atlas(cfg, options.threads, dir, summary);
        break;
    case ExperimentKind::Paths:
        run_paths(cfg, options.threads, dir, summary);
        break;
    }

    dir.write("summary.json", [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
    result.files = dir.take_files();
    return result;
}

} // namespace discdrift::cli
