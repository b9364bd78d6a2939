// Acceptance run: one PASS/FAIL line per criterion.
//
//   discdrift_acceptance            all criteria
//   discdrift_acceptance 3 7        selected criteria
//
// Exit status is non-zero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "discdrift/analytics.hpp"
#include "discdrift/atlas.hpp"
#include "discdrift/cli.hpp"
#include "discdrift/study.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace discdrift;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kPaths = 10000;

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

ConvergenceStudyConfig study(const std::string& name, double xi, SchemeKind scheme) {
    ConvergenceStudyConfig cfg;
    cfg.spec = catalog(name, xi);
    cfg.scheme = scheme;
    cfg.fine_exponent = 14;
    cfg.coarse_exponents = {4, 5, 6, 7, 8, 9, 10};
    cfg.replications = kPaths;
    cfg.master_seed = kSeed;
    return cfg;
}

// Rates of one catalog entry over a list of initial values, each within
// target +- tol.
void rate_sweep(Verdict& v, const std::string& name, SchemeKind scheme,
                const std::vector<double>& xis, double target, double tol) {
    v.detail += name + "/" + std::string(to_string(scheme)) + " [";
    for (std::size_t i = 0; i < xis.size(); ++i) {
        const ConvergenceReport r = run_convergence(study(name, xis[i], scheme));
        const bool ok = r.rate && std::abs(*r.rate - target) <= tol;
        v.pass = v.pass && ok;
        v.detail += (i ? " " : "") + ("xi=" + fmt(xis[i], 2) + ":") +
                    (r.rate ? fmt(*r.rate, 3) : std::string("none")) + (ok ? "" : "!");
    }
    v.detail += "] target " + fmt(target, 2) + "+-" + fmt(tol, 2) + "; ";
}

Verdict inward_euler_rates() {
    Verdict v;
    rate_sweep(v, "minus10sign", SchemeKind::Euler, {-1, 0, 1, 2.5, 3, 5}, 0.91, 0.05);
    rate_sweep(v, "elementary4minus3", SchemeKind::Euler, {0, 1, 1.2, 1.25, 1.4, 2}, 0.87, 0.05);
    return v;
}

Verdict outward_signature() {
    Verdict v;
    const ConvergenceReport at0 = run_convergence(study("sign", 0.0, SchemeKind::Euler));
    const bool ok0 = at0.rate && std::abs(*at0.rate - 0.59) <= 0.10;
    v.detail = "sign xi=0 rate " + (at0.rate ? fmt(*at0.rate, 3) : std::string("none")) +
               " (target 0.59+-0.10); ";

    const ConvergenceReport at5 = run_convergence(study("sign", 5.0, SchemeKind::Euler));
    double worst = 0.0;
    std::size_t coarse_paths = 0;
    for (const auto& level : at5.levels) {
        worst = std::max(worst, level.rmse);
        coarse_paths += static_cast<std::size_t>(std::llround(level.fraction_with_drift_change * kPaths));
    }
    const bool ok5 = worst < kMachineAccuracy && !at5.rate &&
                     at5.rate_note == "errors at machine accuracy; rate not meaningful" &&
                     at5.reference_paths_with_drift_change == 0 && coarse_paths == 0;
    v.detail += "sign xi=5 max rmse " + sci(worst) + ", rate " +
                (at5.rate ? fmt(*at5.rate, 3) : "\"" + at5.rate_note + "\"") +
                ", paths with drift change " + std::to_string(at5.reference_paths_with_drift_change) +
                " of " + std::to_string(kPaths) + " (no-crossing probability " +
                fmt(no_crossing_probability(-1.0, 1.0, 5.0), 8) + ")";
    v.pass = ok0 && ok5;
    return v;
}

Verdict heun_platen_rates() {
    Verdict v;
    const std::vector<double> xis{0, 1, 1.2, 1.25, 1.4, 2};
    rate_sweep(v, "elementary4minus3", SchemeKind::Heun, xis, 0.77, 0.05);
    rate_sweep(v, "elementary4minus3", SchemeKind::Platen, xis, 0.79, 0.05);
    return v;
}

Verdict extreme_errors() {
    Verdict v;
    ConvergenceStudyConfig cfg = study("elementary_minus34", 1.4, SchemeKind::Euler);
    cfg.coarse_exponents = {10};
    const LevelStats out = run_convergence(cfg).levels.front();
    const bool ok_max = out.max_error >= 3.0 && out.max_error <= 6.5;
    v.detail = "elementary_minus34 xi=1.4 n=10 max " + fmt(out.max_error) + " in [3.0, 6.5]" +
               (ok_max ? "" : "!") + " (rmse " + fmt(out.rmse) + "); elementary4minus3 min [";
    v.pass = ok_max;
    const std::vector<double> xis{0, 1, 1.2, 1.25, 1.4, 2};
    for (std::size_t i = 0; i < xis.size(); ++i) {
        cfg = study("elementary4minus3", xis[i], SchemeKind::Euler);
        cfg.coarse_exponents = {10};
        const LevelStats in = run_convergence(cfg).levels.front();
        const bool ok = in.min_error >= 0.005 / 3.0 && in.min_error <= 0.005 * 3.0;
        v.pass = v.pass && ok;
        v.detail += (i ? " " : "") + ("xi=" + fmt(xis[i], 2) + ":") + sci(in.min_error) +
                    (ok ? "" : "!") + "(rmse " + fmt(in.rmse) + ")";
    }
    v.detail += "] target 0.005 within x3";
    return v;
}

Verdict coincidence() {
    const auto c = props::coincidence(1000000, kSeed);
    Verdict v;
    v.pass = c.heun_violations == 0 && c.platen_violations == 0 && c.heun_checked > 0 &&
             c.platen_checked > 0;
    v.detail = "heun " + std::to_string(c.heun_violations) + " violations in " +
               std::to_string(c.heun_checked) + " in-region steps; platen " +
               std::to_string(c.platen_violations) + " in " + std::to_string(c.platen_checked) +
               " (of 1000000 random steps)";
    return v;
}

Verdict scaling() {
    Verdict v;
    for (double alpha : {2.0, 10.0}) {
        const auto s = props::scaling(alpha, 100, 10, kSeed + static_cast<std::uint64_t>(alpha));
        const bool ok = s.max_ulps <= 1024.0;
        v.pass = v.pass && ok;
        v.detail += "alpha=" + fmt(alpha, 0) + ": max |x_k - alpha y_k| = " + fmt(s.max_ulps, 1) +
                    " eps (bound 1024), exact at " + std::to_string(100 * 1025 - s.mismatches) +
                    "/102500 points; ";
    }
    return v;
}

Verdict analytics_oracles() {
    Verdict v;
    std::mt19937_64 rng(kSeed);
    std::uniform_real_distribution<double> mu(-3.0, 3.0);
    std::uniform_real_distribution<double> nu(0.1, 2.0);
    std::uniform_real_distribution<double> tau(0.0, 1.5);
    double worst_z = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double m = mu(rng), n = nu(rng), t = tau(rng);
        const auto est = oracle::folded_mgf_mc(m, n, t, 10000000, 1000 + i);
        worst_z = std::max(worst_z, std::abs(folded_mgf(m, n, t) - est.mean) / est.standard_error);
    }
    const bool ok_folded = worst_z <= 3.0;
    v.detail = "folded_mgf worst |z| " + fmt(worst_z, 2) + " over 20 points (<= 3); crossing [";

    struct Case { double xi, theta, dt; };
    bool ok_cross = true;
    int i = 0;
    for (Case c : {Case{1, 1, 2}, Case{0.5, 0.2, 1}, Case{2, 0.1, 0.5}}) {
        const std::size_t substeps = 4096;
        const auto est = oracle::bridge_crossing_mc(c.xi, c.theta, c.dt, 100000, substeps, 2000 + i);
        const double exact = crossing_probability(c.xi, c.theta, c.dt);
        const double bias = oracle::discrete_monitoring_bias(c.xi, c.theta, c.dt, substeps);
        const bool ok = est.mean <= exact + 3.0 * est.standard_error &&
                        est.mean >= exact - bias - 3.0 * est.standard_error;
        ok_cross = ok_cross && ok;
        v.detail += (i ? " " : "") + ("p=" + fmt(exact, 5) + " mc=" + fmt(est.mean, 5) + "+-" +
                                      fmt(est.standard_error, 5) + " bias=" + fmt(bias, 5)) +
                    (ok ? "" : "!");
        ++i;
    }
    const std::string printed = fmt(no_crossing_probability(-1.0, 1.0, 5.0), 8);
    const bool ok_exit = printed == "0.99995460";
    v.detail += "]; no_crossing_probability(-1,1,5) = " + printed;
    v.pass = ok_folded && ok_cross && ok_exit;
    return v;
}

Verdict stationarity() {
    const auto start = std::chrono::steady_clock::now();
    StationaryConfig cfg;
    cfg.alpha1 = 1.0;
    cfg.alpha2 = -1.0;
    cfg.dt = 1.0 / 256.0;
    cfg.burn_in = 10000;
    cfg.length = 10000000;
    cfg.probes = uniform_probes(-4.0, 4.0, 161);
    cfg.initial_value = -1.0;
    cfg.seed = kSeed;
    const StationaryCheck left = stationary_check(cfg);
    cfg.initial_value = 5.0;
    cfg.seed = kSeed + 1;
    const StationaryCheck right = stationary_check(cfg);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double between = cdf_sup_distance(left.empirical_cdf, right.empirical_cdf);
    Verdict v;
    v.pass = left.sup_distance <= 0.01 && right.sup_distance <= 0.01 && between <= 0.01 &&
             std::abs(left.ergodic_second_moment - 0.5) <= 0.02 &&
             std::abs(right.ergodic_second_moment - 0.5) <= 0.02 && seconds <= 60.0;
    v.detail = "sup distance to invariant cdf " + fmt(left.sup_distance) + " / " +
               fmt(right.sup_distance) + ", between chains " + fmt(between) +
               " (<= 0.01); x^2 average " + fmt(left.ergodic_second_moment) + " / " +
               fmt(right.ergodic_second_moment) + " (0.5+-0.02); " + fmt(seconds, 1) + " s";
    return v;
}

Verdict atlas_occupation() {
    MarketRun run;
    run.dt = 1.0 / 1024.0;
    run.replications = 1000;
    run.seed = kSeed;
    const FirstOrderModel near = atlas_model(3, 0.1, 0.09, {3.4, 4.1, 5.7});
    const FirstOrderModel wide = atlas_model(3, 0.1, 0.09, {1.2, 3.5, 10.8});

    Verdict v;
    run.horizon = 100.0;
    const OccupationMatrix near100 = simulate_market(near, run);
    const double expected[3] = {0.2911, 0.2895, 0.4194};
    v.detail = "T=100 rank-1 row [";
    for (std::size_t i = 0; i < 3; ++i) {
        const bool ok = std::abs(near100.at(i, 0) - expected[i]) <= 0.02;
        v.pass = v.pass && ok;
        v.detail += (i ? " " : "") + fmt(near100.at(i, 0)) + (ok ? "" : "!");
    }
    v.detail += "] vs (0.2911 0.2895 0.4194)+-0.02; ";

    const auto dev_near = occupation_deviation(near100);
    const auto dev_wide = occupation_deviation(simulate_market(wide, run));
    v.detail += "T=100 deviations Y(0) [";
    for (std::size_t i = 0; i < 3; ++i) {
        v.pass = v.pass && dev_wide[i] > dev_near[i];
        v.detail += (i ? " " : "") + fmt(dev_near[i]);
    }
    v.detail += "] < wide start [";
    for (std::size_t i = 0; i < 3; ++i) v.detail += (i ? " " : "") + fmt(dev_wide[i]);

    run.horizon = 1000.0;
    const OccupationMatrix near1000 = simulate_market(near, run);
    double worst_entry = 0.0;
    for (double r : near1000.rates) worst_entry = std::max(worst_entry, std::abs(r - 1.0 / 3.0));
    const auto dev1000 = occupation_deviation(near1000);
    const double worst_dev = *std::max_element(dev1000.begin(), dev1000.end());
    v.pass = v.pass && worst_entry <= 0.01 && worst_dev <= 0.001;
    v.detail += "]; T=1000 max |rate - 1/3| " + fmt(worst_entry) + " (<= 0.01), max deviation " +
                fmt(worst_dev, 5) + " (<= 0.001)";
    return v;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[entry.path().filename().string()] = ss.str();
    }
    return out;
}

Verdict reproducibility() {
    const std::vector<std::string> configs{
        R"({"experiment": "converge", "catalog": "elementary4minus3", "xi": 1.4, "scheme": "platen", "M": 2000})",
        R"({"experiment": "evolution", "catalog": "elementary_minus34", "xi": 1.4, "coarse_exponents": [8], "samples": 1000})",
        R"({"experiment": "histogram", "catalog": "minus10sign", "coarse_exponents": [6, 10], "M": 2000})",
        R"({"experiment": "stationary", "drift": {"catalog": "minusSign"}, "length": 1000000})",
        R"({"experiment": "atlas", "M": 50, "horizons": [10, 20]})",
        R"({"experiment": "paths", "catalog": "sign", "scheme": "heun", "paths": 20})",
    };
    const fs::path root = fs::temp_directory_path() / "discdrift_acceptance_repro";
    Verdict v;
    std::size_t files = 0;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        cli::ExperimentConfig cfg = cli::parse_config(configs[i]);
        cfg.master_seed = kSeed;
        std::vector<std::map<std::string, std::string>> trees;
        for (unsigned threads : {1u, 4u, 1u}) {
            const fs::path dir = root / (std::to_string(i) + "_" + std::to_string(trees.size()));
            fs::remove_all(dir);
            cli::run(cfg, {.seed = std::nullopt, .output_dir = dir, .threads = threads});
            trees.push_back(read_tree(dir));
        }
        const bool same = trees[0] == trees[1] && trees[0] == trees[2] && !trees[0].empty();
        v.pass = v.pass && same;
        files += trees[0].size();
        v.detail += std::string(cli::to_string(cfg.experiment)) + (same ? ":identical " : ":DIFFERENT ");
    }
    fs::remove_all(root);
    v.detail += "(" + std::to_string(files) + " files, threads 1/4/1)";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Verdict()>> criteria{
        inward_euler_rates, outward_signature, heun_platen_rates, extreme_errors, coincidence,
        scaling,            analytics_oracles, stationarity,      atlas_occupation,    reproducibility};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
    }
    int failures = 0;
    for (int id : selected) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "no criterion %d\n", id);
            return 2;
        }
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[static_cast<std::size_t>(id - 1)]();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2d: %s  %s  [%.1f s]\n", id, v.pass ? "PASS" : "FAIL",
                    v.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
