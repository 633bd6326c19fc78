// Command-line front end: simulate / detrend / analyze / oracle.
//
// Options come from built-in defaults, then an optional JSON config file
// (--config), then command-line flags, later sources overriding earlier
// ones. Every error class maps to its own exit code (see exit_code_for).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "stx/stx.hpp"

namespace {

using nlohmann::json;

int exit_code_for(stx::errc code) {
    switch (code) {
        case stx::errc::invalid_argument: return 2;
        case stx::errc::bad_format: return 3;
        case stx::errc::truncated: return 4;
        case stx::errc::non_dense: return 5;
        case stx::errc::non_finite: return 6;
        case stx::errc::no_clusters: return 7;
        case stx::errc::zero_denominator: return 8;
        case stx::errc::degenerate_model: return 9;
        case stx::errc::rank_deficient: return 10;
        case stx::errc::factorization_failed: return 11;
        case stx::errc::io_error: return 12;
    }
    return 1;
}

json load_config_arg(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            path = argv[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        }
    }
    if (path.empty()) return json::object();
    std::ifstream in(path);
    stx::require(in.good(), stx::errc::io_error, "cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        stx::raise(stx::errc::bad_format, std::string("config file is not valid JSON: ") + e.what());
    }
    return cfg;
}

template <typename T>
void from_config(const json& cfg, const char* key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

stx::RiskFunctional parse_risk(const std::string& name, double p) {
    if (name == "max") return stx::RiskFunctional::max();
    if (name == "min") return stx::RiskFunctional::min();
    if (name == "mean") return stx::RiskFunctional::mean();
    if (name == "median") return stx::RiskFunctional::median();
    if (name == "quantile") return stx::RiskFunctional::quantile(p);
    stx::raise(stx::errc::invalid_argument, "unknown risk functional: " + name);
}

stx::CoordSystem parse_coord_system(const std::string& name) {
    if (name == "lonlat") return stx::CoordSystem::lonlat;
    if (name == "planar_km") return stx::CoordSystem::planar_km;
    stx::raise(stx::errc::invalid_argument, "unknown coordinate system: " + name);
}

stx::SeriesFormat parse_format(const std::string& name) {
    if (name == "binary") return stx::SeriesFormat::binary;
    if (name == "csv") return stx::SeriesFormat::csv;
    stx::raise(stx::errc::invalid_argument, "unknown series format: " + name);
}

struct GridOptions {
    std::size_t rows = 7;
    std::size_t cols = 7;
    double spacing = 0.05;
    double origin_x = 0.0;
    double origin_y = 0.0;
    std::string coord_system = "planar_km";
    std::string sites_file;

    void add_flags(CLI::App* app, const json& cfg) {
        auto* self = this;
        from_config(cfg, "rows", self->rows);
        from_config(cfg, "cols", self->cols);
        from_config(cfg, "spacing", self->spacing);
        from_config(cfg, "origin_x", self->origin_x);
        from_config(cfg, "origin_y", self->origin_y);
        from_config(cfg, "coord_system", self->coord_system);
        from_config(cfg, "sites", self->sites_file);
        app->add_option("--rows", self->rows, "Grid rows");
        app->add_option("--cols", self->cols, "Grid columns");
        app->add_option("--spacing", self->spacing, "Grid spacing (coordinate units)");
        app->add_option("--origin-x", self->origin_x, "Grid origin x");
        app->add_option("--origin-y", self->origin_y, "Grid origin y");
        app->add_option("--coord-system", self->coord_system, "lonlat or planar_km");
        app->add_option("--sites", self->sites_file, "Site table CSV (site,x,y) instead of a regular grid");
    }

    stx::GridPtr build() const {
        if (!sites_file.empty()) {
            std::ifstream in(sites_file);
            stx::require(in.good(), stx::errc::io_error, "cannot open " + sites_file);
            std::string line;
            stx::require(static_cast<bool>(std::getline(in, line)), stx::errc::truncated,
                         "empty site table");
            std::vector<stx::Coord> sites;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                double x = 0.0, y = 0.0;
                unsigned long id = 0;
                stx::require(std::sscanf(line.c_str(), "%lu,%lf,%lf", &id, &x, &y) == 3,
                             stx::errc::bad_format, "malformed site row: " + line);
                sites.push_back({x, y});
            }
            return std::make_shared<stx::SpatialGrid>(std::move(sites),
                                                      parse_coord_system(coord_system));
        }
        return std::make_shared<stx::SpatialGrid>(stx::SpatialGrid::regular(
            rows, cols, spacing, parse_coord_system(coord_system), {origin_x, origin_y}));
    }

    json echo() const {
        if (!sites_file.empty()) return json{{"sites", sites_file}, {"coord_system", coord_system}};
        return json{{"rows", rows},         {"cols", cols},         {"spacing", spacing},
                    {"origin_x", origin_x}, {"origin_y", origin_y}, {"coord_system", coord_system}};
    }
};

struct VariogramOptions {
    double ax = 2.6, ay = 2.4, theta_s = 1.9, theta_t = 1.1;

    void add_flags(CLI::App* app, const json& cfg) {
        from_config(cfg, "ax", ax);
        from_config(cfg, "ay", ay);
        from_config(cfg, "theta_s", theta_s);
        from_config(cfg, "theta_t", theta_t);
        app->add_option("--ax", ax, "Variogram anisotropy for x lags");
        app->add_option("--ay", ay, "Variogram anisotropy for y lags");
        app->add_option("--theta-s", theta_s, "Spatial variogram exponent");
        app->add_option("--theta-t", theta_t, "Temporal variogram exponent");
    }

    stx::VariogramSpec spec() const { return {ax, ay, theta_s, theta_t}; }

    json echo() const {
        return json{{"ax", ax}, {"ay", ay}, {"theta_s", theta_s}, {"theta_t", theta_t}};
    }
};

int run_simulate(const GridOptions& grid_opts, const VariogramOptions& vario_opts,
                 std::size_t n_times, std::size_t stride, std::size_t t_max, std::uint64_t seed,
                 const std::string& out) {
    stx::require(!out.empty(), stx::errc::invalid_argument, "simulate needs --out");
    stx::SimConfig sim;
    sim.grid = grid_opts.build();
    sim.n_times = n_times;
    sim.subgrid_stride = stride;
    sim.temporal_truncation = t_max;
    sim.seed = seed;
    const auto series = stx::simulate_brown_resnick(vario_opts.spec(), sim);
    stx::write_field_series_binary(out, series);
    std::cout << "wrote " << out << " (" << series.site_count() << " sites x "
              << series.n_times() << " times)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        const json cfg = load_config_arg(argc, argv);

        CLI::App app{"Cluster and ordinal-pattern analysis of spatio-temporal extremes"};
        app.require_subcommand(1);
        std::string config_path;
        app.add_option("--config", config_path, "JSON config file; flags override its keys");

        std::uint64_t seed = 1;
        std::size_t threads = 1;
        from_config(cfg, "seed", seed);
        from_config(cfg, "threads", threads);
        app.add_option("--seed", seed, "Master RNG seed");
        app.add_option("--threads", threads, "Worker threads for parallel stages");

        // --- simulate ---
        auto* sim_cmd = app.add_subcommand("simulate", "Simulate a max-stable field series");
        GridOptions sim_grid;
        VariogramOptions sim_vario;
        std::size_t sim_n_times = 1000, sim_stride = 2, sim_tmax = 18;
        std::string sim_out;
        sim_grid.add_flags(sim_cmd, cfg);
        sim_vario.add_flags(sim_cmd, cfg);
        from_config(cfg, "n_times", sim_n_times);
        from_config(cfg, "stride", sim_stride);
        from_config(cfg, "t_max", sim_tmax);
        from_config(cfg, "out", sim_out);
        sim_cmd->add_option("--n-times", sim_n_times, "Series length");
        sim_cmd->add_option("--stride", sim_stride, "Subgrid stride (1 = exact everywhere)");
        sim_cmd->add_option("--t-max", sim_tmax, "Temporal influence truncation");
        sim_cmd->add_option("--out", sim_out, "Output field-series file (binary)");

        // --- detrend ---
        auto* det_cmd = app.add_subcommand("detrend", "Fit per-site trends and write anomalies");
        std::string det_input, det_format = "binary", det_coord = "planar_km";
        std::string det_out, det_out_coeffs;
        std::size_t det_basis = 12;
        double det_period = 365.25, det_radius = 30.0;
        from_config(cfg, "input", det_input);
        from_config(cfg, "format", det_format);
        from_config(cfg, "csv_coord_system", det_coord);
        from_config(cfg, "seasonal_basis", det_basis);
        from_config(cfg, "period", det_period);
        from_config(cfg, "radius", det_radius);
        from_config(cfg, "out", det_out);
        from_config(cfg, "out_coefficients", det_out_coeffs);
        det_cmd->add_option("--input", det_input, "Input series");
        det_cmd->add_option("--format", det_format, "binary or csv");
        det_cmd->add_option("--csv-coord-system", det_coord, "Coordinate system of CSV sites");
        det_cmd->add_option("--seasonal-basis", det_basis, "Number of seasonal basis functions");
        det_cmd->add_option("--period", det_period, "Seasonal period in time steps");
        det_cmd->add_option("--radius", det_radius, "Pooling radius in km (0 = no pooling)");
        det_cmd->add_option("--out", det_out, "Output anomaly series (binary)");
        det_cmd->add_option("--out-coefficients", det_out_coeffs, "Output coefficients CSV");

        // --- analyze ---
        auto* ana_cmd = app.add_subcommand("analyze", "Estimate cluster and pattern distributions");
        std::string ana_input, ana_format = "binary", ana_coord = "planar_km";
        std::string ana_risk = "mean";
        double ana_risk_p = 0.5;
        double ana_quantile_level = 0.95;
        double ana_threshold_value = std::numeric_limits<double>::quiet_NaN();
        std::size_t ana_lmax = 12;
        std::vector<std::size_t> ana_pattern_lengths = {2, 3};
        bool ana_no_area = false, ana_no_location = false, ana_exact = false;
        std::string ana_location = "exceedance_centroid";
        std::size_t ana_block_length = 1000, ana_replicates = 1000;
        std::string ana_multiplier = "gaussian";
        double ana_ci_level = 0.95;
        std::string ana_out_json = "report.json", ana_out_csv = "report.csv";
        from_config(cfg, "input", ana_input);
        from_config(cfg, "format", ana_format);
        from_config(cfg, "csv_coord_system", ana_coord);
        from_config(cfg, "risk", ana_risk);
        from_config(cfg, "risk_p", ana_risk_p);
        from_config(cfg, "quantile_level", ana_quantile_level);
        from_config(cfg, "threshold_value", ana_threshold_value);
        from_config(cfg, "lmax", ana_lmax);
        from_config(cfg, "pattern_lengths", ana_pattern_lengths);
        from_config(cfg, "no_area", ana_no_area);
        from_config(cfg, "no_location", ana_no_location);
        from_config(cfg, "exact_size", ana_exact);
        from_config(cfg, "location_measure", ana_location);
        from_config(cfg, "block_length", ana_block_length);
        from_config(cfg, "replicates", ana_replicates);
        from_config(cfg, "multiplier", ana_multiplier);
        from_config(cfg, "ci_level", ana_ci_level);
        from_config(cfg, "out_json", ana_out_json);
        from_config(cfg, "out_csv", ana_out_csv);
        ana_cmd->add_option("--input", ana_input, "Input series");
        ana_cmd->add_option("--format", ana_format, "binary or csv");
        ana_cmd->add_option("--csv-coord-system", ana_coord, "Coordinate system of CSV sites");
        ana_cmd->add_option("--risk", ana_risk, "max, min, mean, median or quantile");
        ana_cmd->add_option("--risk-p", ana_risk_p, "Spatial quantile level for --risk quantile");
        ana_cmd->add_option("--quantile-level", ana_quantile_level,
                            "Threshold quantile of the risk series");
        ana_cmd->add_option("--threshold-value", ana_threshold_value,
                            "Absolute threshold (overrides --quantile-level)");
        ana_cmd->add_option("--lmax", ana_lmax, "Largest individually counted cluster size");
        ana_cmd->add_option("--pattern-lengths", ana_pattern_lengths,
                            "Pattern window lengths (each in [2,5])");
        ana_cmd->add_flag("--no-area", ana_no_area, "Skip affected-area patterns");
        ana_cmd->add_flag("--no-location", ana_no_location, "Skip centroid-coordinate patterns");
        ana_cmd->add_flag("--exact-size", ana_exact, "Patterns on exactly-size-l clusters");
        ana_cmd->add_option("--location-measure", ana_location,
                            "peak, exceedance_centroid, weighted_centroid or componentwise_median");
        ana_cmd->add_option("--block-length", ana_block_length, "Bootstrap block length");
        ana_cmd->add_option("--replicates", ana_replicates, "Bootstrap replicates (0 disables)");
        ana_cmd->add_option("--multiplier", ana_multiplier, "gaussian or rademacher");
        ana_cmd->add_option("--ci-level", ana_ci_level, "Bootstrap confidence level");
        ana_cmd->add_option("--out-json", ana_out_json, "Report JSON path");
        ana_cmd->add_option("--out-csv", ana_out_csv, "Report CSV mirror path");

        // --- oracle ---
        auto* ora_cmd = app.add_subcommand("oracle", "Monte Carlo limit values for the model");
        GridOptions ora_grid;
        VariogramOptions ora_vario;
        std::string ora_risk = "mean";
        double ora_risk_p = 0.5;
        std::size_t ora_lmax = 3;
        std::vector<std::size_t> ora_pattern_lengths = {2};
        bool ora_area = false, ora_location = false, ora_exact = false;
        std::int64_t ora_draws = 100000;
        std::size_t ora_quadrature = 200;
        long ora_anchor = -1;
        std::string ora_out_json = "oracle.json", ora_out_csv = "oracle.csv";
        ora_grid.add_flags(ora_cmd, cfg);
        ora_vario.add_flags(ora_cmd, cfg);
        from_config(cfg, "risk", ora_risk);
        from_config(cfg, "risk_p", ora_risk_p);
        from_config(cfg, "lmax", ora_lmax);
        from_config(cfg, "pattern_lengths", ora_pattern_lengths);
        from_config(cfg, "with_area", ora_area);
        from_config(cfg, "with_location", ora_location);
        from_config(cfg, "exact_size", ora_exact);
        from_config(cfg, "draws", ora_draws);
        from_config(cfg, "quadrature_points", ora_quadrature);
        from_config(cfg, "anchor_site", ora_anchor);
        from_config(cfg, "out_json", ora_out_json);
        from_config(cfg, "out_csv", ora_out_csv);
        ora_cmd->add_option("--risk", ora_risk, "max, min, mean, median or quantile");
        ora_cmd->add_option("--risk-p", ora_risk_p, "Spatial quantile level for --risk quantile");
        ora_cmd->add_option("--lmax", ora_lmax, "Cluster sizes 1..lmax");
        ora_cmd->add_option("--pattern-lengths", ora_pattern_lengths, "Pattern window lengths");
        ora_cmd->add_flag("--with-area", ora_area, "Affected-area patterns");
        ora_cmd->add_flag("--with-location", ora_location, "Centroid-coordinate patterns");
        ora_cmd->add_flag("--exact-size", ora_exact, "Exact-size conditioning");
        ora_cmd->add_option("--draws", ora_draws, "Monte Carlo draws");
        ora_cmd->add_option("--quadrature-points", ora_quadrature, "Level-integral quadrature points");
        ora_cmd->add_option("--anchor-site", ora_anchor, "Anchor site (-1 = grid center)");
        ora_cmd->add_option("--out-json", ora_out_json, "Report JSON path");
        ora_cmd->add_option("--out-csv", ora_out_csv, "Report CSV mirror path");

        CLI11_PARSE(app, argc, argv);

        if (sim_cmd->parsed()) {
            return run_simulate(sim_grid, sim_vario, sim_n_times, sim_stride, sim_tmax, seed,
                                sim_out);
        }

        if (det_cmd->parsed()) {
            stx::require(!det_input.empty(), stx::errc::invalid_argument, "detrend needs --input");
            stx::require(!det_out.empty(), stx::errc::invalid_argument, "detrend needs --out");
            const auto raw = stx::load_field_series(det_input, parse_format(det_format),
                                                    parse_coord_system(det_coord));
            stx::RegressionConfig rc{det_basis, det_period, det_radius};
            const auto coeffs = stx::fit_all_sites(raw, rc, threads);
            const auto anom = stx::anomalies(raw, coeffs, rc);
            stx::write_field_series_binary(det_out, anom);
            if (!det_out_coeffs.empty()) stx::write_coefficients_csv(det_out_coeffs, coeffs);
            std::cout << "wrote " << det_out << "\n";
            return 0;
        }

        if (ana_cmd->parsed()) {
            stx::require(!ana_input.empty(), stx::errc::invalid_argument, "analyze needs --input");
            const auto series = stx::load_field_series(ana_input, parse_format(ana_format),
                                                       parse_coord_system(ana_coord));
            stx::AnalysisConfig ac;
            ac.risk = parse_risk(ana_risk, ana_risk_p);
            ac.threshold = std::isfinite(ana_threshold_value)
                               ? stx::ThresholdSpec::absolute(ana_threshold_value)
                               : stx::ThresholdSpec::quantile(ana_quantile_level);
            ac.l_max = ana_lmax;
            ac.pattern_lengths = ana_pattern_lengths;
            ac.with_area = !ana_no_area;
            ac.with_location = !ana_no_location;
            ac.exact_size_patterns = ana_exact;
            if (ana_location == "peak") {
                ac.location.kind = stx::LocationMeasure::Kind::peak;
            } else if (ana_location == "exceedance_centroid") {
                ac.location.kind = stx::LocationMeasure::Kind::exceedance_centroid;
            } else if (ana_location == "weighted_centroid") {
                ac.location.kind = stx::LocationMeasure::Kind::weighted_centroid;
            } else if (ana_location == "componentwise_median") {
                ac.location.kind = stx::LocationMeasure::Kind::componentwise_median;
            } else {
                stx::raise(stx::errc::invalid_argument, "unknown location measure: " + ana_location);
            }
            if (ana_replicates == 0) {
                ac.bootstrap.reset();
            } else {
                stx::BootstrapConfig bc;
                bc.block_length = ana_block_length;
                bc.replicates = ana_replicates;
                bc.ci_level = ana_ci_level;
                bc.seed = seed;
                if (ana_multiplier == "gaussian") {
                    bc.law = stx::MultiplierLaw::gaussian;
                } else if (ana_multiplier == "rademacher") {
                    bc.law = stx::MultiplierLaw::rademacher;
                } else {
                    stx::raise(stx::errc::invalid_argument, "unknown multiplier law: " + ana_multiplier);
                }
                ac.bootstrap = bc;
            }

            const auto result = stx::run_analysis(series, ac);
            json echo{{"input", ana_input},
                      {"format", ana_format},
                      {"risk", ana_risk},
                      {"lmax", ana_lmax},
                      {"pattern_lengths", ana_pattern_lengths},
                      {"with_area", !ana_no_area},
                      {"with_location", !ana_no_location},
                      {"exact_size", ana_exact},
                      {"location_measure", ana_location},
                      {"seed", seed}};
            if (ana_risk == "quantile") echo["risk_p"] = ana_risk_p;
            if (std::isfinite(ana_threshold_value)) {
                echo["threshold_value"] = ana_threshold_value;
            } else {
                echo["quantile_level"] = ana_quantile_level;
            }
            if (ac.bootstrap) {
                echo["block_length"] = ana_block_length;
                echo["replicates"] = ana_replicates;
                echo["multiplier"] = ana_multiplier;
                echo["ci_level"] = ana_ci_level;
            }
            const json report = stx::analysis_report_json(result, echo);
            stx::write_report_json(ana_out_json, report);
            stx::write_report_csv(ana_out_csv, report);
            std::cout << "wrote " << ana_out_json << " and " << ana_out_csv << "\n";
            return 0;
        }

        if (ora_cmd->parsed()) {
            stx::OracleConfig oc;
            oc.vario = ora_vario.spec();
            oc.grid = ora_grid.build();
            std::size_t needed = ora_lmax;
            for (auto l : ora_pattern_lengths) needed = std::max(needed, l);
            oc.window_len = static_cast<long>(needed);
            oc.anchor_site = ora_anchor;
            oc.draws = ora_draws;
            oc.quadrature_points = ora_quadrature;
            oc.seed = seed;
            stx::OracleRequest req;
            req.risk = parse_risk(ora_risk, ora_risk_p);
            req.l_max = ora_lmax;
            req.pattern_lengths = ora_pattern_lengths;
            req.with_area = ora_area;
            req.with_location = ora_location;
            req.exact_size = ora_exact;
            const auto result = stx::run_oracle(oc, req, threads);
            json echo{{"grid", ora_grid.echo()},
                      {"variogram", ora_vario.echo()},
                      {"risk", ora_risk},
                      {"lmax", ora_lmax},
                      {"pattern_lengths", ora_pattern_lengths},
                      {"with_area", ora_area},
                      {"with_location", ora_location},
                      {"exact_size", ora_exact},
                      {"draws", ora_draws},
                      {"quadrature_points", ora_quadrature},
                      {"anchor_site", ora_anchor},
                      {"seed", seed}};
            if (ora_risk == "quantile") echo["risk_p"] = ora_risk_p;
            const json report = stx::oracle_report_json(result, echo);
            stx::write_report_json(ora_out_json, report);
            stx::write_report_csv(ora_out_csv, report);
            std::cout << "wrote " << ora_out_json << " and " << ora_out_csv << "\n";
            return 0;
        }
        return 1;
    } catch (const stx::Error& e) {
        std::cerr << "error (" << stx::errc_name(e.code()) << "): " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const json::exception& e) {
        std::cerr << "error (bad_format): config file: " << e.what() << "\n";
        return exit_code_for(stx::errc::bad_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
