#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "stx/analyze.hpp"
#include "stx/io.hpp"
#include "stx/types.hpp"

namespace stx {

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// Reports carry the command, an echo of the effective configuration, one
/// estimates row per label, and run diagnostics. The CSV mirror holds the
/// same numbers, printed with 17 significant digits so they round-trip.
inline nlohmann::json analysis_report_json(const AnalysisResult& res,
                                           const nlohmann::json& config_echo) {
    nlohmann::json estimates = nlohmann::json::array();
    for (const auto& fam : res.families) {
        const bool has_ci = !fam.dist.ci_lo.empty();
        for (std::size_t i = 0; i < fam.dist.labels.size(); ++i) {
            nlohmann::json row{{"family", fam.family},
                               {"label", fam.dist.labels[i]},
                               {"prob", fam.dist.probs[i]},
                               {"count", fam.dist.counts[i]}};
            if (has_ci) {
                row["ci_lo"] = fam.dist.ci_lo[i];
                row["ci_hi"] = fam.dist.ci_hi[i];
            } else {
                row["ci_lo"] = nullptr;
                row["ci_hi"] = nullptr;
            }
            estimates.push_back(std::move(row));
        }
    }
    return nlohmann::json{
        {"command", "analyze"},
        {"config", config_echo},
        {"estimates", estimates},
        {"diagnostics",
         {{"n_clusters", res.n_clusters},
          {"n_ties", res.n_ties},
          {"n_degenerate_replicates", res.n_degenerate_replicates},
          {"n_skipped_undefined", res.n_skipped_undefined},
          {"resolved_threshold", res.threshold_u},
          {"runtime_ms", res.runtime_ms}}}};
}

inline nlohmann::json oracle_report_json(const OracleRunResult& res,
                                         const nlohmann::json& config_echo) {
    nlohmann::json estimates = nlohmann::json::array();
    for (const auto& row : res.rows) {
        estimates.push_back(nlohmann::json{{"family", row.family},
                                           {"label", row.label},
                                           {"prob", row.estimate.prob},
                                           {"raw", row.estimate.raw},
                                           {"se", row.estimate.se}});
    }
    return nlohmann::json{{"command", "oracle"},
                          {"config", config_echo},
                          {"estimates", estimates},
                          {"diagnostics",
                           {{"n_undefined_quadrature_points", res.n_undefined},
                            {"runtime_ms", res.runtime_ms}}}};
}

inline void write_report_json(const std::string& path, const nlohmann::json& report) {
    detail::atomic_write(path, [&](std::ostream& out) { out << report.dump(2) << "\n"; });
}

/// One row per estimates entry; empty cells where a column does not apply.
inline void write_report_csv(const std::string& path, const nlohmann::json& report) {
    detail::atomic_write(path, [&](std::ostream& out) {
        out << "family,label,prob,count,ci_lo,ci_hi,raw,se\n";
        for (const auto& row : report.at("estimates")) {
            out << detail::csv_quote(row.at("family").get<std::string>()) << ','
                << detail::csv_quote(row.at("label").get<std::string>()) << ','
                << detail::fmt17(row.at("prob").get<double>()) << ',';
            if (row.contains("count")) out << row.at("count").get<std::int64_t>();
            out << ',';
            if (row.contains("ci_lo") && !row.at("ci_lo").is_null()) {
                out << detail::fmt17(row.at("ci_lo").get<double>());
            }
            out << ',';
            if (row.contains("ci_hi") && !row.at("ci_hi").is_null()) {
                out << detail::fmt17(row.at("ci_hi").get<double>());
            }
            out << ',';
            if (row.contains("raw")) out << detail::fmt17(row.at("raw").get<double>());
            out << ',';
            if (row.contains("se")) out << detail::fmt17(row.at("se").get<double>());
            out << '\n';
        }
    });
}

}  // namespace stx
