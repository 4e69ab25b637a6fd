#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wan/errors.hpp"
#include "wan/growthcurve.hpp"
#include "wan/metrics.hpp"
#include "wan/model.hpp"
#include "wan/netbuild.hpp"

namespace wan {

// All emitted CSVs start with a versioned schema comment so downstream
// plotting scripts can detect drift.
inline constexpr const char* kCurveSchema = "# wan-curve v1";
inline constexpr const char* kFitCurveSchema = "# wan-fitcurve v1";
inline constexpr const char* kMetricsSchema = "# wan-metrics v1";
inline constexpr const char* kReportSchema = "# wan-report v1";
inline constexpr const char* kCensusSchema = "# wan-census v1";

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& body) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write: " + path.string());
    out << body;
    if (!out) throw IoError("write failure: " + path.string());
}

inline std::string curve_to_csv(const GrowthCurve& curve) {
    std::ostringstream out;
    out << kCurveSchema << "\n";
    out << "text_id,mode,N,mean_L,realizations\n";
    for (const CurveSample& s : curve.samples)
        out << curve.text_id << ',' << to_string(curve.mode) << ',' << s.n << ','
            << fmt_double(s.mean_l) << ',' << s.realizations << "\n";
    return out.str();
}

inline GrowthCurve curve_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open curve csv: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind(kCurveSchema, 0) != 0)
        throw ParseError(path + ": missing schema line '" + kCurveSchema + "'");
    std::getline(in, line);  // column header

    GrowthCurve curve;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string text_id, mode, field;
        if (!std::getline(row, text_id, ',') || !std::getline(row, mode, ','))
            throw ParseError(path + ": bad row: " + line);
        CurveSample s{};
        std::getline(row, field, ',');
        s.n = static_cast<uint32_t>(std::stoul(field));
        std::getline(row, field, ',');
        s.mean_l = std::stod(field);
        std::getline(row, field, ',');
        s.realizations = static_cast<uint32_t>(std::stoul(field));
        if (first) {
            curve.text_id = text_id;
            curve.mode = mode == "words" ? CurveMode::WordsOnly : CurveMode::Tokens;
            first = false;
        } else if (curve.text_id != text_id) {
            throw ParseError(path + ": multiple text ids in one curve file");
        }
        curve.samples.push_back(s);
    }
    if (curve.samples.empty()) throw ParseError(path + ": no samples");
    return curve;
}

inline std::string fit_report_json(const std::string& text_id, CurveMode mode,
                                   const FitParams& params) {
    nlohmann::json j;
    j["text_id"] = text_id;
    j["mode"] = to_string(mode);
    j["c0"] = params.c0;
    j["growth_alpha"] = params.growth_alpha;
    j["n0"] = params.n0;
    j["theta"] = params.theta;
    j["residual"] = params.residual;
    j["delta_l_end"] = params.delta_l_end;
    j["asymptote"] = asymptote(params);
    j["converged"] = params.converged;
    return j.dump(2) + "\n";
}

inline std::string fit_curve_csv(const GrowthCurve& curve, const FitParams& params) {
    std::ostringstream out;
    out << kFitCurveSchema << "\n";
    out << "N,mean_L,L_fit\n";
    for (const CurveSample& s : curve.samples)
        out << s.n << ',' << fmt_double(s.mean_l) << ','
            << fmt_double(l_fit(s.n, params)) << "\n";
    return out.str();
}

inline std::string edges_to_text(const AdjacencyNetwork& net) {
    std::ostringstream out;
    for (uint32_t u = 0; u < net.n_nodes(); ++u)
        for (uint32_t v : net.adjacency[u])
            if (u < v) out << u << ' ' << v << "\n";
    return out.str();
}

inline std::string census_to_csv(const std::map<std::string, uint64_t>& census) {
    // Descending count, then lexicographic, for a stable readable order.
    std::vector<std::pair<std::string, uint64_t>> rows(census.begin(), census.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::ostringstream out;
    out << kCensusSchema << "\n";
    out << "mark,count\n";
    for (const auto& [mark, count] : rows) out << mark << ',' << count << "\n";
    return out.str();
}

// 64-bit FNV-1a; keys the curve cache on text bytes plus schedules.
inline uint64_t fnv1a(std::string_view bytes, uint64_t h = 14695981039346656037ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string cache_key(std::string_view text_bytes, CurveMode mode,
                             const CheckpointSchedule& checkpoints,
                             const ShiftSchedule& shifts) {
    std::ostringstream meta;
    meta << to_string(mode);
    for (uint32_t p : checkpoints.points) meta << ',' << p;
    meta << ';';
    for (const auto& b : shifts.bands) meta << b.n_max << ':' << b.delta_tau << ',';
    const uint64_t h = fnv1a(meta.str(), fnv1a(text_bytes));
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace wan
