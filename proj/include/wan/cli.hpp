#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wan/corpus.hpp"
#include "wan/csvio.hpp"
#include "wan/errors.hpp"
#include "wan/growthcurve.hpp"
#include "wan/metrics.hpp"
#include "wan/model.hpp"
#include "wan/netbuild.hpp"
#include "wan/parallel.hpp"
#include "wan/synth.hpp"
#include "wan/tokenizer.hpp"

namespace wan {

struct RunConfig {
    enum class Command { Tokenize, Build, Analyze, Curve, Fit, Synth, Report };
    enum class ModeSelect { Tokens, Words, Both };

    Command command = Command::Report;
    ModeSelect mode = ModeSelect::Both;

    std::string manifest_path;
    std::string text_path;
    std::string curve_path;       // fit input
    std::string dict_path;        // greedy segmenter dictionary
    std::string punct_config_path;
    Language text_language = Language::English;
    bool pre_segmented = false;

    std::optional<std::vector<uint32_t>> checkpoints;
    std::optional<std::vector<ShiftSchedule::Band>> dtau_bands;
    std::optional<uint32_t> max_n;

    int jobs = 1;
    uint64_t seed = 42;
    std::string out_dir = "out";
    bool no_cache = false;
    bool export_edges = false;

    // synth parameters
    double synth_p0 = 1.0;
    double synth_delta = 0.8;
    double synth_eta = 0.5;
    uint64_t synth_steps = 100000;
    uint32_t synth_realizations = 8;

    // inventory overrides (code points of the marks)
    std::optional<std::u32string> terminators_override;
    std::optional<std::u32string> marks_override;
    std::optional<std::u32string> excluded_override;
};

inline std::vector<CurveMode> selected_modes(RunConfig::ModeSelect select) {
    switch (select) {
        case RunConfig::ModeSelect::Tokens: return {CurveMode::Tokens};
        case RunConfig::ModeSelect::Words: return {CurveMode::WordsOnly};
        default: return {CurveMode::Tokens, CurveMode::WordsOnly};
    }
}

// Static preflight: returns a list of problems, empty when run() can start.
inline std::vector<std::string> validate_config(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    std::vector<std::string> problems;
    const bool needs_text_input = cfg.command != RunConfig::Command::Fit &&
                                  cfg.command != RunConfig::Command::Synth;
    if (needs_text_input) {
        if (cfg.manifest_path.empty() && cfg.text_path.empty())
            problems.push_back("no input: provide --manifest or --text");
        if (!cfg.manifest_path.empty() && !fs::exists(cfg.manifest_path))
            problems.push_back("input path does not exist: " + cfg.manifest_path);
        if (!cfg.text_path.empty() && !fs::exists(cfg.text_path))
            problems.push_back("input path does not exist: " + cfg.text_path);
    }
    if (cfg.command == RunConfig::Command::Fit) {
        if (cfg.curve_path.empty())
            problems.push_back("fit needs --curve pointing at a curve csv");
        else if (!fs::exists(cfg.curve_path))
            problems.push_back("input path does not exist: " + cfg.curve_path);
    }
    if (!cfg.dict_path.empty() && !fs::exists(cfg.dict_path))
        problems.push_back("input path does not exist: " + cfg.dict_path);
    if (!cfg.punct_config_path.empty() && !fs::exists(cfg.punct_config_path))
        problems.push_back("input path does not exist: " + cfg.punct_config_path);

    if (cfg.checkpoints) {
        const auto& pts = *cfg.checkpoints;
        if (pts.empty() || pts.front() < 2)
            problems.push_back("checkpoints must start at N >= 2");
        for (size_t i = 1; i < pts.size(); ++i)
            if (pts[i] <= pts[i - 1]) {
                problems.push_back("checkpoints must be strictly increasing");
                break;
            }
    }
    if (cfg.dtau_bands) {
        const auto& bands = *cfg.dtau_bands;
        bool ascending = !bands.empty() && bands.front().delta_tau >= 1;
        for (size_t i = 1; i < bands.size(); ++i)
            if (bands[i].n_max <= bands[i - 1].n_max ||
                bands[i].delta_tau <= bands[i - 1].delta_tau)
                ascending = false;
        if (!ascending)
            problems.push_back("dtau bands must be ascending in n_max and delta_tau");
    }
    if (cfg.jobs < 1) problems.push_back("--jobs must be >= 1");
    if (cfg.max_n && *cfg.max_n < 2) problems.push_back("--max-n must be >= 2");

    if (cfg.command == RunConfig::Command::Synth) {
        if (!(cfg.synth_p0 > 0.0 && cfg.synth_p0 <= 1.0))
            problems.push_back("synth needs 0 < p0 <= 1");
        if (!(cfg.synth_delta > 0.0 && cfg.synth_delta < 1.0))
            problems.push_back("synth needs 0 < delta < 1");
        if (!(cfg.synth_eta > 0.0)) problems.push_back("synth needs eta > 0");
        if (cfg.synth_steps < 2) problems.push_back("synth needs steps >= 2");
        if (cfg.synth_realizations < 1)
            problems.push_back("synth needs at least one realization");
    }
    return problems;
}

namespace detail {

inline std::u32string codepoints_from_json(const nlohmann::json& arr,
                                           const std::string& key) {
    std::u32string out;
    for (const auto& item : arr) {
        const std::u32string cps = decode_utf8(item.get<std::string>());
        if (cps.size() != 1)
            throw ConfigError("punctuation config: '" + key +
                              "' entries must be single code points");
        out.push_back(cps[0]);
    }
    return out;
}

inline PunctuationInventory resolve_inventory(const RunConfig& cfg, Language language) {
    std::u32string terminators, marks, excluded;
    bool newline_terminates = true;
    {
        const PunctuationInventory def = default_inventory(language);
        for (char32_t cp : def.terminators)
            if (cp != kNewlineMark) terminators.push_back(cp);
        for (char32_t cp : def.other_marks) marks.push_back(cp);
        for (char32_t cp : def.excluded) excluded.push_back(cp);
    }
    if (!cfg.punct_config_path.empty()) {
        nlohmann::json j;
        try {
            std::ifstream in(cfg.punct_config_path);
            in >> j;
        } catch (const std::exception& e) {
            throw ParseError("punctuation config: " + std::string(e.what()));
        }
        if (j.contains("terminators"))
            terminators = codepoints_from_json(j["terminators"], "terminators");
        if (j.contains("other_marks"))
            marks = codepoints_from_json(j["other_marks"], "other_marks");
        if (j.contains("excluded"))
            excluded = codepoints_from_json(j["excluded"], "excluded");
        if (j.contains("newline_terminates"))
            newline_terminates = j["newline_terminates"].get<bool>();
    }
    if (cfg.terminators_override) terminators = *cfg.terminators_override;
    if (cfg.marks_override) marks = *cfg.marks_override;
    if (cfg.excluded_override) excluded = *cfg.excluded_override;
    return make_inventory(terminators, marks, excluded, newline_terminates);
}

struct InputText {
    TextDocument doc;
    bool pre_segmented = false;
};

inline std::vector<InputText> gather_inputs(const RunConfig& cfg) {
    std::vector<InputText> inputs;
    if (!cfg.manifest_path.empty()) {
        const Manifest manifest = load_manifest(cfg.manifest_path);
        for (const ManifestEntry& entry : manifest.entries)
            inputs.push_back({load_document(entry), entry.pre_segmented});
    }
    if (!cfg.text_path.empty()) {
        inputs.push_back({load_document(cfg.text_path, cfg.text_language,
                                        cfg.pre_segmented),
                          cfg.pre_segmented});
    }
    if (inputs.empty()) throw ConfigError("no inputs given");
    return inputs;
}

inline std::unique_ptr<SegmenterInterface> make_segmenter(const RunConfig& cfg,
                                                          const InputText& input) {
    if (input.pre_segmented) return std::make_unique<WhitespaceSegmenter>();
    if (input.doc.language == Language::Chinese) {
        if (cfg.dict_path.empty())
            throw SegmentationError("Chinese text '" + input.doc.id +
                                    "' needs --dict or pre_segmented input");
        std::ifstream in(cfg.dict_path);
        if (!in) throw IoError("cannot open dictionary: " + cfg.dict_path);
        std::vector<std::string> words;
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            if (!line.empty()) words.push_back(line);
        }
        return std::make_unique<GreedyDictSegmenter>(words);
    }
    return nullptr;  // whitespace path inside tokenize()
}

inline TokenStream stream_for(const RunConfig& cfg, const InputText& input) {
    const PunctuationInventory inventory = resolve_inventory(cfg, input.doc.language);
    const std::unique_ptr<SegmenterInterface> segmenter = make_segmenter(cfg, input);
    return tokenize(input.doc, inventory, segmenter.get());
}

inline const TokenStream& view_for_mode(const TokenStream& stream, CurveMode mode,
                                        TokenStream& storage) {
    if (mode == CurveMode::Tokens) return stream;
    storage = strip_punctuation(stream);
    return storage;
}

inline uint32_t vocabulary_of(const TokenStream& stream) {
    std::unordered_set<std::string_view> types;
    for (const Token& t : stream.tokens) types.insert(t.surface);
    return static_cast<uint32_t>(types.size());
}

inline CheckpointSchedule schedule_for(const RunConfig& cfg, uint32_t vocabulary) {
    if (cfg.checkpoints) return CheckpointSchedule{*cfg.checkpoints};
    uint32_t n_total = vocabulary;
    if (cfg.max_n) n_total = std::min(n_total, *cfg.max_n);
    return default_checkpoints(n_total);
}

inline ShiftSchedule shifts_for(const RunConfig& cfg) {
    if (cfg.dtau_bands) return ShiftSchedule{*cfg.dtau_bands};
    return default_shift_schedule();
}

inline std::filesystem::path out_path(const RunConfig& cfg,
                                      const std::string& relative) {
    return std::filesystem::path(cfg.out_dir) / relative;
}

// Curve with a content-addressed cache: key covers text bytes, id, mode and
// both schedules, so any change recomputes.
inline GrowthCurve cached_curve(const RunConfig& cfg, const InputText& input,
                                const TokenStream& stream, CurveMode mode) {
    TokenStream storage;
    const TokenStream& view = view_for_mode(stream, mode, storage);
    const CheckpointSchedule checkpoints = schedule_for(cfg, vocabulary_of(view));
    const ShiftSchedule shifts = shifts_for(cfg);

    const std::string key =
        cache_key(input.doc.raw + '\0' + input.doc.id, mode, checkpoints, shifts);
    const std::filesystem::path cache_file = out_path(cfg, "cache/" + key + ".csv");
    if (!cfg.no_cache && std::filesystem::exists(cache_file))
        return curve_from_csv(cache_file.string());

    GrowthCurve curve =
        curve_for_text(stream, mode, checkpoints, shifts, input.doc.id, cfg.jobs);
    write_text_file(cache_file, curve_to_csv(curve));
    return curve;
}

inline void export_network(const RunConfig& cfg, const std::string& id,
                           CurveMode mode, const TokenStream& view) {
    Grower grower(view, 0, view.total_len());
    while (grower.step()) {
    }
    const AdjacencyNetwork& net = grower.network();
    const std::string base = "networks/" + id + "." + to_string(mode);
    write_text_file(out_path(cfg, base + ".edges"), edges_to_text(net));
    std::ostringstream nodes;
    for (uint32_t u = 0; u < net.n_nodes(); ++u)
        nodes << u << '\t' << grower.surface(u) << "\n";
    write_text_file(out_path(cfg, base + ".nodes"), nodes.str());
}

inline int run_tokenize(const RunConfig& cfg) {
    for (const InputText& input : gather_inputs(cfg)) {
        const TokenStream stream = stream_for(cfg, input);
        std::ostringstream tsv;
        for (const Token& tok : stream.tokens) {
            const char* kind = tok.kind == TokenKind::Word ? "word"
                               : tok.kind == TokenKind::Punctuation
                                   ? "punctuation"
                                   : "terminator";
            tsv << tok.surface << '\t' << kind << "\n";
        }
        write_text_file(out_path(cfg, "tokens/" + input.doc.id + ".tsv"), tsv.str());
        write_text_file(out_path(cfg, "census/" + input.doc.id + ".csv"),
                        census_to_csv(punctuation_census(stream)));
        std::cout << input.doc.id << ": " << stream.total_len() << " tokens\n";
    }
    return 0;
}

inline int run_build(const RunConfig& cfg) {
    for (const InputText& input : gather_inputs(cfg)) {
        const TokenStream stream = stream_for(cfg, input);
        for (CurveMode mode : selected_modes(cfg.mode)) {
            TokenStream storage;
            const TokenStream& view = view_for_mode(stream, mode, storage);
            export_network(cfg, input.doc.id, mode, view);
            const AdjacencyNetwork net = full_network(view);
            std::cout << input.doc.id << ' ' << to_string(mode) << " N=" << net.n_nodes()
                      << " E=" << net.n_edges << "\n";
        }
    }
    return 0;
}

inline int run_analyze(const RunConfig& cfg) {
    std::ostringstream csv;
    csv << kMetricsSchema << "\n";
    csv << "text_id,mode,N,E,aspl,max_degree,gamma_deg,zipf_alpha,beta,delta\n";
    for (const InputText& input : gather_inputs(cfg)) {
        const TokenStream stream = stream_for(cfg, input);
        for (CurveMode mode : selected_modes(cfg.mode)) {
            TokenStream storage;
            const TokenStream& view = view_for_mode(stream, mode, storage);
            const AdjacencyNetwork net = full_network(view);
            const DegreeHistogram hist = degree_histogram(net);
            double gamma = std::numeric_limits<double>::quiet_NaN();
            try {
                gamma = fit_degree_exponent(hist, 4).gamma;
            } catch (const InsufficientTailError&) {
            }
            double zalpha = std::numeric_limits<double>::quiet_NaN();
            double zbeta = std::numeric_limits<double>::quiet_NaN();
            try {
                const ZipfFit z = zipf_fit(view);
                zalpha = z.zipf_alpha;
                zbeta = z.beta;
            } catch (const TooSmallVocabularyError&) {
            }
            const HeapsFit heaps = heaps_fit(heaps_curve(view));
            csv << input.doc.id << ',' << to_string(mode) << ',' << net.n_nodes() << ','
                << net.n_edges << ',' << fmt_double(aspl(net, cfg.jobs)) << ','
                << hist.max_degree() << ',' << fmt_double(gamma) << ','
                << fmt_double(zalpha) << ',' << fmt_double(zbeta) << ','
                << fmt_double(heaps.delta) << "\n";
            if (cfg.export_edges) export_network(cfg, input.doc.id, mode, view);
        }
    }
    write_text_file(out_path(cfg, "metrics.csv"), csv.str());
    std::cout << "wrote " << out_path(cfg, "metrics.csv").string() << "\n";
    return 0;
}

inline int run_curve(const RunConfig& cfg) {
    std::map<CurveMode, std::vector<GrowthCurve>> per_mode;
    for (const InputText& input : gather_inputs(cfg)) {
        const TokenStream stream = stream_for(cfg, input);
        for (CurveMode mode : selected_modes(cfg.mode)) {
            GrowthCurve curve = cached_curve(cfg, input, stream, mode);
            const std::string rel =
                "curves/" + input.doc.id + "." + to_string(mode) + ".csv";
            write_text_file(out_path(cfg, rel), curve_to_csv(curve));
            std::cout << "wrote " << out_path(cfg, rel).string() << "\n";
            per_mode[mode].push_back(std::move(curve));
            if (cfg.export_edges) {
                TokenStream storage;
                export_network(cfg, input.doc.id, mode,
                               view_for_mode(stream, mode, storage));
            }
        }
    }
    for (const auto& [mode, curves] : per_mode) {
        if (curves.size() < 2) continue;
        const GrowthCurve avg = group_average(curves);
        const std::string rel = std::string("curves/group.") + to_string(mode) + ".csv";
        write_text_file(out_path(cfg, rel), curve_to_csv(avg));
        std::cout << "wrote " << out_path(cfg, rel).string() << "\n";
    }
    return 0;
}

inline int run_fit(const RunConfig& cfg) {
    const GrowthCurve curve = curve_from_csv(cfg.curve_path);
    const FitParams params = fit(curve, std::nullopt, cfg.jobs);
    const std::string stem = std::filesystem::path(cfg.curve_path).stem().string();
    write_text_file(out_path(cfg, "fits/" + stem + ".json"),
                    fit_report_json(curve.text_id, curve.mode, params));
    write_text_file(out_path(cfg, "fits/" + stem + ".fitcurve.csv"),
                    fit_curve_csv(curve, params));
    std::cout << "wrote " << out_path(cfg, "fits/" + stem + ".json").string() << "\n";
    return 0;
}

inline int run_synth(const RunConfig& cfg) {
    SynthConfig synth_cfg;
    synth_cfg.p0 = cfg.synth_p0;
    synth_cfg.delta = cfg.synth_delta;
    synth_cfg.eta = cfg.synth_eta;
    synth_cfg.steps = cfg.synth_steps;
    synth_cfg.seed = cfg.seed;

    CheckpointSchedule checkpoints;
    if (cfg.checkpoints) {
        checkpoints.points = *cfg.checkpoints;
    } else {
        // Probe the realizations' final node counts without ASPL work to
        // find a grid every realization can reach.
        uint32_t reachable = std::numeric_limits<uint32_t>::max();
        for (uint32_t r = 0; r < cfg.synth_realizations; ++r) {
            SynthConfig probe = synth_cfg;
            probe.seed = synth_cfg.seed + 0x9E3779B97F4A7C15ull * (r + 1);
            const SynthResult res = generate(probe);
            reachable = std::min(reachable, res.net.n_nodes());
        }
        if (cfg.max_n) reachable = std::min(reachable, *cfg.max_n);
        checkpoints = default_checkpoints(reachable);
    }

    const GrowthCurve curve =
        synth_curve(synth_cfg, checkpoints, cfg.synth_realizations, cfg.jobs);
    write_text_file(out_path(cfg, "curves/synth.csv"), curve_to_csv(curve));
    std::cout << "wrote " << out_path(cfg, "curves/synth.csv").string() << "\n";
    return 0;
}

inline int run_report(const RunConfig& cfg) {
    std::ostringstream report;
    report << kReportSchema << "\n";
    report << "text_id,mode,n_tot,l_ntot,l_max,argmax_n,asymptote\n";
    std::map<CurveMode, std::vector<GrowthCurve>> per_mode;
    for (const InputText& input : gather_inputs(cfg)) {
        const TokenStream stream = stream_for(cfg, input);
        write_text_file(out_path(cfg, "census/" + input.doc.id + ".csv"),
                        census_to_csv(punctuation_census(stream)));
        for (CurveMode mode : selected_modes(cfg.mode)) {
            GrowthCurve curve = cached_curve(cfg, input, stream, mode);
            write_text_file(
                out_path(cfg, "curves/" + input.doc.id + "." + to_string(mode) + ".csv"),
                curve_to_csv(curve));

            const FitParams params = fit(curve, std::nullopt, cfg.jobs);
            const std::string fit_base = "fits/" + input.doc.id + "." + to_string(mode);
            write_text_file(out_path(cfg, fit_base + ".json"),
                            fit_report_json(input.doc.id, mode, params));
            write_text_file(out_path(cfg, fit_base + ".fitcurve.csv"),
                            fit_curve_csv(curve, params));

            const CurveSample* best = &curve.samples.front();
            for (const CurveSample& s : curve.samples)
                if (s.mean_l > best->mean_l) best = &s;
            const CurveSample& last = curve.samples.back();
            report << input.doc.id << ',' << to_string(mode) << ',' << last.n << ','
                   << fmt_double(last.mean_l) << ',' << fmt_double(best->mean_l) << ','
                   << best->n << ',' << fmt_double(asymptote(params)) << "\n";

            if (cfg.export_edges) {
                TokenStream storage;
                export_network(cfg, input.doc.id, mode,
                               view_for_mode(stream, mode, storage));
            }
            per_mode[mode].push_back(std::move(curve));
        }
    }
    for (const auto& [mode, curves] : per_mode) {
        if (curves.size() < 2) continue;
        write_text_file(out_path(cfg, std::string("curves/group.") + to_string(mode) + ".csv"),
                        curve_to_csv(group_average(curves)));
    }
    write_text_file(out_path(cfg, "report.csv"), report.str());
    std::cout << "wrote " << out_path(cfg, "report.csv").string() << "\n";
    return 0;
}

} // namespace detail

// Executes a validated configuration; artifacts land under cfg.out_dir.
// Any library error surfaces as machine-readable JSON on stderr and a
// non-zero exit status; files written before the failure are kept.
inline int run(const RunConfig& cfg) {
    try {
        const std::vector<std::string> problems = validate_config(cfg);
        if (!problems.empty()) {
            nlohmann::json j;
            j["error"] = "config";
            j["problems"] = problems;
            std::cerr << j.dump() << "\n";
            return 2;
        }
        switch (cfg.command) {
            case RunConfig::Command::Tokenize: return detail::run_tokenize(cfg);
            case RunConfig::Command::Build: return detail::run_build(cfg);
            case RunConfig::Command::Analyze: return detail::run_analyze(cfg);
            case RunConfig::Command::Curve: return detail::run_curve(cfg);
            case RunConfig::Command::Fit: return detail::run_fit(cfg);
            case RunConfig::Command::Synth: return detail::run_synth(cfg);
            case RunConfig::Command::Report: return detail::run_report(cfg);
        }
        return 2;
    } catch (const Error& e) {
        nlohmann::json j;
        j["error"] = e.code();
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json j;
        j["error"] = "internal";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
}

} // namespace wan
