// wan: word-adjacency network toolkit.
//
// Subcommands: tokenize, build, analyze, curve, fit, synth, report.
// Everything emits CSV/JSON under --out-dir; see README.md for examples.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wan/cli.hpp"
#include "wan/parallel.hpp"

namespace {

void add_input_options(CLI::App* cmd, wan::RunConfig& cfg) {
    cmd->add_option("--manifest", cfg.manifest_path,
                    "line-oriented JSON manifest of texts");
    cmd->add_option("--text", cfg.text_path, "single text file");
    cmd->add_option_function<std::string>(
           "--language",
           [&cfg](const std::string& v) { cfg.text_language = wan::language_from_string(v); },
           "language of --text input (english|chinese|other)")
        ->default_str("english");
    cmd->add_flag("--pre-segmented", cfg.pre_segmented,
                  "treat --text input as whitespace-delimited tokens");
    cmd->add_option("--dict", cfg.dict_path,
                    "dictionary (one word per line) for the greedy segmenter");
    cmd->add_option("--punct-config", cfg.punct_config_path,
                    "JSON file with terminators/other_marks/excluded lists");
    cmd->add_option_function<std::string>(
        "--terminators",
        [&cfg](const std::string& v) { cfg.terminators_override = wan::decode_utf8(v); },
        "override terminator marks (string of code points)");
    cmd->add_option_function<std::string>(
        "--marks",
        [&cfg](const std::string& v) { cfg.marks_override = wan::decode_utf8(v); },
        "override other kept marks");
    cmd->add_option_function<std::string>(
        "--excluded",
        [&cfg](const std::string& v) { cfg.excluded_override = wan::decode_utf8(v); },
        "override excluded marks");
}

void add_mode_option(CLI::App* cmd, wan::RunConfig& cfg) {
    cmd->add_option_function<std::string>(
           "--mode",
           [&cfg](const std::string& v) {
               if (v == "tokens")
                   cfg.mode = wan::RunConfig::ModeSelect::Tokens;
               else if (v == "words")
                   cfg.mode = wan::RunConfig::ModeSelect::Words;
               else if (v == "both")
                   cfg.mode = wan::RunConfig::ModeSelect::Both;
               else
                   throw CLI::ValidationError("--mode must be tokens|words|both");
           },
           "network variant: tokens|words|both")
        ->default_str("both");
}

void add_schedule_options(CLI::App* cmd, wan::RunConfig& cfg) {
    cmd->add_option_function<std::string>(
        "--checkpoints",
        [&cfg](const std::string& v) {
            std::vector<uint32_t> pts;
            std::istringstream in(v);
            std::string tok;
            while (std::getline(in, tok, ','))
                if (!tok.empty()) pts.push_back(static_cast<uint32_t>(std::stoul(tok)));
            cfg.checkpoints = std::move(pts);
        },
        "explicit checkpoint list, e.g. 2,5,10,100");
    cmd->add_option_function<std::string>(
        "--dtau-bands",
        [&cfg](const std::string& v) {
            std::vector<wan::ShiftSchedule::Band> bands;
            std::istringstream in(v);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw CLI::ValidationError("--dtau-bands entries look like nmax:dtau");
                bands.push_back({std::stoull(tok.substr(0, colon)),
                                 std::stoull(tok.substr(colon + 1))});
            }
            cfg.dtau_bands = std::move(bands);
        },
        "shift schedule bands, e.g. 10000:100,100000:1000");
    cmd->add_option_function<uint32_t>(
        "--max-n", [&cfg](const uint32_t& v) { cfg.max_n = v; },
        "cap the largest checkpoint");
}

void add_common_options(CLI::App* cmd, wan::RunConfig& cfg) {
    cmd->add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--out-dir", cfg.out_dir, "artifact directory")
        ->capture_default_str();
    cmd->add_flag("--no-cache", cfg.no_cache, "recompute curves, ignore the cache");
    cmd->add_flag("--export-edges", cfg.export_edges,
                  "also write networks/<id>.<mode>.edges + .nodes");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-adjacency network growth analysis"};
    app.require_subcommand(1);

    wan::RunConfig cfg;
    cfg.jobs = wan::default_jobs();

    CLI::App* tokenize = app.add_subcommand("tokenize", "token stream and mark census");
    add_input_options(tokenize, cfg);
    add_common_options(tokenize, cfg);

    CLI::App* build = app.add_subcommand("build", "export adjacency networks");
    add_input_options(build, cfg);
    add_mode_option(build, cfg);
    add_common_options(build, cfg);

    CLI::App* analyze = app.add_subcommand("analyze", "full-network metrics CSV");
    add_input_options(analyze, cfg);
    add_mode_option(analyze, cfg);
    add_common_options(analyze, cfg);

    CLI::App* curve = app.add_subcommand("curve", "shifted-start L(N) curves");
    add_input_options(curve, cfg);
    add_mode_option(curve, cfg);
    add_schedule_options(curve, cfg);
    add_common_options(curve, cfg);

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit the hybrid model to a curve CSV");
    fit_cmd->add_option("--curve", cfg.curve_path, "curve CSV to fit")->required();
    add_common_options(fit_cmd, cfg);

    CLI::App* synth = app.add_subcommand("synth", "accelerated-growth generator curve");
    synth->add_option("--p0", cfg.synth_p0, "new-node probability scale")
        ->capture_default_str();
    synth->add_option("--delta", cfg.synth_delta, "Heaps exponent target")
        ->capture_default_str();
    synth->add_option("--eta", cfg.synth_eta, "attachment exponent rate")
        ->capture_default_str();
    synth->add_option("--steps", cfg.synth_steps, "growth steps per realization")
        ->capture_default_str();
    synth->add_option("--realizations", cfg.synth_realizations, "independent seeds")
        ->capture_default_str();
    add_schedule_options(synth, cfg);
    add_common_options(synth, cfg);

    CLI::App* report = app.add_subcommand("report", "full pipeline over a manifest");
    add_input_options(report, cfg);
    add_mode_option(report, cfg);
    add_schedule_options(report, cfg);
    add_common_options(report, cfg);

    CLI11_PARSE(app, argc, argv);

    using Command = wan::RunConfig::Command;
    if (tokenize->parsed()) cfg.command = Command::Tokenize;
    if (build->parsed()) cfg.command = Command::Build;
    if (analyze->parsed()) cfg.command = Command::Analyze;
    if (curve->parsed()) cfg.command = Command::Curve;
    if (fit_cmd->parsed()) cfg.command = Command::Fit;
    if (synth->parsed()) cfg.command = Command::Synth;
    if (report->parsed()) cfg.command = Command::Report;

    return wan::run(cfg);
}
