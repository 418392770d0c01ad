// detbench: determiner productivity and TPR benchmarks for dialogue corpora
// and model-scored D×N sites.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "detbench/analytic.hpp"
#include "detbench/extraction.hpp"
#include "detbench/fixture.hpp"
#include "detbench/io.hpp"
#include "detbench/montecarlo.hpp"
#include "detbench/productivity.hpp"
#include "detbench/report.hpp"
#include "detbench/transcript.hpp"

namespace fs = std::filesystem;
using namespace detbench;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    double alpha = kDefaultAlpha;
    std::uint64_t seed = 20240501;
    std::string format = "table";
    double threshold = kDefaultDegeneracyThreshold;
    double coca_bias = 0.82;
    double adult_tpr = 0.215;
    std::string output;
};

struct TranscriptInputs {
    std::vector<std::string> paths;
    std::string speaker_map;
    std::string dyad;
    std::string annotations;
    std::optional<std::size_t> window;
    bool exclude_verbatim = false;
    bool no_response_context = false;
};

OutputFormat output_format(const Globals& g) {
    auto f = format_from_string(g.format);
    if (!f) throw UsageError("unknown --format '" + g.format + "'");
    return *f;
}

void emit(const Globals& g, const std::string& text) {
    if (g.output.empty() || g.output == "-") {
        std::cout << text;
    } else {
        write_file_atomic(g.output, text);
    }
}

std::string context_of(const fs::path& path, const DataError& e) {
    return path.string() + ":" + (e.line() ? std::to_string(e.line()) : std::string("?")) + ": " +
           e.what();
}

template <class Fn>
auto with_file(const fs::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    try {
        return fn(in);
    } catch (const DataError& e) {
        throw DataError(context_of(path, e));
    }
}

SpeakerMap speaker_map(const std::string& path) {
    if (path.empty()) return SpeakerMap::defaults();
    return with_file(path, [](std::istream& in) { return SpeakerMap::from_stream(in); });
}

bool is_chat(const fs::path& path) {
    auto ext = path.extension().string();
    return ext == ".cha" || ext == ".chat";
}

std::vector<Session> load_transcripts(const TranscriptInputs& t) {
    auto speakers = speaker_map(t.speaker_map);
    std::vector<Session> sessions;
    for (const auto& p : t.paths) {
        fs::path path(p);
        std::vector<Session> part;
        if (is_chat(path)) {
            ChatOptions options;
            options.dyad_id = t.dyad.empty() ? path.stem().string() : t.dyad;
            options.session_id = path.stem().string();
            auto result = parse_chat(read_file(path), speakers, options);
            for (const auto& w : result.warnings)
                std::cerr << fmt::format("{}:{}: warning: {}\n", path.string(), w.line, w.message);
            part = std::move(result.sessions);
        } else {
            part = with_file(path, [](std::istream& in) { return parse_jsonl_transcript(in); });
            if (!t.dyad.empty())
                for (auto& s : part) s.dyad_id = t.dyad;
        }
        for (auto& s : part) sessions.push_back(std::move(s));
    }
    return sessions;
}

struct Extracted {
    std::vector<Session> sessions;
    std::vector<DxNSite> sites;
    std::vector<Transition> transitions;
};

Extracted extract(const TranscriptInputs& t) {
    Extracted out;
    out.sessions = load_transcripts(t);

    std::optional<std::vector<SessionAnnotation>> annotations;
    if (!t.annotations.empty())
        annotations = with_file(t.annotations,
                                [](std::istream& in) { return read_annotations_jsonl(in); });

    std::size_t no_head = 0, plural = 0;
    for (const auto& session : out.sessions) {
        ExtractionResult r;
        if (annotations) {
            std::vector<NounAnnotation> mine;
            for (const auto& a : *annotations)
                if (a.session_id == session.session_id) mine.push_back(a.annotation);
            std::sort(mine.begin(), mine.end(), [](const auto& x, const auto& y) {
                return std::pair{x.utt_index, x.token_index} < std::pair{y.utt_index, y.token_index};
            });
            r = extract_dxn_sites(session, mine);
        } else {
            r = extract_dxn_sites(session);
        }
        no_head += r.skipped_no_head;
        plural += r.skipped_plural;
        for (auto& s : r.sites) out.sites.push_back(std::move(s));
    }
    if (!annotations && (no_head || plural))
        std::cerr << fmt::format("extract: skipped {} determiners without a head noun, {} plural heads\n",
                                 no_head, plural);

    PairingOptions po;
    po.window_utts = t.window;
    po.exclude_verbatim_repeats = t.exclude_verbatim;
    po.responses_as_context = !t.no_response_context;
    out.transitions = pair_transitions(out.sites, po, out.sessions);
    return out;
}

void add_transcript_options(CLI::App* cmd, TranscriptInputs& t, bool positional) {
    if (positional)
        cmd->add_option("inputs", t.paths, "Transcript files (.cha or JSONL)")->required();
    cmd->add_option("--speaker-map", t.speaker_map, "Speaker-to-role file (LABEL = role lines)");
    cmd->add_option("--dyad", t.dyad, "Dyad id (default: file stem for CHAT input)");
}

void add_pairing_options(CLI::App* cmd, TranscriptInputs& t) {
    cmd->add_option("--annotations", t.annotations, "Noun annotation JSONL (gold extraction)");
    cmd->add_option("--window", t.window, "Maximum utterance distance for transitions")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--exclude-verbatim", t.exclude_verbatim,
                  "Drop caretaker responses that repeat the child verbatim");
    cmd->add_flag("--no-response-context", t.no_response_context,
                  "A site that answered an earlier one cannot serve as a context");
}

AnalyzeOptions analyze_options(const Globals& g, const std::string& role) {
    AnalyzeOptions o;
    o.benchmarks.alpha = g.alpha;
    o.benchmarks.coca_bias = g.coca_bias;
    o.benchmarks.adult_tpr_baseline = g.adult_tpr;
    o.degeneracy_threshold = g.threshold;
    if (!role.empty()) {
        auto r = role_from_string(role);
        if (!r) throw UsageError("--role must be child, caretaker or other");
        o.role = r;
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Determiner productivity and discourse benchmarks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file");

    Globals g;
    app.add_option("--alpha", g.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", g.seed, "Seed for simulations");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--threshold", g.threshold, "Degenerate-bias threshold")
        ->check(CLI::Range(0.5, 1.0));
    app.add_option("--coca-bias", g.coca_bias, "Reference bias for the one-sample bias test");
    app.add_option("--adult-tpr", g.adult_tpr, "Adult TPR baseline")->check(CLI::Range(0.0, 1.0));
    app.add_option("-o,--output", g.output, "Write the main output here (atomically)");

    // convert
    TranscriptInputs conv;
    auto* convert = app.add_subcommand("convert", "CHAT or JSONL transcripts to normalized JSONL");
    add_transcript_options(convert, conv, true);

    // extract
    TranscriptInputs ext;
    std::string sites_out, transitions_out;
    auto* extract_cmd = app.add_subcommand("extract", "D×N sites and determiner transitions");
    add_transcript_options(extract_cmd, ext, true);
    add_pairing_options(extract_cmd, ext);
    extract_cmd->add_option("--sites-out", sites_out, "Site JSONL (default: stdout)");
    extract_cmd->add_option("--transitions-out", transitions_out, "Transition JSONL");

    // analyze
    TranscriptInputs ana;
    std::optional<std::string> fixture_path;
    std::string sites_in, transitions_in, prob_sites_in, role;
    auto* analyze = app.add_subcommand("analyze", "Per-dyad statistics and benchmark verdicts");
    auto* fixture_opt = analyze->add_option("--fixture", fixture_path,
                                            "Reference table CSV (built-in when no path)")
                            ->expected(0, 1);
    auto* transcripts_opt =
        analyze->add_option("--transcripts", ana.paths, "Transcript files (.cha or JSONL)");
    add_transcript_options(analyze, ana, false);
    add_pairing_options(analyze, ana);
    auto* sites_opt = analyze->add_option("--sites", sites_in, "Observed site JSONL");
    analyze->add_option("--transitions", transitions_in, "Transition JSONL (with --sites)")
        ->needs(sites_opt);
    auto* prob_opt = analyze->add_option("--prob-sites", prob_sites_in, "Model ProbSite JSONL");
    analyze->add_option("--role", role, "Restrict to child, caretaker or other");
    fixture_opt->excludes(transcripts_opt)->excludes(sites_opt)->excludes(prob_opt);
    transcripts_opt->excludes(sites_opt);

    // expected-overlap
    std::size_t n_types = 0, n_tokens = 0;
    double bias_value = 0.0, exponent = 1.0;
    auto* eo = app.add_subcommand("expected-overlap", "Closed-form expected overlap");
    eo->add_option("--N", n_types, "Noun types")->required()->check(CLI::PositiveNumber);
    eo->add_option("--S", n_tokens, "D×N tokens")->required();
    eo->add_option("--b", bias_value, "Bias")->required()->check(CLI::Range(0.5, 1.0));
    eo->add_option("--a", exponent, "Zipf exponent");

    // simulate
    std::size_t trials = 5000;
    unsigned threads = 0;
    auto* sim = app.add_subcommand("simulate", "Monte Carlo check of the expected overlap");
    sim->add_option("--N", n_types, "Noun types")->required()->check(CLI::PositiveNumber);
    sim->add_option("--S", n_tokens, "D×N tokens")->required();
    sim->add_option("--b", bias_value, "Bias")->required()->check(CLI::Range(0.5, 1.0));
    sim->add_option("--a", exponent, "Zipf exponent");
    sim->add_option("--trials", trials, "Number of sampled corpora")->check(CLI::Range(2, 100000000));
    sim->add_option("--threads", threads, "Worker threads (default: DETBENCH_THREADS or all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        const auto format = output_format(g);

        if (*convert) {
            auto sessions = load_transcripts(conv);
            std::ostringstream out;
            write_jsonl_transcript(out, sessions);
            emit(g, out.str());
        } else if (*extract_cmd) {
            auto data = extract(ext);
            std::ostringstream sites_text, transitions_text;
            write_sites_jsonl(sites_text, data.sites);
            write_transitions_jsonl(transitions_text, data.transitions);
            if (sites_out.empty())
                std::cout << sites_text.str();
            else
                write_file_atomic(sites_out, sites_text.str());
            if (!transitions_out.empty()) write_file_atomic(transitions_out, transitions_text.str());
            std::cerr << fmt::format("extract: {} sites, {} transitions\n", data.sites.size(),
                                     data.transitions.size());
        } else if (*analyze) {
            auto options = analyze_options(g, role);
            AnalysisReport report;
            if (*fixture_opt) {
                Fixture fx = fixture_path && !fixture_path->empty()
                                 ? with_file(*fixture_path,
                                             [](std::istream& in) { return load_fixture(in); })
                                 : builtin_fixture();
                report = analyze_fixture(fx, options);
            } else {
                std::vector<DxNSite> sites;
                std::vector<Transition> transitions;
                if (!ana.paths.empty()) {
                    auto data = extract(ana);
                    sites = std::move(data.sites);
                    transitions = std::move(data.transitions);
                } else if (!sites_in.empty()) {
                    sites = with_file(sites_in, [](std::istream& in) { return read_sites_jsonl(in); });
                    if (!transitions_in.empty())
                        transitions = with_file(transitions_in, [](std::istream& in) {
                            return read_transitions_jsonl(in);
                        });
                } else {
                    throw UsageError("analyze needs one of --fixture, --transcripts or --sites");
                }
                if (!prob_sites_in.empty()) {
                    auto probs = with_file(prob_sites_in,
                                           [](std::istream& in) { return read_prob_sites_jsonl(in); });
                    report = analyze_model(sites, transitions, probs, options);
                } else {
                    report = analyze_sites(sites, transitions, options);
                }
            }
            std::ostringstream out;
            render(out, report, format);
            emit(g, out.str());
        } else if (*eo) {
            emit(g, fmt::format("{:.6f}\n", expected_overlap(n_tokens, n_types, bias_value, exponent)));
        } else if (*sim) {
            SimConfig config{n_types, n_tokens, bias_value, exponent, trials, g.seed};
            auto est = mc_expected_overlap(config, threads);
            const double closed = expected_overlap(n_tokens, n_types, bias_value, exponent);
            const double z = est.standard_error > 0.0 ? (est.mean - closed) / est.standard_error : 0.0;
            std::string text;
            switch (format) {
                case OutputFormat::Table:
                    text = fmt::format(
                        "mean        {:.6f}\nse          {:.6f}\nclosed_form {:.6f}\nz           {:.3f}\n",
                        est.mean, est.standard_error, closed, z);
                    break;
                case OutputFormat::Csv:
                    text = fmt::format("N,S,b,a,trials,seed,mean,se,closed_form,z\n{},{},{},{},{},{},{},{},{},{}\n",
                                       n_types, n_tokens, bias_value, exponent, trials, g.seed,
                                       est.mean, est.standard_error, closed, z);
                    break;
                case OutputFormat::Json:
                    text = fmt::format(
                        "{{\"N\": {}, \"S\": {}, \"b\": {}, \"a\": {}, \"trials\": {}, \"seed\": {}, "
                        "\"mean\": {}, \"se\": {}, \"closed_form\": {}, \"z\": {}}}\n",
                        n_types, n_tokens, bias_value, exponent, trials, g.seed, est.mean,
                        est.standard_error, closed, z);
                    break;
            }
            emit(g, text);
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
