#include "emocorpus/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <unordered_map>

#include "CLI11.hpp"
#include "emocorpus/align.hpp"
#include "emocorpus/emotion_stats.hpp"
#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"
#include "emocorpus/manifest.hpp"
#include "emocorpus/oracle.hpp"
#include "emocorpus/plane.hpp"
#include "emocorpus/planner.hpp"
#include "emocorpus/profile.hpp"
#include "emocorpus/selection.hpp"
#include "json.hpp"

namespace emocorpus {
namespace {

using nlohmann::ordered_json;

// Machine-readable record of one invocation. Holds no timestamps so that
// reruns stay byte-identical.
struct RunLog {
    ordered_json j;

    explicit RunLog(const std::string& subcommand) {
        j["tool"] = "emocorpus";
        j["version"] = kVersion;
        j["subcommand"] = subcommand;
        j["inputs"] = ordered_json::object();
        j["outputs"] = ordered_json::array();
        j["counts"] = ordered_json::object();
    }
    void input(const std::string& key, const std::string& path) { j["inputs"][key] = path; }
    void output(const std::string& path) { j["outputs"].push_back(path); }
    void count(const std::string& key, std::size_t n) { j["counts"][key] = n; }
    void param(const std::string& key, ordered_json value) { j["params"][key] = std::move(value); }
};

struct Outputs {
    std::vector<std::pair<std::string, std::string>> files;  // path, content
    void add(std::string path, std::string content) { files.emplace_back(std::move(path), std::move(content)); }
};

struct OracleFlags {
    std::string kind = "mock";
    std::string score_file;
    std::string endpoint;
    std::string token;
    long long timeout_ms = 30000;
    std::size_t retries = 2;
    std::size_t jobs = 4;
    std::uint64_t seed = 0;
    std::string failures;

    void attach(CLI::App* app) {
        app->add_option("--oracle", kind, "Oracle backend")->check(CLI::IsMember({"mock", "file", "http"}));
        app->add_option("--score-file", score_file, "JSONL score file (file oracle)");
        app->add_option("--endpoint", endpoint, "Service URL (http oracle)");
        app->add_option("--token", token, "Bearer token passed to the service");
        app->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->check(CLI::PositiveNumber);
        app->add_option("--retries", retries, "Retries per request");
        app->add_option("--jobs", jobs, "Maximum requests in flight")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "Mock oracle seed");
        app->add_option("--failures", failures, "Write a utt_id,reason CSV of failed records");
    }

    OracleConfig config() const {
        OracleConfig c;
        c.kind = *parse_oracle_kind(kind);
        if (!score_file.empty()) c.score_file = score_file;
        if (!endpoint.empty()) c.endpoint = endpoint;
        if (!token.empty()) c.bearer_token = token;
        c.timeout = std::chrono::milliseconds(timeout_ms);
        c.retries = retries;
        c.max_in_flight = jobs;
        c.mock_seed = seed;
        if (c.kind == OracleKind::http) apply_env_overrides(c);
        return c;
    }
};

Manifest load(const std::string& path, RunLog& log, const std::string& key) {
    log.input(key, path);
    Manifest m = read_manifest_file(path);
    log.count(key + "_records", m.records.size());
    if (m.clamped_values) log.count(key + "_clamped_values", m.clamped_values);
    return m;
}

// Shared shape of every subcommand: parse inputs, compute, then write all
// outputs only once everything has succeeded.
using Action = std::function<void(RunLog&, Outputs&)>;

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Emotional speech corpus curation toolkit", "emocorpus"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kVersion);
    std::string run_log_path;
    app.add_option("--run-log", run_log_path, "Also write the JSON run log to this path");

    std::map<CLI::App*, Action> actions;
    auto add = [&](const std::string& name, const std::string& help) { return app.add_subcommand(name, help); };

    // sample-transcripts
    struct {
        std::string in, out;
        std::size_t n = 0;
        std::uint64_t seed = 0;
    } sample;
    {
        auto* sc = add("sample-transcripts", "Seeded uniform sample of transcription records");
        sc->add_option("--in", sample.in)->required();
        sc->add_option("--out", sample.out)->required();
        sc->add_option("--n", sample.n, "Number of records to keep")->required();
        sc->add_option("--seed", sample.seed);
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest m = load(sample.in, log, "in");
            const auto picked = sample_transcripts(m.records, sample.n, sample.seed);
            log.param("seed", sample.seed);
            log.count("sampled", picked.size());
            outs.add(sample.out, write_manifest(picked));
        };
    }

    // plan
    struct {
        std::string in, out, model, prompt_pool, freestyle, records_out, audio_root;
        std::uint64_t seed = 0;
    } plan;
    {
        auto* sc = add("plan", "Expand transcripts into per-emotion synthesis jobs");
        sc->add_option("--in", plan.in, "Transcript manifest")->required();
        sc->add_option("--out", plan.out, "Jobs JSONL")->required();
        sc->add_option("--model", plan.model)->required()->check(CLI::IsMember({"cosyvoice2", "emovoice", "maskgct"}));
        sc->add_option("--seed", plan.seed);
        sc->add_option("--prompt-pool", plan.prompt_pool, "Exemplar manifest for maskgct");
        sc->add_option("--freestyle", plan.freestyle, "JSONL {emotion, prompt} for emovoice");
        sc->add_option("--records-out", plan.records_out, "Also write the planned synthesized manifest");
        sc->add_option("--audio-root", plan.audio_root, "Directory prefix for planned audio paths");
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest transcripts = load(plan.in, log, "in");
            Manifest pool;
            if (!plan.prompt_pool.empty()) pool = load(plan.prompt_pool, log, "prompt_pool");
            FreestylePrompts freestyle;
            if (!plan.freestyle.empty()) {
                log.input("freestyle", plan.freestyle);
                freestyle = parse_freestyle_prompts(read_text_file(plan.freestyle));
            }
            PlanRequest req;
            req.model = *parse_tts_model(plan.model);
            req.transcripts = transcripts.records;
            req.prompt_pool = pool.records;
            req.freestyle = &freestyle;
            req.seed = plan.seed;
            const auto jobs = plan_jobs(req);
            log.param("model", plan.model);
            log.param("seed", plan.seed);
            log.count("jobs", jobs.size());
            outs.add(plan.out, jobs_to_jsonl(jobs));
            if (!plan.records_out.empty()) {
                const std::string root = plan.audio_root.empty() ? "synth/" + plan.model : plan.audio_root;
                outs.add(plan.records_out, write_manifest(planned_records(jobs, root)));
            }
        };
    }

    // Oracle-backed subcommands.
    struct OracleCommand {
        std::string in, out;
        OracleFlags flags;
        double sub_rate = 0.1, del_rate = 0.0, ins_rate = 0.0;
        std::string scale = "msp";
        double mock_mean = 4.0, mock_std = 1.0, mock_mos = 4.0;
    };
    OracleCommand transcribe_cmd, emotion_cmd, mos_cmd;
    auto oracle_action = [&](OracleCommand& cmd,
                             std::function<OracleRun(std::span<const UtteranceRecord>, const OracleConfig&)> fn,
                             std::function<void(OracleConfig&)> tweak) {
        return [&cmd, fn, tweak](RunLog& log, Outputs& outs) {
            const Manifest m = load(cmd.in, log, "in");
            OracleConfig config = cmd.flags.config();
            tweak(config);
            if (config.score_file) log.input("score_file", *config.score_file);
            log.param("oracle", std::string(to_string(config.kind)));
            log.param("seed", config.mock_seed);
            const OracleRun run = fn(m.records, config);
            log.count("succeeded", run.succeeded);
            log.count("failed", run.failures.size());
            log.count("clamped_values", run.clamped_values);
            if (run.unreachable) throw OracleError("oracle unreachable: every request failed at the transport level");
            outs.add(cmd.out, write_manifest(run.records));
            if (!cmd.flags.failures.empty()) outs.add(cmd.flags.failures, failures_csv(run.failures));
        };
    };
    {
        auto* sc = add("transcribe", "Attach ASR hypotheses (text_hyp)");
        sc->add_option("--in", transcribe_cmd.in)->required();
        sc->add_option("--out", transcribe_cmd.out)->required();
        transcribe_cmd.flags.attach(sc);
        sc->add_option("--sub-rate", transcribe_cmd.sub_rate, "Mock per-word substitution probability");
        sc->add_option("--del-rate", transcribe_cmd.del_rate, "Mock per-word deletion probability");
        sc->add_option("--ins-rate", transcribe_cmd.ins_rate, "Mock per-word insertion probability");
        actions[sc] = oracle_action(transcribe_cmd, transcribe, [&](OracleConfig& c) {
            c.mock_sub_rate = transcribe_cmd.sub_rate;
            c.mock_del_rate = transcribe_cmd.del_rate;
            c.mock_ins_rate = transcribe_cmd.ins_rate;
        });
    }
    {
        auto* sc = add("score-emotion", "Attach arousal/valence/dominance scores");
        sc->add_option("--in", emotion_cmd.in)->required();
        sc->add_option("--out", emotion_cmd.out)->required();
        emotion_cmd.flags.attach(sc);
        sc->add_option("--scale", emotion_cmd.scale, "Rating scale of the scores")
            ->check(CLI::IsMember({"msp", "iemocap"}));
        sc->add_option("--mock-mean", emotion_cmd.mock_mean);
        sc->add_option("--mock-std", emotion_cmd.mock_std);
        actions[sc] = oracle_action(emotion_cmd, score_emotion, [&](OracleConfig& c) {
            const EmotionScore s = emotion_cmd.scale == "iemocap" ? EmotionScore::iemocap(3, 3, 3)
                                                                  : EmotionScore::msp(4, 4, 4);
            c.scale_min = s.scale_min;
            c.scale_max = s.scale_max;
            c.mock_mean = emotion_cmd.mock_mean;
            c.mock_std = emotion_cmd.mock_std;
        });
    }
    {
        auto* sc = add("score-mos", "Attach predicted MOS values");
        sc->add_option("--in", mos_cmd.in)->required();
        sc->add_option("--out", mos_cmd.out)->required();
        mos_cmd.flags.attach(sc);
        sc->add_option("--mock-mos", mos_cmd.mock_mos, "Constant MOS returned by the mock oracle");
        actions[sc] = oracle_action(mos_cmd, score_mos, [&](OracleConfig& c) { c.mock_mos = mos_cmd.mock_mos; });
    }

    // align
    struct {
        std::string in, out;
        std::size_t jobs = 1;
        bool allow_missing = false;
    } align_cmd;
    {
        auto* sc = add("align", "Align text_hyp against text_ref and attach S/D/I counts");
        sc->add_option("--ref,--in", align_cmd.in, "Manifest with text_hyp")->required();
        sc->add_option("--out", align_cmd.out)->required();
        sc->add_option("--jobs", align_cmd.jobs, "Worker threads")->check(CLI::PositiveNumber);
        sc->add_flag("--allow-missing", align_cmd.allow_missing, "Pass records without text_hyp through unaligned");
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            Manifest m = load(align_cmd.in, log, "in");
            std::vector<std::string> missing;
            for (const auto& r : m.records) {
                if (!r.text_hyp) missing.push_back(r.utt_id);
            }
            if (!missing.empty() && !align_cmd.allow_missing) {
                throw PrerequisiteError(std::to_string(missing.size()) + " records lack text_hyp (first: '" +
                                        missing.front() + "')");
            }
            parallel_for(m.records.size(), align_cmd.jobs, [&](std::size_t i) {
                auto& r = m.records[i];
                if (r.text_hyp) r.align = align_texts(r.text_ref, *r.text_hyp);
            });
            std::size_t empty_ref = 0;
            for (const auto& r : m.records) {
                if (r.align && r.align->n_ref() == 0) ++empty_ref;
            }
            log.count("aligned", m.records.size() - missing.size());
            log.count("unaligned", missing.size());
            log.count("empty_reference", empty_ref);
            outs.add(align_cmd.out, write_manifest(m.records));
        };
    }

    // profile
    struct {
        std::string in, out;
    } profile_cmd;
    {
        auto* sc = add("profile", "Corpus WER, error-type rates and MOS statistics");
        sc->add_option("--in", profile_cmd.in)->required();
        sc->add_option("--out", profile_cmd.out, "Report CSV")->required();
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest m = load(profile_cmd.in, log, "in");
            const std::string report = profile_report_csv(m.records);
            outs.add(profile_cmd.out, report);
        };
    }

    // emo-stats
    struct {
        std::string in, out, stats_out, split;
    } stats_cmd;
    {
        auto* sc = add("emo-stats", "Per-dimension emotion statistics and box-plot summary");
        sc->add_option("--in", stats_cmd.in)->required();
        sc->add_option("--out", stats_cmd.out, "Box statistics CSV")->required();
        sc->add_option("--stats-out", stats_cmd.stats_out, "Mean/std JSON for select --stats");
        sc->add_option("--split", stats_cmd.split, "Only use records of this split")
            ->check(CLI::IsMember({"train", "dev", "test", "eval_only"}));
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest m = load(stats_cmd.in, log, "in");
            std::vector<UtteranceRecord> subset;
            for (const auto& r : m.records) {
                if (stats_cmd.split.empty() || to_string(r.split) == stats_cmd.split) subset.push_back(r);
            }
            const CorpusEmotionStats stats = emotion_corpus_stats(subset);
            log.count("scored", stats.n);
            outs.add(stats_cmd.out, box_stats_csv(stats));
            if (!stats_cmd.stats_out.empty()) outs.add(stats_cmd.stats_out, emotion_stats_to_json(stats));
        };
    }

    // select
    struct {
        std::string synth, orig, strategy = "tts-emo-g", out_prefix, stats, stats_split;
    } select_cmd;
    {
        auto* sc = add("select", "Build TTS-G / EMO-G / TTS-EMO-G subsets");
        sc->add_option("--synth", select_cmd.synth, "Synthesized manifest")->required();
        sc->add_option("--orig", select_cmd.orig, "Original-recording manifest");
        sc->add_option("--strategy", select_cmd.strategy)->check(CLI::IsMember({"tts-g", "emo-g", "tts-emo-g"}));
        sc->add_option("--out-prefix", select_cmd.out_prefix, "Prefix of the subset manifests and verdict CSV")
            ->required();
        sc->add_option("--stats", select_cmd.stats, "Precomputed emotion statistics JSON");
        sc->add_option("--stats-split", select_cmd.stats_split, "Compute statistics over this split only")
            ->check(CLI::IsMember({"train", "dev", "test", "eval_only"}));
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            SubsetOptions options;
            options.evaluate_tts = select_cmd.strategy != "emo-g";
            options.evaluate_emo = select_cmd.strategy != "tts-g";
            if (options.evaluate_tts && select_cmd.orig.empty()) {
                throw PrerequisiteError("--orig is required for strategy " + select_cmd.strategy);
            }
            const Manifest synth = load(select_cmd.synth, log, "synth");
            Manifest orig;
            if (options.evaluate_tts) orig = load(select_cmd.orig, log, "orig");

            // A stats file applies to every record; otherwise each TTS system
            // is judged against its own statistics.
            std::optional<SelectionResult> selected;
            if (!options.evaluate_emo) {
                selected = build_subsets(synth.records, orig.records, nullptr, options);
            } else if (!select_cmd.stats.empty()) {
                log.input("stats", select_cmd.stats);
                const auto stats = emotion_stats_from_json(read_text_file(select_cmd.stats));
                selected = build_subsets(synth.records, orig.records, &stats, options);
            } else {
                std::vector<UtteranceRecord> subset;
                for (const auto& r : synth.records) {
                    if (select_cmd.stats_split.empty() || to_string(r.split) == select_cmd.stats_split) {
                        subset.push_back(r);
                    }
                }
                const StatsBySource stats = emotion_stats_by_source(subset);
                log.count("stats_sources", stats.size());
                selected = build_subsets(synth.records, orig.records, stats, options);
            }
            const SelectionResult& result = *selected;
            log.param("strategy", select_cmd.strategy);
            log.count("tts_g", result.tts_g.size());
            log.count("emo_g", result.emo_g.size());
            log.count("tts_emo_g", result.tts_emo_g.size());
            const std::string& p = select_cmd.out_prefix;
            outs.add(p + "_tts_g.jsonl", write_manifest(result.tts_g));
            outs.add(p + "_emo_g.jsonl", write_manifest(result.emo_g));
            outs.add(p + "_tts_emo_g.jsonl", write_manifest(result.tts_emo_g));
            outs.add(p + "_verdicts.csv", verdicts_csv(result.verdicts));
        };
    }

    // grid
    struct {
        std::string in, out, plane = "all", scheme = "rounded_1_to_7";
        std::size_t min_count = 0;
    } grid_cmd;
    {
        auto* sc = add("grid", "Per-cell WER over emotion planes");
        sc->add_option("--in", grid_cmd.in)->required();
        sc->add_option("--out", grid_cmd.out, "Grid CSV")->required();
        sc->add_option("--plane", grid_cmd.plane)->check(CLI::IsMember({"act_val", "val_dom", "act_dom", "all"}));
        sc->add_option("--scheme", grid_cmd.scheme)->check(CLI::IsMember({"rounded_1_to_7", "coarse_3x3"}));
        sc->add_option("--min-count", grid_cmd.min_count, "Suppress WER in cells with fewer utterances");
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest m = load(grid_cmd.in, log, "in");
            const BinScheme scheme = *parse_bin_scheme(grid_cmd.scheme);
            std::vector<WerGrid> grids;
            for (Plane p : kAllPlanes) {
                if (grid_cmd.plane == "all" || to_string(p) == grid_cmd.plane) {
                    grids.push_back(wer_grid(m.records, p, scheme, grid_cmd.min_count));
                }
            }
            log.count("binned", grids.front().total_utts());
            outs.add(grid_cmd.out, grid_csv(grids));
        };
    }

    // grid-diff
    struct {
        std::string baseline, treated, out;
    } diff_cmd;
    {
        auto* sc = add("grid-diff", "Per-cell WER difference (treated - baseline)");
        sc->add_option("--baseline", diff_cmd.baseline, "Grid CSV")->required();
        sc->add_option("--treated", diff_cmd.treated, "Grid CSV")->required();
        sc->add_option("--out", diff_cmd.out)->required();
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            log.input("baseline", diff_cmd.baseline);
            log.input("treated", diff_cmd.treated);
            const auto base = grids_from_csv(read_text_file(diff_cmd.baseline));
            const auto treated = grids_from_csv(read_text_file(diff_cmd.treated));
            if (base.size() != treated.size()) throw ShapeError("grid files hold different numbers of planes");
            std::vector<GridDiff> diffs;
            for (std::size_t i = 0; i < base.size(); ++i) diffs.push_back(grid_diff(base[i], treated[i]));
            std::size_t comparable = 0;
            for (const auto& d : diffs) {
                comparable += static_cast<std::size_t>(
                    std::count_if(d.cells.begin(), d.cells.end(), [](const DiffCell& c) { return c.comparable; }));
            }
            log.count("comparable_cells", comparable);
            outs.add(diff_cmd.out, diff_csv(diffs));
        };
    }

    // ccc
    struct {
        std::string pred, ref, out;
    } ccc_cmd;
    {
        auto* sc = add("ccc", "Concordance correlation between predicted and reference scores");
        sc->add_option("--pred", ccc_cmd.pred, "Manifest with predicted scores")->required();
        sc->add_option("--ref", ccc_cmd.ref, "Manifest with reference scores")->required();
        sc->add_option("--out", ccc_cmd.out, "CSV metric,value,n")->required();
        actions[sc] = [&](RunLog& log, Outputs& outs) {
            const Manifest pred = load(ccc_cmd.pred, log, "pred");
            const Manifest ref = load(ccc_cmd.ref, log, "ref");
            std::unordered_map<std::string, const EmotionScore*> gold;
            for (const auto& r : ref.records) {
                if (r.emotion_score) gold.emplace(r.utt_id, &*r.emotion_score);
            }
            std::array<std::vector<double>, 3> x, y;
            for (const auto& r : pred.records) {
                auto it = gold.find(r.utt_id);
                if (!r.emotion_score || it == gold.end()) continue;
                for (Dimension d : kAllDimensions) {
                    x[static_cast<std::size_t>(d)].push_back(r.emotion_score->get(d));
                    y[static_cast<std::size_t>(d)].push_back(it->second->get(d));
                }
            }
            CsvWriter csv({"metric", "value", "n"});
            for (Dimension d : kAllDimensions) {
                const auto k = static_cast<std::size_t>(d);
                csv.row({"ccc_" + std::string(to_string(d)), format_number(ccc(x[k], y[k])),
                         std::to_string(x[k].size())});
            }
            log.count("paired", x[0].size());
            outs.add(ccc_cmd.out, csv.str());
        };
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return 1;
    }

    CLI::App* chosen = app.get_subcommands().front();
    RunLog log(chosen->get_name());
    try {
        Outputs outs;
        actions.at(chosen)(log, outs);
        for (const auto& [path, content] : outs.files) {
            atomic_write_file(path, content);
            log.output(path);
        }
        log.j["status"] = "ok";
        const std::string line = log.j.dump();
        err << line << "\n";
        if (!run_log_path.empty()) atomic_write_file(run_log_path, line + "\n");
        return 0;
    } catch (const Error& e) {
        const bool infra = dynamic_cast<const IoError*>(&e) || dynamic_cast<const OracleError*>(&e);
        log.j["status"] = "error";
        log.j["error"] = e.what();
        const std::string line = log.j.dump();
        err << "error: " << e.what() << "\n" << line << "\n";
        if (!run_log_path.empty()) {
            try {
                atomic_write_file(run_log_path, line + "\n");
            } catch (const IoError&) {
            }
        }
        return infra ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace emocorpus
