#include "emocorpus/planner.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "emocorpus/errors.hpp"
#include "emocorpus/rng.hpp"
#include "json.hpp"

namespace emocorpus {
namespace {

constexpr std::array<std::string_view, 3> kModelNames = {"cosyvoice2", "emovoice", "maskgct"};

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::string_view to_string(TtsModel m) { return kModelNames.at(static_cast<std::size_t>(m)); }

std::optional<TtsModel> parse_tts_model(std::string_view text) {
    for (std::size_t i = 0; i < kModelNames.size(); ++i) {
        if (kModelNames[i] == text) return static_cast<TtsModel>(i);
    }
    return std::nullopt;
}

Source source_of(TtsModel m) {
    switch (m) {
        case TtsModel::cosyvoice2: return Source::cosyvoice2;
        case TtsModel::emovoice: return Source::emovoice;
        case TtsModel::maskgct: return Source::maskgct;
    }
    return Source::other;
}

std::string cosyvoice_instruction(Emotion e) { return "Bubbling with " + title_case(e); }

std::vector<SynthesisJob> plan_jobs(const PlanRequest& req) {
    for (const auto& t : req.transcripts) {
        if (blank(t.text_ref)) throw ValidationError("transcript '" + t.utt_id + "' has empty text");
    }

    std::map<Emotion, std::vector<const UtteranceRecord*>> pool;
    if (req.model == TtsModel::maskgct) {
        for (const auto& p : req.prompt_pool) {
            if (!p.emotion_label) continue;
            if (!p.audio_path) {
                throw ValidationError("prompt pool record '" + p.utt_id + "' has no audio_path");
            }
            pool[*p.emotion_label].push_back(&p);
        }
        for (Emotion e : kAllEmotions) {
            if (!pool.count(e)) {
                throw PoolCoverageError("prompt pool has no exemplar for emotion '" +
                                        std::string(to_string(e)) + "'");
            }
        }
    }
    if (req.model == TtsModel::emovoice) {
        for (Emotion e : kAllEmotions) {
            if (!req.freestyle || !req.freestyle->count(e) || req.freestyle->at(e).empty()) {
                throw ValidationError("no freestyle prompts for emotion '" + std::string(to_string(e)) + "'");
            }
        }
    }

    std::vector<SynthesisJob> jobs;
    jobs.reserve(req.transcripts.size() * kAllEmotions.size());
    for (const auto& t : req.transcripts) {
        for (Emotion e : kAllEmotions) {
            SynthesisJob job;
            job.utt_id = t.utt_id;
            job.job_id = std::string(to_string(req.model)) + "-" + t.utt_id + "-" + std::string(to_string(e));
            job.split = t.split;
            job.text = t.text_ref;
            job.emotion = e;
            job.model = req.model;
            job.seed = derive_seed(req.seed, job.job_id);
            Rng rng(job.seed);
            switch (req.model) {
                case TtsModel::cosyvoice2:
                    job.instruct_text = cosyvoice_instruction(e);
                    break;
                case TtsModel::emovoice: {
                    const auto& prompts = req.freestyle->at(e);
                    job.style_prompt = prompts[uniform_index(rng, prompts.size())];
                    break;
                }
                case TtsModel::maskgct: {
                    const auto& candidates = pool.at(e);
                    job.prompt_audio = *candidates[uniform_index(rng, candidates.size())]->audio_path;
                    break;
                }
            }
            jobs.push_back(std::move(job));
        }
    }
    return jobs;
}

std::string job_to_line(const SynthesisJob& job) {
    nlohmann::ordered_json j;
    j["job_id"] = job.job_id;
    j["utt_id"] = job.utt_id;
    j["split"] = to_string(job.split);
    j["text"] = job.text;
    j["emotion"] = to_string(job.emotion);
    j["model"] = to_string(job.model);
    if (job.instruct_text) j["instruct_text"] = *job.instruct_text;
    if (job.style_prompt) j["style_prompt"] = *job.style_prompt;
    if (job.prompt_audio) j["prompt_audio"] = *job.prompt_audio;
    j["seed"] = job.seed;
    j["rng"] = kRngName;
    return j.dump();
}

std::string jobs_to_jsonl(std::span<const SynthesisJob> jobs) {
    std::string out;
    for (const auto& job : jobs) {
        out += job_to_line(job);
        out += '\n';
    }
    return out;
}

std::vector<UtteranceRecord> planned_records(std::span<const SynthesisJob> jobs, const std::string& audio_root) {
    std::vector<UtteranceRecord> out;
    out.reserve(jobs.size());
    for (const auto& job : jobs) {
        UtteranceRecord r;
        r.utt_id = job.job_id;
        r.pair_id = job.utt_id;
        r.source = source_of(job.model);
        r.split = job.split;
        r.text_ref = job.text;
        r.emotion_label = job.emotion;
        r.audio_path = audio_root.empty() ? job.job_id + ".wav" : audio_root + "/" + job.job_id + ".wav";
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<UtteranceRecord> sample_transcripts(std::span<const UtteranceRecord> records, std::size_t n,
                                                std::uint64_t seed) {
    if (n > records.size()) {
        throw ValidationError("cannot sample " + std::to_string(n) + " of " +
                              std::to_string(records.size()) + " records");
    }
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    // Partial Fisher-Yates: the first n slots end up a uniform sample.
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + uniform_index(rng, idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    std::sort(idx.begin(), idx.end());
    std::vector<UtteranceRecord> out;
    out.reserve(n);
    for (std::size_t i : idx) out.push_back(records[i]);
    return out;
}

FreestylePrompts parse_freestyle_prompts(const std::string& text) {
    FreestylePrompts prompts;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            const auto name = j.at("emotion").get<std::string>();
            const auto e = parse_emotion(name);
            if (!e) throw ParseError(line_no, "unknown emotion '" + name + "'");
            prompts[*e].push_back(j.at("prompt").get<std::string>());
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(line_no, std::string("bad freestyle prompt: ") + ex.what());
        }
    }
    return prompts;
}

}  // namespace emocorpus
