#include "emocorpus/selection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "emocorpus/align.hpp"
#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"

namespace emocorpus {
namespace {

std::string join_ids(const std::vector<std::string>& ids) {
    constexpr std::size_t kShown = 20;
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < kShown; ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    if (ids.size() > kShown) out += ", ... (" + std::to_string(ids.size()) + " total)";
    return out;
}

using StatsFor = std::function<const CorpusEmotionStats*(const UtteranceRecord&)>;

SelectionResult build(std::span<const UtteranceRecord> synth, std::span<const UtteranceRecord> originals,
                      const StatsFor& stats_for, SubsetOptions options);

}  // namespace

bool tts_g_predicate(const AlignmentProfile& synth, const AlignmentProfile& orig) {
    if (synth.n_ref() != orig.n_ref()) {
        throw PairingError("profiles come from references of different length (" +
                           std::to_string(synth.n_ref()) + " vs " + std::to_string(orig.n_ref()) + ")");
    }
    return synth.n_sub > orig.n_sub && synth.n_del <= orig.n_del && synth.n_ins <= orig.n_ins;
}

bool emo_g_predicate(const EmotionScore& score, const CorpusEmotionStats& stats) {
    return std::fabs(score.act - stats.act.mean) > stats.act.stddev ||
           std::fabs(score.val - stats.val.mean) > stats.val.stddev ||
           std::fabs(score.dom - stats.dom.mean) > stats.dom.stddev;
}

SelectionResult build_subsets(std::span<const UtteranceRecord> synth,
                              std::span<const UtteranceRecord> originals,
                              const CorpusEmotionStats* stats, SubsetOptions options) {
    if (options.evaluate_emo && !stats) throw PrerequisiteError("EMO-G needs emotion statistics");
    return build(synth, originals, [stats](const UtteranceRecord&) { return stats; }, options);
}

SelectionResult build_subsets(std::span<const UtteranceRecord> synth,
                              std::span<const UtteranceRecord> originals, const StatsBySource& stats,
                              SubsetOptions options) {
    return build(synth, originals,
                 [&stats](const UtteranceRecord& r) -> const CorpusEmotionStats* {
                     auto it = stats.find(r.source);
                     return it == stats.end() ? nullptr : &it->second;
                 },
                 options);
}

StatsBySource emotion_stats_by_source(std::span<const UtteranceRecord> records) {
    std::map<Source, std::vector<UtteranceRecord>> groups;
    for (const auto& r : records) groups[r.source].push_back(r);
    StatsBySource out;
    for (const auto& [source, group] : groups) {
        try {
            out.emplace(source, emotion_corpus_stats(group));
        } catch (const InsufficientDataError& e) {
            throw InsufficientDataError(std::string(to_string(source)) + ": " + e.what());
        }
    }
    return out;
}

namespace {

SelectionResult build(std::span<const UtteranceRecord> synth, std::span<const UtteranceRecord> originals,
                      const StatsFor& stats_for, SubsetOptions options) {

    std::vector<const UtteranceRecord*> matched(synth.size(), nullptr);
    if (options.evaluate_tts) {
        std::unordered_map<std::string, const UtteranceRecord*> by_pair;
        std::unordered_set<std::string> ambiguous_keys;
        for (const auto& o : originals) {
            const auto key = o.effective_pair_id();
            if (!key) continue;
            if (!by_pair.emplace(*key, &o).second) ambiguous_keys.insert(*key);
        }

        std::vector<std::string> unresolved, ambiguous, mismatched, missing_align;
        for (std::size_t i = 0; i < synth.size(); ++i) {
            const auto& s = synth[i];
            const auto key = s.pair_id;
            if (!key || !by_pair.count(*key)) {
                unresolved.push_back(s.utt_id);
                continue;
            }
            if (ambiguous_keys.count(*key)) {
                ambiguous.push_back(s.utt_id);
                continue;
            }
            const UtteranceRecord* o = by_pair.at(*key);
            if (normalize(s.text_ref) != normalize(o->text_ref)) {
                mismatched.push_back(s.utt_id);
                continue;
            }
            if (!s.align) missing_align.push_back(s.utt_id);
            if (!o->align) missing_align.push_back(o->utt_id);
            matched[i] = o;
        }
        if (!unresolved.empty()) {
            throw PairingError("synthesized records without an original: " + join_ids(unresolved));
        }
        if (!ambiguous.empty()) {
            throw PairingError("synthesized records matching several originals: " + join_ids(ambiguous));
        }
        if (!mismatched.empty()) {
            throw PairingError("reference text differs from the original: " + join_ids(mismatched));
        }
        if (!missing_align.empty()) {
            throw PrerequisiteError("records without alignments: " + join_ids(missing_align));
        }
        for (std::size_t i = 0; i < synth.size(); ++i) {
            if (synth[i].align->n_ref() != matched[i]->align->n_ref()) mismatched.push_back(synth[i].utt_id);
        }
        if (!mismatched.empty()) {
            throw PairingError("alignment reference lengths differ from the original: " +
                               join_ids(mismatched));
        }
    }

    if (options.evaluate_emo) {
        std::vector<std::string> unscored, no_stats, wrong_scale;
        for (const auto& s : synth) {
            const CorpusEmotionStats* stats = stats_for(s);
            if (!s.emotion_score) {
                unscored.push_back(s.utt_id);
            } else if (!stats) {
                no_stats.push_back(s.utt_id);
            } else if (s.emotion_score->scale_min != stats->scale_min ||
                       s.emotion_score->scale_max != stats->scale_max) {
                wrong_scale.push_back(s.utt_id);
            }
        }
        if (!unscored.empty()) throw PrerequisiteError("records without emotion scores: " + join_ids(unscored));
        if (!no_stats.empty()) {
            throw PrerequisiteError("no emotion statistics for the source of: " + join_ids(no_stats));
        }
        if (!wrong_scale.empty()) {
            throw ScaleMismatchError("records on a different scale than the statistics: " +
                                     join_ids(wrong_scale));
        }
    }

    SelectionResult result;
    result.verdicts.reserve(synth.size());
    std::unordered_set<std::string> emo_ids;
    for (std::size_t i = 0; i < synth.size(); ++i) {
        const auto& s = synth[i];
        SelectionVerdict v;
        v.utt_id = s.utt_id;
        std::vector<std::string> reasons;
        if (options.evaluate_tts) {
            const AlignmentProfile& a = *s.align;
            const AlignmentProfile& b = *matched[i]->align;
            v.tts_g = tts_g_predicate(a, b);
            if (a.n_sub <= b.n_sub) reasons.emplace_back("sub_not_increased");
            if (a.n_del > b.n_del) reasons.emplace_back("del_increased");
            if (a.n_ins > b.n_ins) reasons.emplace_back("ins_increased");
        } else {
            reasons.emplace_back("tts_not_evaluated");
        }
        if (options.evaluate_emo) {
            v.emo_g = emo_g_predicate(*s.emotion_score, *stats_for(s));
            if (!v.emo_g) reasons.emplace_back("not_salient");
        } else {
            reasons.emplace_back("emo_not_evaluated");
        }
        v.reason = "selected";
        if (!reasons.empty()) {
            v.reason.clear();
            for (std::size_t k = 0; k < reasons.size(); ++k) {
                if (k) v.reason += ';';
                v.reason += reasons[k];
            }
        }
        if (v.tts_g) result.tts_g.push_back(s);
        if (v.emo_g) {
            result.emo_g.push_back(s);
            emo_ids.insert(s.utt_id);
        }
        result.verdicts.push_back(std::move(v));
    }

    // Intersection by utt_id over the two materialized subsets.
    for (const auto& r : result.tts_g) {
        if (emo_ids.count(r.utt_id)) result.tts_emo_g.push_back(r);
    }
    std::unordered_set<std::string> both;
    for (const auto& r : result.tts_emo_g) both.insert(r.utt_id);
    for (auto& v : result.verdicts) v.tts_emo_g = both.count(v.utt_id) > 0;
    return result;
}

}  // namespace

std::string verdicts_csv(std::span<const SelectionVerdict> verdicts) {
    CsvWriter csv({"utt_id", "tts_g", "emo_g", "tts_emo_g", "reason"});
    for (const auto& v : verdicts) {
        csv.row({v.utt_id, v.tts_g ? "1" : "0", v.emo_g ? "1" : "0", v.tts_emo_g ? "1" : "0", v.reason});
    }
    return csv.str();
}

}  // namespace emocorpus
