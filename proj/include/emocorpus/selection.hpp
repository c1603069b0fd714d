#pragma once

// Generative selection strategies over synthesized utterances:
//   TTS-G      more substitutions than the original recording, with no
//              more deletions or insertions;
//   EMO-G      at least one emotion dimension more than one standard
//              deviation from the dataset mean;
//   TTS-EMO-G  both.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "emocorpus/emotion_stats.hpp"
#include "emocorpus/types.hpp"

namespace emocorpus {

/// S_s > S_o and D_s <= D_o and I_s <= I_o. Throws PairingError when the
/// profiles were computed against references of different lengths.
bool tts_g_predicate(const AlignmentProfile& synth, const AlignmentProfile& orig);

/// Strict: a deviation exactly equal to sigma does not select.
bool emo_g_predicate(const EmotionScore& score, const CorpusEmotionStats& stats);

struct SelectionVerdict {
    std::string utt_id;
    bool tts_g = false;
    bool emo_g = false;
    bool tts_emo_g = false;
    std::string reason;
};

struct SubsetOptions {
    bool evaluate_tts = true;  // needs originals and alignments
    bool evaluate_emo = true;  // needs emotion scores and stats
};

struct SelectionResult {
    std::vector<UtteranceRecord> tts_g;
    std::vector<UtteranceRecord> emo_g;
    std::vector<UtteranceRecord> tts_emo_g;
    std::vector<SelectionVerdict> verdicts;  // one per synth record, input order
};

/// Builds the three subsets. Originals are matched through
/// UtteranceRecord::effective_pair_id(); every synthesized record must
/// resolve to exactly one original whose normalized reference is identical.
///
/// All prerequisites are checked before any verdict is produced:
/// PairingError lists unresolved, ambiguous or mismatched utt_ids;
/// PrerequisiteError lists records missing alignments or scores.
SelectionResult build_subsets(std::span<const UtteranceRecord> synth,
                              std::span<const UtteranceRecord> originals,
                              const CorpusEmotionStats* stats, SubsetOptions options = {});

using StatsBySource = std::map<Source, CorpusEmotionStats>;

/// Same, but each synthesized record is judged against the statistics of
/// its own source (TTS system). A source missing from the map is a
/// PrerequisiteError when EMO-G is evaluated.
SelectionResult build_subsets(std::span<const UtteranceRecord> synth,
                              std::span<const UtteranceRecord> originals, const StatsBySource& stats,
                              SubsetOptions options = {});

/// Emotion statistics computed separately for every source present.
StatsBySource emotion_stats_by_source(std::span<const UtteranceRecord> records);

/// CSV `utt_id,tts_g,emo_g,tts_emo_g,reason` with 0/1 flags.
std::string verdicts_csv(std::span<const SelectionVerdict> verdicts);

}  // namespace emocorpus
