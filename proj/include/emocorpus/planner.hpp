#pragma once

// Expands transcriptions into emotional TTS synthesis jobs, one per
// (transcript, emotion). No TTS model is run here.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emocorpus/types.hpp"

namespace emocorpus {

enum class TtsModel : std::uint8_t { cosyvoice2, emovoice, maskgct };

std::string_view to_string(TtsModel m);
std::optional<TtsModel> parse_tts_model(std::string_view text);
Source source_of(TtsModel m);

struct SynthesisJob {
    std::string job_id;
    std::string utt_id;  // source transcription
    Split split = Split::train;
    std::string text;
    Emotion emotion = Emotion::neutral;
    TtsModel model = TtsModel::cosyvoice2;
    std::optional<std::string> instruct_text;  // cosyvoice2
    std::optional<std::string> style_prompt;   // emovoice
    std::optional<std::string> prompt_audio;   // maskgct
    std::uint64_t seed = 0;

    bool operator==(const SynthesisJob&) const = default;
};

/// Per-emotion freestyle prompt lists for EmoVoice.
using FreestylePrompts = std::map<Emotion, std::vector<std::string>>;

struct PlanRequest {
    TtsModel model = TtsModel::cosyvoice2;
    std::span<const UtteranceRecord> transcripts;
    // Exemplar pool for MaskGCT: records with emotion_label and audio_path.
    std::span<const UtteranceRecord> prompt_pool;
    const FreestylePrompts* freestyle = nullptr;
    std::uint64_t seed = 0;
};

/// "Bubbling with Angry", ...
std::string cosyvoice_instruction(Emotion e);

/// Jobs ordered by transcript, then emotion in kAllEmotions order. Each job
/// draws from its own generator seeded with `seed` (recorded in the job), so
/// a job's prompt depends only on the base seed, the transcript and the
/// emotion.
///
/// Throws ValidationError for empty transcript text or a missing EmoVoice
/// prompt list, PoolCoverageError when the MaskGCT pool lacks an emotion.
std::vector<SynthesisJob> plan_jobs(const PlanRequest& request);

std::string job_to_line(const SynthesisJob& job);
std::string jobs_to_jsonl(std::span<const SynthesisJob> jobs);

/// The manifest a TTS runner is expected to fill in: one synthesized record
/// per job with pair_id pointing at the transcription and a planned
/// audio_path under `audio_root`.
std::vector<UtteranceRecord> planned_records(std::span<const SynthesisJob> jobs,
                                             const std::string& audio_root);

/// Seeded uniform sample of `n` records without replacement; the selected
/// records keep their input order. Throws ValidationError when n exceeds
/// the input size.
std::vector<UtteranceRecord> sample_transcripts(std::span<const UtteranceRecord> records,
                                                std::size_t n, std::uint64_t seed);

/// Reads JSONL lines {"emotion": "...", "prompt": "..."}.
FreestylePrompts parse_freestyle_prompts(const std::string& text);

}  // namespace emocorpus
