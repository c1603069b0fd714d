#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace emocorpus {

enum class Source : std::uint8_t {
    librispeech,
    cosyvoice2,
    emovoice,
    maskgct,
    msp_test1,
    msp_test2,
    iemocap,
    other,
};

enum class Split : std::uint8_t { train, dev, test, eval_only };

enum class Emotion : std::uint8_t { angry, happy, neutral, sad, surprise };

/// Fixed emotion order used wherever emotions are enumerated (job planning,
/// reports).
inline constexpr std::array<Emotion, 5> kAllEmotions = {
    Emotion::angry, Emotion::happy, Emotion::neutral, Emotion::sad, Emotion::surprise};

std::string_view to_string(Source s);
std::string_view to_string(Split s);
std::string_view to_string(Emotion e);

/// "Angry", "Happy", ...
std::string title_case(Emotion e);

std::optional<Source> parse_source(std::string_view text);
std::optional<Split> parse_split(std::string_view text);
std::optional<Emotion> parse_emotion(std::string_view text);

bool is_synthesized(Source s);

enum class Dimension : std::uint8_t { act, val, dom };
inline constexpr std::array<Dimension, 3> kAllDimensions = {Dimension::act, Dimension::val,
                                                            Dimension::dom};
std::string_view to_string(Dimension d);

/// Arousal / valence / dominance triple on a declared rating scale.
struct EmotionScore {
    double act = 4.0;
    double val = 4.0;
    double dom = 4.0;
    double scale_min = 1.0;
    double scale_max = 7.0;
    double neutral = 4.0;

    /// 1..7 scale, neutral at 4.
    static EmotionScore msp(double act, double val, double dom);
    /// 1..5 scale, neutral at 3.
    static EmotionScore iemocap(double act, double val, double dom);

    double get(Dimension d) const;
    bool same_scale(const EmotionScore& other) const;

    /// Clamps each dimension into [scale_min, scale_max]; returns how many
    /// dimensions were moved.
    std::size_t clamp_to_scale();

    bool operator==(const EmotionScore&) const = default;
};

enum class EditOp : std::uint8_t { match, sub, del, ins };

char op_code(EditOp op);
std::optional<EditOp> parse_op_code(char c);

/// Result of aligning a hypothesis against a reference.
///
/// Counts always satisfy n_match + n_sub + n_del == n_ref() and
/// n_match + n_sub + n_ins == n_hyp(). `ops` is the step sequence in
/// left-to-right order; it may be empty when the profile was read from a
/// manifest that only stored counts.
struct AlignmentProfile {
    std::size_t n_sub = 0;
    std::size_t n_del = 0;
    std::size_t n_ins = 0;
    std::size_t n_match = 0;
    std::vector<EditOp> ops;

    std::size_t n_ref() const { return n_match + n_sub + n_del; }
    std::size_t n_hyp() const { return n_match + n_sub + n_ins; }
    std::size_t errors() const { return n_sub + n_del + n_ins; }

    /// True when `ops` is empty or agrees with the counts.
    bool ops_consistent() const;

    bool operator==(const AlignmentProfile&) const = default;
};

inline constexpr double kMosMin = 1.0;
inline constexpr double kMosMax = 5.0;

struct UtteranceRecord {
    std::string utt_id;
    std::optional<std::string> pair_id;
    Source source = Source::other;
    Split split = Split::train;
    std::string text_ref;
    std::optional<std::string> text_hyp;
    std::optional<std::string> audio_path;
    std::optional<Emotion> emotion_label;
    std::optional<EmotionScore> emotion_score;
    std::optional<double> mos;
    std::optional<AlignmentProfile> align;
    // Keys not understood by this library, kept so they survive a rewrite.
    std::map<std::string, nlohmann::json> extra;

    /// pair_id, or the utt_id itself for LibriSpeech originals.
    std::optional<std::string> effective_pair_id() const;

    bool operator==(const UtteranceRecord&) const = default;
};

}  // namespace emocorpus
