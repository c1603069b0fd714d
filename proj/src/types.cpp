#include "emocorpus/types.hpp"

#include <algorithm>
#include <cctype>

namespace emocorpus {
namespace {

constexpr std::array<std::string_view, 8> kSourceNames = {
    "librispeech", "cosyvoice2", "emovoice", "maskgct", "msp_test1", "msp_test2", "iemocap", "other"};
constexpr std::array<std::string_view, 4> kSplitNames = {"train", "dev", "test", "eval_only"};
constexpr std::array<std::string_view, 5> kEmotionNames = {"angry", "happy", "neutral", "sad",
                                                           "surprise"};
constexpr std::array<std::string_view, 3> kDimensionNames = {"act", "val", "dom"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) {
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == text) return static_cast<Enum>(i);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(Source s) { return kSourceNames.at(static_cast<std::size_t>(s)); }
std::string_view to_string(Split s) { return kSplitNames.at(static_cast<std::size_t>(s)); }
std::string_view to_string(Emotion e) { return kEmotionNames.at(static_cast<std::size_t>(e)); }
std::string_view to_string(Dimension d) { return kDimensionNames.at(static_cast<std::size_t>(d)); }

std::string title_case(Emotion e) {
    std::string name(to_string(e));
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    return name;
}

std::optional<Source> parse_source(std::string_view text) { return lookup<Source>(kSourceNames, text); }
std::optional<Split> parse_split(std::string_view text) { return lookup<Split>(kSplitNames, text); }
std::optional<Emotion> parse_emotion(std::string_view text) {
    return lookup<Emotion>(kEmotionNames, text);
}

bool is_synthesized(Source s) {
    return s == Source::cosyvoice2 || s == Source::emovoice || s == Source::maskgct;
}

EmotionScore EmotionScore::msp(double act, double val, double dom) {
    return EmotionScore{act, val, dom, 1.0, 7.0, 4.0};
}

EmotionScore EmotionScore::iemocap(double act, double val, double dom) {
    return EmotionScore{act, val, dom, 1.0, 5.0, 3.0};
}

double EmotionScore::get(Dimension d) const {
    switch (d) {
        case Dimension::act: return act;
        case Dimension::val: return val;
        case Dimension::dom: return dom;
    }
    return act;
}

bool EmotionScore::same_scale(const EmotionScore& other) const {
    return scale_min == other.scale_min && scale_max == other.scale_max && neutral == other.neutral;
}

std::size_t EmotionScore::clamp_to_scale() {
    std::size_t moved = 0;
    for (double* v : {&act, &val, &dom}) {
        const double c = std::clamp(*v, scale_min, scale_max);
        if (c != *v) {
            *v = c;
            ++moved;
        }
    }
    return moved;
}

char op_code(EditOp op) {
    switch (op) {
        case EditOp::match: return 'M';
        case EditOp::sub: return 'S';
        case EditOp::del: return 'D';
        case EditOp::ins: return 'I';
    }
    return '?';
}

std::optional<EditOp> parse_op_code(char c) {
    switch (c) {
        case 'M': return EditOp::match;
        case 'S': return EditOp::sub;
        case 'D': return EditOp::del;
        case 'I': return EditOp::ins;
        default: return std::nullopt;
    }
}

bool AlignmentProfile::ops_consistent() const {
    if (ops.empty()) return true;
    std::array<std::size_t, 4> counts{};
    for (EditOp op : ops) ++counts[static_cast<std::size_t>(op)];
    return counts[0] == n_match && counts[1] == n_sub && counts[2] == n_del && counts[3] == n_ins;
}

std::optional<std::string> UtteranceRecord::effective_pair_id() const {
    if (pair_id) return pair_id;
    if (source == Source::librispeech) return utt_id;
    return std::nullopt;
}

}  // namespace emocorpus
