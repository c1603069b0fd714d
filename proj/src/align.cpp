#include "emocorpus/align.hpp"

#include <algorithm>
#include <cstdint>

#include "emocorpus/errors.hpp"

namespace emocorpus {
namespace {

bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_blank(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (const auto& t : tokens_) {
        if (t.empty()) throw ValidationError("empty token");
        if (std::any_of(t.begin(), t.end(), [](unsigned char c) { return is_blank(c); })) {
            throw ValidationError("token '" + t + "' contains whitespace");
        }
    }
}

std::string TokenSequence::joined() const {
    std::string out;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (i) out += ' ';
        out += tokens_[i];
    }
    return out;
}

TokenSequence normalize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_word_byte(c)) {
            current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
            continue;
        }
        const bool intra_word_apostrophe = c == '\'' && !current.empty() && i + 1 < text.size() &&
                                           is_word_byte(static_cast<unsigned char>(text[i + 1]));
        if (intra_word_apostrophe) {
            current += '\'';
            continue;
        }
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return TokenSequence(std::move(tokens));
}

AlignmentProfile align(const TokenSequence& ref, const TokenSequence& hyp) {
    const std::size_t m = ref.size();
    const std::size_t n = hyp.size();
    const std::size_t width = n + 1;
    std::vector<std::uint32_t> cost((m + 1) * width);
    auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * width + j]; };

    for (std::size_t j = 0; j <= n; ++j) at(0, j) = static_cast<std::uint32_t>(j);
    for (std::size_t i = 1; i <= m; ++i) {
        at(i, 0) = static_cast<std::uint32_t>(i);
        for (std::size_t j = 1; j <= n; ++j) {
            const std::uint32_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
            at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
        }
    }

    AlignmentProfile p;
    p.ops.reserve(std::max(m, n));
    std::size_t i = m;
    std::size_t j = n;
    while (i > 0 || j > 0) {
        const std::uint32_t here = at(i, j);
        if (i > 0 && j > 0) {
            const bool same = ref[i - 1] == hyp[j - 1];
            if (same && at(i - 1, j - 1) == here) {
                p.ops.push_back(EditOp::match);
                ++p.n_match;
                --i;
                --j;
                continue;
            }
            if (!same && at(i - 1, j - 1) + 1 == here) {
                p.ops.push_back(EditOp::sub);
                ++p.n_sub;
                --i;
                --j;
                continue;
            }
        }
        if (i > 0 && at(i - 1, j) + 1 == here) {
            p.ops.push_back(EditOp::del);
            ++p.n_del;
            --i;
            continue;
        }
        p.ops.push_back(EditOp::ins);
        ++p.n_ins;
        --j;
    }
    std::reverse(p.ops.begin(), p.ops.end());
    return p;
}

std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = std::min({prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double wer(const AlignmentProfile& profile) {
    if (profile.n_ref() == 0) throw UndefinedWerError("WER undefined for an empty reference");
    return static_cast<double>(profile.errors()) / static_cast<double>(profile.n_ref());
}

AlignmentProfile align_texts(std::string_view ref, std::string_view hyp) {
    return align(normalize(ref), normalize(hyp));
}

}  // namespace emocorpus
