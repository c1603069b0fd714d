#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emocorpus/types.hpp"

namespace emocorpus {

/// Normalized word sequence. Tokens are never empty and never contain
/// whitespace; the constructor throws ValidationError otherwise.
class TokenSequence {
public:
    TokenSequence() = default;
    explicit TokenSequence(std::vector<std::string> tokens);

    std::span<const std::string> tokens() const { return tokens_; }
    std::size_t size() const { return tokens_.size(); }
    bool empty() const { return tokens_.empty(); }
    const std::string& operator[](std::size_t i) const { return tokens_[i]; }

    /// Tokens joined with single spaces.
    std::string joined() const;

    bool operator==(const TokenSequence&) const = default;

private:
    std::vector<std::string> tokens_;
};

/// Lowercases ASCII letters, turns everything except letters, digits and
/// apostrophes that sit between two word characters into spaces, then
/// splits on whitespace. Bytes >= 0x80 count as letters so UTF-8 words stay
/// intact.
TokenSequence normalize(std::string_view text);

/// Minimal unit-cost alignment of `hyp` against `ref`.
///
/// Among equal-cost alignments the backtrace, walking from the end of both
/// sequences, prefers match, then substitution, then deletion, then
/// insertion.
AlignmentProfile align(const TokenSequence& ref, const TokenSequence& hyp);

/// Unit-cost Levenshtein distance over words.
std::size_t edit_distance(std::span<const std::string> a, std::span<const std::string> b);

/// (S + D + I) / N. Throws UndefinedWerError when N = 0.
double wer(const AlignmentProfile& profile);

/// normalize() both strings and align them.
AlignmentProfile align_texts(std::string_view ref, std::string_view hyp);

}  // namespace emocorpus
