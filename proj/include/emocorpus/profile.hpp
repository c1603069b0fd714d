#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "emocorpus/types.hpp"

namespace emocorpus {

/// Records that an aggregation could not use.
struct SkipReport {
    std::size_t unaligned = 0;  // no AlignmentProfile
    std::size_t empty_ref = 0;  // AlignmentProfile with n_ref = 0
    std::size_t total() const { return unaligned + empty_ref; }
};

struct WerSummary {
    double wer = 0.0;
    std::size_t errors = 0;
    std::size_t ref_words = 0;
    std::size_t n_utts = 0;
    SkipReport skipped;
};

/// Pooled corpus WER: sum of errors over sum of reference words.
WerSummary corpus_wer_summary(std::span<const UtteranceRecord> records);
double corpus_wer(std::span<const UtteranceRecord> records);

/// Unweighted mean of per-utterance WERs; reported next to the pooled value.
double mean_utterance_wer(std::span<const UtteranceRecord> records);

// Per-sentence S/N, D/N, I/N averaged over utterances.
struct ErrorTypeDistribution {
    double mean_sub_rate = 0.0;
    double mean_del_rate = 0.0;
    double mean_ins_rate = 0.0;
    std::size_t n_utts = 0;
    SkipReport skipped;
};

/// Independent of record order: per-utterance rates are summed in sorted
/// order.
ErrorTypeDistribution error_type_distribution(std::span<const UtteranceRecord> records);

struct MosStats {
    double mean = 0.0;
    double std = 0.0;  // population
    std::size_t n = 0;
};

MosStats mos_stats(std::span<const UtteranceRecord> records);

/// CSV `metric,value,n`: overall rows, then the same metrics per source as
/// `metric:source`. Metrics whose prerequisites are absent are omitted.
std::string profile_report_csv(std::span<const UtteranceRecord> records);

}  // namespace emocorpus
