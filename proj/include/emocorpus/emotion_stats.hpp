#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "emocorpus/types.hpp"

namespace emocorpus {

/// Tukey box-plot summary. Quartiles use linear interpolation between order
/// statistics (h = (n - 1) p). Whiskers sit on the most extreme data points
/// still within 1.5 IQR of the box.
struct BoxStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::size_t n = 0;
    std::size_t n_outliers = 0;
};

/// Linear-interpolation quantile of an ascending, non-empty sequence.
double quantile_sorted(std::span<const double> sorted, double p);

/// Throws InsufficientDataError for an empty input.
BoxStats box_stats(std::span<const double> values);

struct DimensionStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
    BoxStats box;
};

/// Per-dimension mean, deviation and box statistics over one dataset.
struct CorpusEmotionStats {
    DimensionStats act;
    DimensionStats val;
    DimensionStats dom;
    double scale_min = 1.0;
    double scale_max = 7.0;
    double neutral = 4.0;
    std::size_t n = 0;

    const DimensionStats& get(Dimension d) const;
    DimensionStats& get(Dimension d);
};

/// Statistics over every record carrying an emotion score. Throws
/// ScaleMismatchError for mixed scales and InsufficientDataError for fewer
/// than two scored records.
CorpusEmotionStats emotion_corpus_stats(std::span<const UtteranceRecord> records);

/// (|act - mu_act|, |val - mu_val|, |dom - mu_dom|)
std::array<double, 3> salience_deviation(const EmotionScore& score, const CorpusEmotionStats& stats);

/// Concordance correlation coefficient with population moments.
/// Throws ShapeError on length mismatch, InsufficientDataError for n < 2 and
/// DegenerateError when both inputs are constant and equal.
double ccc(std::span<const double> predictions, std::span<const double> references);

/// Pearson correlation; throws DegenerateError when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// CSV `dimension,q1,median,q3,whisker_lo,whisker_hi,n`.
std::string box_stats_csv(const CorpusEmotionStats& stats);

/// JSON snapshot of the statistics, readable by emotion_stats_from_json.
std::string emotion_stats_to_json(const CorpusEmotionStats& stats);
CorpusEmotionStats emotion_stats_from_json(const std::string& text);

}  // namespace emocorpus
