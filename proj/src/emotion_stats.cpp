#include "emocorpus/emotion_stats.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"
#include "emocorpus/numeric.hpp"
#include "json.hpp"

namespace emocorpus {

double quantile_sorted(std::span<const double> sorted, double p) {
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values) {
    if (values.empty()) throw InsufficientDataError("box statistics need at least one value");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats b;
    b.n = sorted.size();
    b.min = sorted.front();
    b.max = sorted.back();
    b.q1 = quantile_sorted(sorted, 0.25);
    b.median = quantile_sorted(sorted, 0.5);
    b.q3 = quantile_sorted(sorted, 0.75);
    const double fence = 1.5 * (b.q3 - b.q1);
    const double lo_fence = b.q1 - fence;
    const double hi_fence = b.q3 + fence;
    b.whisker_lo = b.q1;
    b.whisker_hi = b.q3;
    for (double v : sorted) {
        if (v < lo_fence || v > hi_fence) {
            ++b.n_outliers;
            continue;
        }
        b.whisker_lo = std::min(b.whisker_lo, v);
        b.whisker_hi = std::max(b.whisker_hi, v);
    }
    return b;
}

const DimensionStats& CorpusEmotionStats::get(Dimension d) const {
    switch (d) {
        case Dimension::act: return act;
        case Dimension::val: return val;
        case Dimension::dom: return dom;
    }
    return act;
}

DimensionStats& CorpusEmotionStats::get(Dimension d) {
    return const_cast<DimensionStats&>(std::as_const(*this).get(d));
}

CorpusEmotionStats emotion_corpus_stats(std::span<const UtteranceRecord> records) {
    const EmotionScore* first = nullptr;
    std::array<std::vector<double>, 3> columns;
    for (const auto& r : records) {
        if (!r.emotion_score) continue;
        if (!first) {
            first = &*r.emotion_score;
        } else if (!first->same_scale(*r.emotion_score)) {
            throw ScaleMismatchError("record '" + r.utt_id + "' uses a different emotion scale");
        }
        for (Dimension d : kAllDimensions) {
            columns[static_cast<std::size_t>(d)].push_back(r.emotion_score->get(d));
        }
    }
    if (columns[0].size() < 2) {
        throw InsufficientDataError("emotion statistics need at least two scored records");
    }

    CorpusEmotionStats stats;
    stats.n = columns[0].size();
    stats.scale_min = first->scale_min;
    stats.scale_max = first->scale_max;
    stats.neutral = first->neutral;
    for (Dimension d : kAllDimensions) {
        const auto& col = columns[static_cast<std::size_t>(d)];
        DimensionStats& out = stats.get(d);
        out.mean = mean(col);
        out.stddev = std::sqrt(population_variance(col));
        out.box = box_stats(col);
    }
    return stats;
}

std::array<double, 3> salience_deviation(const EmotionScore& score, const CorpusEmotionStats& stats) {
    return {std::fabs(score.act - stats.act.mean), std::fabs(score.val - stats.val.mean),
            std::fabs(score.dom - stats.dom.mean)};
}

namespace {

struct Moments {
    double mean_x, mean_y, var_x, var_y, cov;
};

Moments moments(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ShapeError("sequences differ in length");
    if (x.size() < 2) throw InsufficientDataError("need at least two paired values");
    Moments m{};
    m.mean_x = mean(x);
    m.mean_y = mean(y);
    CompensatedSum vx, vy, cxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - m.mean_x;
        const double dy = y[i] - m.mean_y;
        vx.add(dx * dx);
        vy.add(dy * dy);
        cxy.add(dx * dy);
    }
    const double n = static_cast<double>(x.size());
    m.var_x = vx.value() / n;
    m.var_y = vy.value() / n;
    m.cov = cxy.value() / n;
    return m;
}

}  // namespace

double ccc(std::span<const double> predictions, std::span<const double> references) {
    const Moments m = moments(predictions, references);
    const double bias = m.mean_x - m.mean_y;
    const double denom = m.var_x + m.var_y + bias * bias;
    if (denom == 0.0) throw DegenerateError("CCC undefined for identical constant sequences");
    return 2.0 * m.cov / denom;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const Moments m = moments(x, y);
    if (m.var_x == 0.0 || m.var_y == 0.0) throw DegenerateError("Pearson undefined for a constant sequence");
    return m.cov / std::sqrt(m.var_x * m.var_y);
}

std::string box_stats_csv(const CorpusEmotionStats& stats) {
    CsvWriter csv({"dimension", "q1", "median", "q3", "whisker_lo", "whisker_hi", "n"});
    for (Dimension d : kAllDimensions) {
        const BoxStats& b = stats.get(d).box;
        csv.row({std::string(to_string(d)), format_number(b.q1), format_number(b.median),
                 format_number(b.q3), format_number(b.whisker_lo), format_number(b.whisker_hi),
                 std::to_string(b.n)});
    }
    return csv.str();
}

std::string emotion_stats_to_json(const CorpusEmotionStats& stats) {
    nlohmann::ordered_json j;
    j["n"] = stats.n;
    j["scale_min"] = stats.scale_min;
    j["scale_max"] = stats.scale_max;
    j["neutral"] = stats.neutral;
    for (Dimension d : kAllDimensions) {
        const DimensionStats& s = stats.get(d);
        nlohmann::ordered_json dim;
        dim["mean"] = s.mean;
        dim["std"] = s.stddev;
        dim["min"] = s.box.min;
        dim["q1"] = s.box.q1;
        dim["median"] = s.box.median;
        dim["q3"] = s.box.q3;
        dim["max"] = s.box.max;
        dim["whisker_lo"] = s.box.whisker_lo;
        dim["whisker_hi"] = s.box.whisker_hi;
        dim["n_outliers"] = s.box.n_outliers;
        j[std::string(to_string(d))] = dim;
    }
    return j.dump(2) + "\n";
}

CorpusEmotionStats emotion_stats_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        CorpusEmotionStats stats;
        stats.n = j.at("n").get<std::size_t>();
        stats.scale_min = j.at("scale_min").get<double>();
        stats.scale_max = j.at("scale_max").get<double>();
        stats.neutral = j.value("neutral", (stats.scale_min + stats.scale_max) / 2.0);
        for (Dimension d : kAllDimensions) {
            const auto& dim = j.at(std::string(to_string(d)));
            DimensionStats& s = stats.get(d);
            s.mean = dim.at("mean").get<double>();
            s.stddev = dim.at("std").get<double>();
            s.box.min = dim.value("min", s.mean);
            s.box.q1 = dim.value("q1", s.mean);
            s.box.median = dim.value("median", s.mean);
            s.box.q3 = dim.value("q3", s.mean);
            s.box.max = dim.value("max", s.mean);
            s.box.whisker_lo = dim.value("whisker_lo", s.box.q1);
            s.box.whisker_hi = dim.value("whisker_hi", s.box.q3);
            s.box.n_outliers = dim.value("n_outliers", std::size_t{0});
            s.box.n = stats.n;
            if (s.stddev < 0.0) throw ValidationError("negative standard deviation in stats file");
        }
        return stats;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed emotion stats: ") + e.what());
    }
}

}  // namespace emocorpus
