#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "emocorpus/emotion_stats.hpp"
#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"

using namespace emocorpus;

namespace {

std::vector<UtteranceRecord> scored(const std::vector<double>& act) {
    std::vector<UtteranceRecord> out;
    for (std::size_t i = 0; i < act.size(); ++i) {
        UtteranceRecord r;
        r.utt_id = "u" + std::to_string(i);
        r.text_ref = "x";
        r.emotion_score = EmotionScore::msp(act[i], 4.0, 4.0);
        out.push_back(r);
    }
    return out;
}

// Quantile oracle: position (n - 1) p between order statistics.
double quantile_oracle(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    const double pos = (static_cast<double>(v.size()) - 1.0) * p;
    const double lo = std::floor(pos);
    const double hi = std::ceil(pos);
    return v[std::size_t(lo)] + (pos - lo) * (v[std::size_t(hi)] - v[std::size_t(lo)]);
}

// Raw-moment route: E[xy] - E[x]E[y], independent of the centered sums
// used by the library.
double ccc_raw_moments(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double mx = sx / n, my = sy / n;
    const double vx = sxx / n - mx * mx, vy = syy / n - my * my, cov = sxy / n - mx * my;
    return 2 * cov / (vx + vy + (mx - my) * (mx - my));
}

}  // namespace

TEST_CASE("mean and population deviation per dimension") {
    auto s = emotion_corpus_stats(scored({4, 4, 4, 4}));
    CHECK(s.act.mean == 4.0);
    CHECK(s.act.stddev == 0.0);
    s = emotion_corpus_stats(scored({3, 5}));
    CHECK(s.act.mean == 4.0);
    CHECK(s.act.stddev == 1.0);
    CHECK(s.val.stddev == 0.0);
    CHECK(s.n == 2);
    CHECK(s.neutral == 4.0);
}

TEST_CASE("interpolated quartiles") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    REQUIRE(quantile_oracle(v, 0.25) == 2.0);
    const auto s = emotion_corpus_stats(scored(v));
    CHECK(s.act.box.q1 == 2.0);
    CHECK(s.act.box.median == 3.0);
    CHECK(s.act.box.q3 == 4.0);
    CHECK(s.act.box.whisker_lo == 1.0);
    CHECK(s.act.box.whisker_hi == 5.0);
    CHECK(s.act.box.n_outliers == 0);
}

TEST_CASE("box statistics properties") {
    std::mt19937 rng(5);
    std::lognormal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + rng() % 50);
        for (auto& x : v) x = dist(rng);
        const BoxStats b = box_stats(v);
        CHECK(b.q1 == doctest::Approx(quantile_oracle(v, 0.25)));
        CHECK(b.median == doctest::Approx(quantile_oracle(v, 0.5)));
        CHECK(b.q3 == doctest::Approx(quantile_oracle(v, 0.75)));
        CHECK(b.q1 <= b.median);
        CHECK(b.median <= b.q3);
        CHECK(b.whisker_lo >= b.q1 - 1.5 * (b.q3 - b.q1));
        CHECK(b.whisker_hi <= b.q3 + 1.5 * (b.q3 - b.q1));
        std::size_t inside = 0;
        for (double x : v) {
            CHECK(x >= b.min);
            CHECK(x <= b.max);
            if (x >= b.whisker_lo && x <= b.whisker_hi) ++inside;
        }
        CHECK(b.n_outliers == v.size() - inside);
    }
    CHECK_THROWS_AS(box_stats(std::vector<double>{}), InsufficientDataError);
}

TEST_CASE("stats errors") {
    CHECK_THROWS_AS(emotion_corpus_stats(scored({4})), InsufficientDataError);
    auto records = scored({3, 4, 5});
    records[1].emotion_score = EmotionScore::iemocap(3, 3, 3);
    CHECK_THROWS_AS(emotion_corpus_stats(records), ScaleMismatchError);
}

TEST_CASE("salience deviation") {
    const auto stats = emotion_corpus_stats(scored({3, 5}));  // mu = (4, 4, 4)
    CHECK(salience_deviation(EmotionScore::msp(4, 4, 4), stats) == std::array<double, 3>{0, 0, 0});
    CHECK(salience_deviation(EmotionScore::msp(5.5, 4, 4), stats) == std::array<double, 3>{1.5, 0, 0});
    CHECK(salience_deviation(EmotionScore::msp(2, 6, 4), stats) == std::array<double, 3>{2, 2, 0});
}

TEST_CASE("salience deviation is translation covariant") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(1.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        auto stats = emotion_corpus_stats(scored({u(rng), u(rng), u(rng)}));
        const EmotionScore s = EmotionScore::msp(u(rng), u(rng), u(rng));
        const double c = std::floor(u(rng) * 4) / 8;  // exact binary shift
        const auto before = salience_deviation(s, stats);
        EmotionScore shifted = s;
        shifted.act += c;
        shifted.val += c;
        shifted.dom += c;
        for (Dimension d : kAllDimensions) stats.get(d).mean += c;
        const auto after = salience_deviation(shifted, stats);
        for (int k = 0; k < 3; ++k) CHECK(after[k] == doctest::Approx(before[k]).epsilon(1e-12));
    }
}

TEST_CASE("ccc fixtures") {
    CHECK(ccc(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}) == 1.0);
    CHECK(ccc(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}) == 0.0);
    const std::vector<double> x{1, 2, 3, 4}, y{2, 2, 4, 4};
    // Centered moments by hand: var_x = 1.25, var_y = 1, cov = 1, bias = -0.5.
    const double expected = 2.0 * 1.0 / (1.25 + 1.0 + 0.25);
    REQUIRE(expected == 0.8);
    REQUIRE(std::fabs(ccc_raw_moments(x, y) - expected) < 1e-12);
    CHECK(std::fabs(ccc(x, y) - expected) < 1e-12);
}

TEST_CASE("ccc errors") {
    CHECK_THROWS_AS(ccc(std::vector<double>{1, 2}, std::vector<double>{1}), ShapeError);
    CHECK_THROWS_AS(ccc(std::vector<double>{1}, std::vector<double>{1}), InsufficientDataError);
    CHECK_THROWS_AS(ccc(std::vector<double>{3, 3}, std::vector<double>{3, 3}), DegenerateError);
    CHECK(ccc(std::vector<double>{3, 3}, std::vector<double>{4, 4}) == 0.0);
    CHECK_THROWS_AS(pearson(std::vector<double>{3, 3}, std::vector<double>{1, 2}), DegenerateError);
}

TEST_CASE("ccc properties") {
    std::mt19937 rng(13);
    std::normal_distribution<double> z(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> x(2 + rng() % 30), y(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            x[k] = z(rng);
            y[k] = 0.5 * x[k] + z(rng) + 0.3;
        }
        const double c = ccc(x, y);
        CHECK(c == doctest::Approx(ccc(y, x)).epsilon(1e-12));
        CHECK(ccc(x, x) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::fabs(c) <= std::fabs(pearson(x, y)) + 1e-12);
        CHECK(c == doctest::Approx(ccc_raw_moments(x, y)).epsilon(1e-9));
    }
}

TEST_CASE("box CSV and stats JSON") {
    const auto stats = emotion_corpus_stats(scored({1, 2, 3, 4, 5}));
    const auto rows = parse_csv(box_stats_csv(stats));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"dimension", "q1", "median", "q3", "whisker_lo", "whisker_hi", "n"});
    CHECK(rows[1] == std::vector<std::string>{"act", "2", "3", "4", "1", "5", "5"});
    const auto back = emotion_stats_from_json(emotion_stats_to_json(stats));
    for (Dimension d : kAllDimensions) {
        CHECK(back.get(d).mean == stats.get(d).mean);
        CHECK(back.get(d).stddev == stats.get(d).stddev);
    }
    CHECK(back.scale_max == 7.0);
    CHECK_THROWS_AS(emotion_stats_from_json("{}"), ValidationError);
}
