#pragma once

// WER over 2D emotion planes: utterances are binned on two emotion
// dimensions and a pooled WER is computed per cell.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emocorpus/types.hpp"

namespace emocorpus {

enum class Plane : std::uint8_t { act_val, val_dom, act_dom };
enum class BinScheme : std::uint8_t { rounded_1_to_7, coarse_3x3 };

inline constexpr std::array<Plane, 3> kAllPlanes = {Plane::act_val, Plane::val_dom, Plane::act_dom};

std::string_view to_string(Plane p);
std::string_view to_string(BinScheme s);
std::optional<Plane> parse_plane(std::string_view text);
std::optional<BinScheme> parse_bin_scheme(std::string_view text);

/// Row and column dimensions of a plane.
std::pair<Dimension, Dimension> plane_axes(Plane p);

/// Ordered labels of a scheme: "1".."7" or "low","medium","high".
std::vector<std::string> bin_labels(BinScheme s);

/// rounded_1_to_7: nearest integer with .5 rounded up, clamped to [1, 7].
/// coarse_3x3: low (<= 2.5), medium (<= 3.5), high (> 3.5).
std::string bin_score(double value, BinScheme scheme);
std::size_t bin_index(double value, BinScheme scheme);

struct GridCell {
    std::size_t n_utts = 0;
    std::size_t errors = 0;
    std::size_t ref_words = 0;
    std::optional<double> wer;  // absent for empty (or suppressed) cells
};

struct WerGrid {
    Plane plane = Plane::act_val;
    BinScheme scheme = BinScheme::rounded_1_to_7;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<GridCell> cells;  // row-major

    const GridCell& at(std::size_t row, std::size_t col) const { return cells[row * col_labels.size() + col]; }
    GridCell& at(std::size_t row, std::size_t col) { return cells[row * col_labels.size() + col]; }
    std::size_t total_utts() const;
};

/// Bins every record with both an alignment (n_ref >= 1) and an emotion
/// score. Cells holding fewer than `min_count` utterances keep their count
/// but carry no WER. Throws EmptyCorpusError when nothing is eligible.
WerGrid wer_grid(std::span<const UtteranceRecord> records, Plane plane, BinScheme scheme,
                 std::size_t min_count = 0);

struct DiffCell {
    std::optional<double> delta;  // treated - baseline; negative is an improvement
    bool comparable = false;
    std::size_t n_baseline = 0;
    std::size_t n_treated = 0;
    std::optional<double> wer_treated;
};

struct GridDiff {
    Plane plane = Plane::act_val;
    BinScheme scheme = BinScheme::rounded_1_to_7;
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<DiffCell> cells;  // row-major
};

/// Throws ShapeError unless both grids share plane, scheme and labels.
GridDiff grid_diff(const WerGrid& baseline, const WerGrid& treated);

/// CSV `plane,scheme,row_label,col_label,n,wer`; empty cells have an empty
/// wer field.
std::string grid_csv(std::span<const WerGrid> grids);

/// Inverse of grid_csv (counts and WERs only).
std::vector<WerGrid> grids_from_csv(const std::string& text);

/// CSV `plane,scheme,row_label,col_label,n,wer,delta,comparable,sign` where
/// n and wer describe the treated grid and sign is improved, degraded,
/// unchanged or empty.
std::string diff_csv(std::span<const GridDiff> diffs);

}  // namespace emocorpus
