#include "emocorpus/plane.hpp"

#include <algorithm>
#include <cmath>

#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"

namespace emocorpus {
namespace {

constexpr std::array<std::string_view, 3> kPlaneNames = {"act_val", "val_dom", "act_dom"};
constexpr std::array<std::string_view, 2> kSchemeNames = {"rounded_1_to_7", "coarse_3x3"};

std::optional<double> parse_optional_double(const std::string& field) {
    if (field.empty()) return std::nullopt;
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
}

}  // namespace

std::string_view to_string(Plane p) { return kPlaneNames.at(static_cast<std::size_t>(p)); }
std::string_view to_string(BinScheme s) { return kSchemeNames.at(static_cast<std::size_t>(s)); }

std::optional<Plane> parse_plane(std::string_view text) {
    for (std::size_t i = 0; i < kPlaneNames.size(); ++i) {
        if (kPlaneNames[i] == text) return static_cast<Plane>(i);
    }
    return std::nullopt;
}

std::optional<BinScheme> parse_bin_scheme(std::string_view text) {
    for (std::size_t i = 0; i < kSchemeNames.size(); ++i) {
        if (kSchemeNames[i] == text) return static_cast<BinScheme>(i);
    }
    return std::nullopt;
}

std::pair<Dimension, Dimension> plane_axes(Plane p) {
    switch (p) {
        case Plane::act_val: return {Dimension::act, Dimension::val};
        case Plane::val_dom: return {Dimension::val, Dimension::dom};
        case Plane::act_dom: return {Dimension::act, Dimension::dom};
    }
    return {Dimension::act, Dimension::val};
}

std::vector<std::string> bin_labels(BinScheme s) {
    if (s == BinScheme::coarse_3x3) return {"low", "medium", "high"};
    return {"1", "2", "3", "4", "5", "6", "7"};
}

std::size_t bin_index(double value, BinScheme scheme) {
    if (scheme == BinScheme::coarse_3x3) {
        const double v = std::clamp(value, 1.0, 5.0);
        if (v <= 2.5) return 0;
        if (v <= 3.5) return 1;
        return 2;
    }
    const double rounded = std::floor(std::clamp(value, 1.0, 7.0) + 0.5);
    return static_cast<std::size_t>(std::clamp(rounded, 1.0, 7.0)) - 1;
}

std::string bin_score(double value, BinScheme scheme) { return bin_labels(scheme)[bin_index(value, scheme)]; }

std::size_t WerGrid::total_utts() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.n_utts;
    return n;
}

WerGrid wer_grid(std::span<const UtteranceRecord> records, Plane plane, BinScheme scheme, std::size_t min_count) {
    WerGrid g;
    g.plane = plane;
    g.scheme = scheme;
    g.row_labels = bin_labels(scheme);
    g.col_labels = bin_labels(scheme);
    g.cells.resize(g.row_labels.size() * g.col_labels.size());

    const auto [row_dim, col_dim] = plane_axes(plane);
    std::size_t eligible = 0;
    for (const auto& r : records) {
        if (!r.align || r.align->n_ref() == 0 || !r.emotion_score) continue;
        GridCell& c = g.at(bin_index(r.emotion_score->get(row_dim), scheme),
                           bin_index(r.emotion_score->get(col_dim), scheme));
        ++c.n_utts;
        c.errors += r.align->errors();
        c.ref_words += r.align->n_ref();
        ++eligible;
    }
    if (eligible == 0) throw EmptyCorpusError("no records with both an alignment and an emotion score");
    for (auto& c : g.cells) {
        if (c.n_utts > 0 && c.n_utts >= min_count) {
            c.wer = static_cast<double>(c.errors) / static_cast<double>(c.ref_words);
        }
    }
    return g;
}

GridDiff grid_diff(const WerGrid& baseline, const WerGrid& treated) {
    if (baseline.plane != treated.plane || baseline.scheme != treated.scheme ||
        baseline.row_labels != treated.row_labels || baseline.col_labels != treated.col_labels ||
        baseline.cells.size() != treated.cells.size()) {
        throw ShapeError("grids differ in plane, scheme or labels");
    }
    GridDiff d;
    d.plane = baseline.plane;
    d.scheme = baseline.scheme;
    d.row_labels = baseline.row_labels;
    d.col_labels = baseline.col_labels;
    d.cells.resize(baseline.cells.size());
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        const GridCell& b = baseline.cells[i];
        const GridCell& t = treated.cells[i];
        DiffCell& c = d.cells[i];
        c.n_baseline = b.n_utts;
        c.n_treated = t.n_utts;
        c.wer_treated = t.wer;
        c.comparable = b.wer.has_value() && t.wer.has_value();
        if (c.comparable) c.delta = *t.wer - *b.wer;
    }
    return d;
}

std::string grid_csv(std::span<const WerGrid> grids) {
    CsvWriter csv({"plane", "scheme", "row_label", "col_label", "n", "wer"});
    for (const auto& g : grids) {
        for (std::size_t r = 0; r < g.row_labels.size(); ++r) {
            for (std::size_t c = 0; c < g.col_labels.size(); ++c) {
                const GridCell& cell = g.at(r, c);
                csv.row({std::string(to_string(g.plane)), std::string(to_string(g.scheme)), g.row_labels[r],
                         g.col_labels[c], std::to_string(cell.n_utts),
                         cell.wer ? format_number(*cell.wer) : std::string()});
            }
        }
    }
    return csv.str();
}

std::vector<WerGrid> grids_from_csv(const std::string& text) {
    const auto rows = parse_csv(text);
    if (rows.empty() || rows[0] != std::vector<std::string>{"plane", "scheme", "row_label", "col_label", "n", "wer"}) {
        throw ValidationError("grid CSV header must be plane,scheme,row_label,col_label,n,wer");
    }
    std::vector<WerGrid> grids;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i];
        if (f.size() != 6) throw ValidationError("grid CSV row " + std::to_string(i + 1) + " has wrong width");
        const auto plane = parse_plane(f[0]);
        const auto scheme = parse_bin_scheme(f[1]);
        if (!plane || !scheme) throw ValidationError("grid CSV row " + std::to_string(i + 1) + ": bad plane/scheme");
        auto it = std::find_if(grids.begin(), grids.end(),
                               [&](const WerGrid& g) { return g.plane == *plane && g.scheme == *scheme; });
        if (it == grids.end()) {
            WerGrid g;
            g.plane = *plane;
            g.scheme = *scheme;
            g.row_labels = bin_labels(*scheme);
            g.col_labels = bin_labels(*scheme);
            g.cells.resize(g.row_labels.size() * g.col_labels.size());
            grids.push_back(std::move(g));
            it = std::prev(grids.end());
        }
        const auto r = std::find(it->row_labels.begin(), it->row_labels.end(), f[2]);
        const auto c = std::find(it->col_labels.begin(), it->col_labels.end(), f[3]);
        if (r == it->row_labels.end() || c == it->col_labels.end()) {
            throw ValidationError("grid CSV row " + std::to_string(i + 1) + ": unknown label");
        }
        GridCell& cell = it->at(static_cast<std::size_t>(r - it->row_labels.begin()),
                                static_cast<std::size_t>(c - it->col_labels.begin()));
        try {
            cell.n_utts = std::stoul(f[4]);
            cell.wer = parse_optional_double(f[5]);
        } catch (const std::exception&) {
            throw ValidationError("grid CSV row " + std::to_string(i + 1) + ": bad number");
        }
    }
    return grids;
}

std::string diff_csv(std::span<const GridDiff> diffs) {
    CsvWriter csv({"plane", "scheme", "row_label", "col_label", "n", "wer", "delta", "comparable", "sign"});
    for (const auto& d : diffs) {
        const std::size_t width = d.col_labels.size();
        for (std::size_t r = 0; r < d.row_labels.size(); ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                const DiffCell& cell = d.cells[r * width + c];
                std::string sign;
                if (cell.delta) sign = *cell.delta < 0 ? "improved" : (*cell.delta > 0 ? "degraded" : "unchanged");
                csv.row({std::string(to_string(d.plane)), std::string(to_string(d.scheme)), d.row_labels[r],
                         d.col_labels[c], std::to_string(cell.n_treated),
                         cell.wer_treated ? format_number(*cell.wer_treated) : std::string(),
                         cell.delta ? format_number(*cell.delta) : std::string(), cell.comparable ? "1" : "0",
                         sign});
            }
        }
    }
    return csv.str();
}

}  // namespace emocorpus
