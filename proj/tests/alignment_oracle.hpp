#pragma once

// Brute-force alignment oracle for tests. Enumerates every monotone
// alignment path between two sequences, keeps the minimum unit cost, and
// among minimum-cost paths picks the one whose step sequence read from the
// end is smallest under match < sub < del < ins. Shares no code with the
// dynamic-programming aligner.

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace emocorpus::testing {

struct OracleResult {
    std::size_t cost = 0;
    std::size_t n_sub = 0, n_del = 0, n_ins = 0, n_match = 0;
};

class AlignmentOracle {
public:
    static constexpr std::size_t kMaxLen = 6;

    template <typename Seq>
    OracleResult solve(const Seq& ref, const Seq& hyp) {
        const std::size_t m = ref.size();
        const std::size_t n = hyp.size();
        std::uint64_t equal = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (ref[i] == hyp[j]) equal |= bit(i, j);
            }
        }
        const std::uint64_t key = equal | (std::uint64_t(m) << 40) | (std::uint64_t(n) << 44);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const OracleResult r = solve_mask(m, n, equal);
        cache_.emplace(key, r);
        return r;
    }

private:
    // Step kinds along a path: diagonal, down (ref only), right (hyp only).
    enum Step : std::uint8_t { kDiag, kDown, kRight };

    struct Path {
        std::uint64_t diag_mask = 0;
        std::uint32_t n_diag = 0;
        std::vector<Step> steps;  // forward order
    };

    static std::uint64_t bit(std::size_t i, std::size_t j) { return std::uint64_t{1} << (i * kMaxLen + j); }

    const std::vector<Path>& paths(std::size_t m, std::size_t n) {
        auto& slot = paths_[m][n];
        if (!slot.empty() || (m == 0 && n == 0 && built_empty_)) return slot;
        Path current;
        enumerate(0, 0, m, n, current, slot);
        if (m == 0 && n == 0) built_empty_ = true;
        return slot;
    }

    static void enumerate(std::size_t i, std::size_t j, std::size_t m, std::size_t n, Path& cur,
                          std::vector<Path>& out) {
        if (i == m && j == n) {
            out.push_back(cur);
            return;
        }
        if (i < m && j < n) {
            cur.steps.push_back(kDiag);
            cur.diag_mask |= bit(i, j);
            ++cur.n_diag;
            enumerate(i + 1, j + 1, m, n, cur, out);
            --cur.n_diag;
            cur.diag_mask &= ~bit(i, j);
            cur.steps.pop_back();
        }
        if (i < m) {
            cur.steps.push_back(kDown);
            enumerate(i + 1, j, m, n, cur, out);
            cur.steps.pop_back();
        }
        if (j < n) {
            cur.steps.push_back(kRight);
            enumerate(i, j + 1, m, n, cur, out);
            cur.steps.pop_back();
        }
    }

    // Labels: 0 match, 1 sub, 2 del, 3 ins; returned in reverse order.
    static std::vector<std::uint8_t> reversed_labels(const Path& p, std::uint64_t equal) {
        std::vector<std::uint8_t> labels;
        labels.reserve(p.steps.size());
        std::size_t i = 0, j = 0;
        for (Step s : p.steps) {
            if (s == kDiag) {
                labels.push_back((equal & bit(i, j)) ? 0 : 1);
                ++i;
                ++j;
            } else if (s == kDown) {
                labels.push_back(2);
                ++i;
            } else {
                labels.push_back(3);
                ++j;
            }
        }
        return {labels.rbegin(), labels.rend()};
    }

    OracleResult solve_mask(std::size_t m, std::size_t n, std::uint64_t equal) {
        const auto& all = paths(m, n);
        std::size_t best_cost = SIZE_MAX;
        std::vector<const Path*> best;
        for (const Path& p : all) {
            const std::size_t matches = static_cast<std::size_t>(std::popcount(p.diag_mask & equal));
            const std::size_t cost = m + n - p.n_diag - matches;
            if (cost < best_cost) {
                best_cost = cost;
                best.clear();
            }
            if (cost == best_cost) best.push_back(&p);
        }
        std::vector<std::uint8_t> chosen;
        bool first = true;
        for (const Path* p : best) {
            auto labels = reversed_labels(*p, equal);
            if (first || labels < chosen) chosen = std::move(labels);
            first = false;
        }
        OracleResult r;
        r.cost = best_cost;
        for (std::uint8_t l : chosen) {
            if (l == 0) ++r.n_match;
            if (l == 1) ++r.n_sub;
            if (l == 2) ++r.n_del;
            if (l == 3) ++r.n_ins;
        }
        return r;
    }

    std::array<std::array<std::vector<Path>, kMaxLen + 1>, kMaxLen + 1> paths_;
    bool built_empty_ = false;
    std::unordered_map<std::uint64_t, OracleResult> cache_;
};

}  // namespace emocorpus::testing
