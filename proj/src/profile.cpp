#include "emocorpus/profile.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"
#include "emocorpus/numeric.hpp"

namespace emocorpus {
namespace {

// Calls fn(profile) for every record usable in a WER aggregate.
template <typename Fn>
SkipReport for_each_aligned(std::span<const UtteranceRecord> records, Fn&& fn) {
    SkipReport skipped;
    for (const auto& r : records) {
        if (!r.align) {
            ++skipped.unaligned;
        } else if (r.align->n_ref() == 0) {
            ++skipped.empty_ref;
        } else {
            fn(*r.align);
        }
    }
    return skipped;
}

double sorted_sum(std::vector<double>& xs) {
    std::sort(xs.begin(), xs.end());
    return compensated_sum(xs);
}

}  // namespace

WerSummary corpus_wer_summary(std::span<const UtteranceRecord> records) {
    WerSummary s;
    s.skipped = for_each_aligned(records, [&](const AlignmentProfile& p) {
        s.errors += p.errors();
        s.ref_words += p.n_ref();
        ++s.n_utts;
    });
    if (s.n_utts == 0) throw EmptyCorpusError("no aligned records with a non-empty reference");
    s.wer = static_cast<double>(s.errors) / static_cast<double>(s.ref_words);
    return s;
}

double corpus_wer(std::span<const UtteranceRecord> records) { return corpus_wer_summary(records).wer; }

double mean_utterance_wer(std::span<const UtteranceRecord> records) {
    std::vector<double> wers;
    for_each_aligned(records, [&](const AlignmentProfile& p) {
        wers.push_back(static_cast<double>(p.errors()) / static_cast<double>(p.n_ref()));
    });
    if (wers.empty()) throw EmptyCorpusError("no aligned records with a non-empty reference");
    return sorted_sum(wers) / static_cast<double>(wers.size());
}

ErrorTypeDistribution error_type_distribution(std::span<const UtteranceRecord> records) {
    std::vector<double> sub, del, ins;
    ErrorTypeDistribution d;
    d.skipped = for_each_aligned(records, [&](const AlignmentProfile& p) {
        const double n = static_cast<double>(p.n_ref());
        sub.push_back(static_cast<double>(p.n_sub) / n);
        del.push_back(static_cast<double>(p.n_del) / n);
        ins.push_back(static_cast<double>(p.n_ins) / n);
    });
    if (sub.empty()) throw EmptyCorpusError("no aligned records with a non-empty reference");
    d.n_utts = sub.size();
    const double n = static_cast<double>(d.n_utts);
    d.mean_sub_rate = sorted_sum(sub) / n;
    d.mean_del_rate = sorted_sum(del) / n;
    d.mean_ins_rate = sorted_sum(ins) / n;
    return d;
}

MosStats mos_stats(std::span<const UtteranceRecord> records) {
    std::vector<double> values;
    for (const auto& r : records) {
        if (r.mos) values.push_back(*r.mos);
    }
    if (values.empty()) throw EmptyCorpusError("no MOS values");
    std::sort(values.begin(), values.end());
    return MosStats{mean(values), std::sqrt(population_variance(values)), values.size()};
}

std::string profile_report_csv(std::span<const UtteranceRecord> records) {
    CsvWriter csv({"metric", "value", "n"});
    auto emit = [&](std::span<const UtteranceRecord> subset, const std::string& suffix) {
        try {
            const WerSummary w = corpus_wer_summary(subset);
            csv.row({"corpus_wer" + suffix, format_number(w.wer), std::to_string(w.n_utts)});
            csv.row({"mean_utterance_wer" + suffix, format_number(mean_utterance_wer(subset)),
                     std::to_string(w.n_utts)});
            const ErrorTypeDistribution d = error_type_distribution(subset);
            csv.row({"mean_sub_rate" + suffix, format_number(d.mean_sub_rate), std::to_string(d.n_utts)});
            csv.row({"mean_del_rate" + suffix, format_number(d.mean_del_rate), std::to_string(d.n_utts)});
            csv.row({"mean_ins_rate" + suffix, format_number(d.mean_ins_rate), std::to_string(d.n_utts)});
            csv.row({"ref_words" + suffix, std::to_string(w.ref_words), std::to_string(w.n_utts)});
            csv.row({"errors" + suffix, std::to_string(w.errors), std::to_string(w.n_utts)});
            csv.row({"skipped_unaligned" + suffix, std::to_string(w.skipped.unaligned), "0"});
            csv.row({"skipped_empty_ref" + suffix, std::to_string(w.skipped.empty_ref), "0"});
        } catch (const EmptyCorpusError&) {
            const SkipReport skipped = for_each_aligned(subset, [](const AlignmentProfile&) {});
            csv.row({"skipped_unaligned" + suffix, std::to_string(skipped.unaligned), "0"});
            csv.row({"skipped_empty_ref" + suffix, std::to_string(skipped.empty_ref), "0"});
        }
        try {
            const MosStats m = mos_stats(subset);
            csv.row({"mos_mean" + suffix, format_number(m.mean), std::to_string(m.n)});
            csv.row({"mos_std" + suffix, format_number(m.std), std::to_string(m.n)});
        } catch (const EmptyCorpusError&) {
        }
    };

    emit(records, "");
    std::map<Source, std::vector<UtteranceRecord>> by_source;
    for (const auto& r : records) by_source[r.source].push_back(r);
    for (const auto& [source, subset] : by_source) emit(subset, ":" + std::string(to_string(source)));
    return csv.str();
}

}  // namespace emocorpus
