#pragma once

// JSON-lines corpus manifests: one UtteranceRecord per line.
//
// Required keys: utt_id, source, split, text_ref. Optional keys: pair_id,
// text_hyp, audio_path, emotion_label, act, val, dom, scale_min, scale_max,
// mos, n_sub, n_del, n_ins, n_match, ops. Any other key is carried through
// untouched in UtteranceRecord::extra.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "emocorpus/types.hpp"

namespace emocorpus {

struct Manifest {
    std::vector<UtteranceRecord> records;
    // Emotion dimensions or MOS values pulled back into range while reading.
    std::size_t clamped_values = 0;
};

/// Parses a manifest stream. Throws ParseError for malformed lines and
/// IntegrityError for a repeated utt_id; both name the 1-based line number.
Manifest read_manifest(std::istream& in);
Manifest read_manifest_file(const std::filesystem::path& path);

/// Checks the record invariants; throws ValidationError naming the record.
void validate_record(const UtteranceRecord& record);

/// Serializes with a fixed key order. Every record is validated (including
/// utt_id uniqueness) before any output is produced.
std::string write_manifest(std::span<const UtteranceRecord> records);

/// One record as a compact JSON object line (no trailing newline).
std::string record_to_line(const UtteranceRecord& record);

/// Parses a single line; `line_no` is only used for error messages.
UtteranceRecord record_from_line(const std::string& line, std::size_t line_no,
                                 std::size_t* clamped = nullptr);

}  // namespace emocorpus
