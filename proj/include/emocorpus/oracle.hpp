#pragma once

// Adapters that attach ASR hypotheses, emotion scores and MOS values to
// manifest records. Three backends:
//   http  POST {utt_id, audio_path[, prompt]} as JSON, expect a JSON reply
//         {text} / {act, val, dom} / {mos};
//   file  JSONL score file keyed by utt_id;
//   mock  deterministic seeded values for tests and dry runs.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emocorpus/types.hpp"

namespace emocorpus {

/// Forwarded verbatim to HTTP transcription services.
inline constexpr std::string_view kAsrPrompt = "Detect the language and recognize the speech:";

enum class OracleKind : std::uint8_t { http, file, mock };

std::string_view to_string(OracleKind k);
std::optional<OracleKind> parse_oracle_kind(std::string_view text);

struct OracleConfig {
    OracleKind kind = OracleKind::mock;
    std::optional<std::string> endpoint;    // http://host[:port]/path
    std::optional<std::string> score_file;  // JSONL
    std::chrono::milliseconds timeout{30000};
    std::size_t retries = 2;
    std::chrono::milliseconds retry_backoff{100};
    std::size_t max_in_flight = 4;
    std::optional<std::string> bearer_token;
    std::uint64_t mock_seed = 0;

    // Mock transcription: per-word corruption probabilities.
    double mock_sub_rate = 0.1;
    double mock_del_rate = 0.0;
    double mock_ins_rate = 0.0;

    // Mock emotion: independent normal draws per dimension, then clamped.
    double mock_mean = 4.0;
    double mock_std = 1.0;

    double mock_mos = 4.0;

    // Scale attached to scores that do not declare one (file/http/mock).
    double scale_min = 1.0;
    double scale_max = 7.0;

    /// Throws ValidationError unless endpoint is set exactly for http and
    /// score_file exactly for file.
    void validate() const;
};

/// EMOCORPUS_ORACLE_ENDPOINT, EMOCORPUS_ORACLE_TIMEOUT_MS and
/// EMOCORPUS_ORACLE_TOKEN override the corresponding fields when set.
void apply_env_overrides(OracleConfig& config);

struct OracleFailure {
    std::string utt_id;
    std::string reason;
};

struct OracleRun {
    std::vector<UtteranceRecord> records;  // same order as the input
    std::vector<OracleFailure> failures;
    std::size_t succeeded = 0;
    std::size_t clamped_values = 0;
    // Every HTTP request failed at the transport level.
    bool unreachable = false;
};

OracleRun transcribe(std::span<const UtteranceRecord> records, const OracleConfig& config);
OracleRun score_emotion(std::span<const UtteranceRecord> records, const OracleConfig& config);
OracleRun score_mos(std::span<const UtteranceRecord> records, const OracleConfig& config);

/// The mock ASR: the reference with seeded per-word substitutions,
/// deletions and insertions. Depends only on (text, seed, rates).
std::string mock_hypothesis(std::string_view reference, std::uint64_t seed, double sub_rate,
                            double del_rate, double ins_rate);

/// CSV `utt_id,reason`.
std::string failures_csv(std::span<const OracleFailure> failures);

}  // namespace emocorpus
