#include "emocorpus/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "emocorpus/align.hpp"
#include "emocorpus/errors.hpp"
#include "emocorpus/io.hpp"
#include "emocorpus/rng.hpp"
#include "httplib.h"
#include "json.hpp"

namespace emocorpus {
namespace {

using nlohmann::json;

enum class Task { transcript, emotion, mos };

struct Outcome {
    std::optional<json> value;
    std::string reason;
    bool transport_error = false;
};

constexpr std::array<std::string_view, 3> kKindNames = {"http", "file", "mock"};

// Fillers the mock ASR substitutes or inserts.
constexpr std::array<std::string_view, 8> kMockWords = {"uh", "the", "and", "a", "of", "to", "in", "um"};

struct Endpoint {
    std::string host_port;  // scheme://host:port
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
        throw ValidationError("endpoint must be an http:// URL: '" + url + "'");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::unordered_map<std::string, json> load_score_file(const std::string& path) {
    const std::string text = read_text_file(path);
    std::unordered_map<std::string, json> table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(line_no, path + ": invalid JSON: " + e.what());
        }
        if (!obj.is_object() || !obj.contains("utt_id") || !obj["utt_id"].is_string()) {
            throw ParseError(line_no, path + ": entry needs a string utt_id");
        }
        const auto id = obj["utt_id"].get<std::string>();
        if (!table.emplace(id, std::move(obj)).second) {
            throw IntegrityError(line_no, path + ": duplicate utt_id '" + id + "'");
        }
    }
    return table;
}

std::optional<double> number_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) return std::nullopt;
    return it->get<double>();
}

// Attaches an oracle value to the record; returns a failure reason instead
// when the value is unusable.
std::optional<std::string> apply_value(Task task, const json& value, const OracleConfig& config,
                                       UtteranceRecord& r, std::size_t& clamped) {
    if (!value.is_object()) return "reply is not a JSON object";
    if (auto it = value.find("utt_id"); it != value.end() && it->is_string() && it->get<std::string>() != r.utt_id) {
        return "reply names a different utt_id";
    }
    switch (task) {
        case Task::transcript: {
            auto it = value.find("text");
            if (it == value.end()) it = value.find("text_hyp");
            if (it == value.end() || !it->is_string()) return "no text in reply";
            r.text_hyp = it->get<std::string>();
            return std::nullopt;
        }
        case Task::emotion: {
            const auto act = number_field(value, "act");
            const auto val = number_field(value, "val");
            const auto dom = number_field(value, "dom");
            if (!act || !val || !dom) return "act/val/dom missing";
            EmotionScore s{*act, *val, *dom, config.scale_min, config.scale_max, 0.0};
            if (auto v = number_field(value, "scale_min")) s.scale_min = *v;
            if (auto v = number_field(value, "scale_max")) s.scale_max = *v;
            if (!(s.scale_min < s.scale_max)) return "invalid scale";
            if (!std::isfinite(s.act) || !std::isfinite(s.val) || !std::isfinite(s.dom)) return "non-finite score";
            s.neutral = (s.scale_min + s.scale_max) / 2.0;
            clamped += s.clamp_to_scale();
            r.emotion_score = s;
            return std::nullopt;
        }
        case Task::mos: {
            const auto mos = number_field(value, "mos");
            if (!mos || !std::isfinite(*mos)) return "mos missing";
            const double c = std::clamp(*mos, kMosMin, kMosMax);
            if (c != *mos) ++clamped;
            r.mos = c;
            return std::nullopt;
        }
    }
    return "unknown task";
}

json mock_value(Task task, const UtteranceRecord& r, const OracleConfig& config) {
    const std::uint64_t seed = derive_seed(config.mock_seed, r.utt_id);
    switch (task) {
        case Task::transcript:
            return {{"text", mock_hypothesis(r.text_ref, seed, config.mock_sub_rate, config.mock_del_rate,
                                             config.mock_ins_rate)}};
        case Task::emotion: {
            Rng rng(seed);
            const double act = config.mock_mean + config.mock_std * standard_normal(rng);
            const double val = config.mock_mean + config.mock_std * standard_normal(rng);
            const double dom = config.mock_mean + config.mock_std * standard_normal(rng);
            return {{"act", act}, {"val", val}, {"dom", dom}};
        }
        case Task::mos:
            return {{"mos", config.mock_mos}};
    }
    return json::object();
}

Outcome http_request(Task task, const UtteranceRecord& r, const OracleConfig& config, const Endpoint& ep) {
    if (!r.audio_path) return {std::nullopt, "missing audio_path", false};
    json body = {{"utt_id", r.utt_id}, {"audio_path", *r.audio_path}};
    if (task == Task::transcript) body["prompt"] = kAsrPrompt;
    const std::string payload = body.dump();

    httplib::Client client(ep.host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    if (config.bearer_token) client.set_bearer_token_auth(*config.bearer_token);

    Outcome last;
    for (std::size_t attempt = 0; attempt <= config.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config.retry_backoff * (1u << std::min<std::size_t>(attempt - 1, 6)));
        auto res = client.Post(ep.path, payload, "application/json");
        if (!res) {
            last = {std::nullopt, "transport error: " + httplib::to_string(res.error()), true};
            continue;
        }
        if (res->status == 429 || res->status >= 500) {
            last = {std::nullopt, "HTTP " + std::to_string(res->status), false};
            continue;
        }
        if (res->status != 200) return {std::nullopt, "HTTP " + std::to_string(res->status), false};
        try {
            return {json::parse(res->body), "", false};
        } catch (const json::parse_error&) {
            return {std::nullopt, "reply is not JSON", false};
        }
    }
    return last;
}

OracleRun run_oracle(Task task, std::span<const UtteranceRecord> records, const OracleConfig& config) {
    config.validate();
    OracleRun run;
    run.records.assign(records.begin(), records.end());
    std::vector<std::optional<std::string>> errors(records.size());
    std::vector<char> transport(records.size(), 0);

    switch (config.kind) {
        case OracleKind::mock:
            for (std::size_t i = 0; i < records.size(); ++i) {
                errors[i] = apply_value(task, mock_value(task, records[i], config), config, run.records[i],
                                        run.clamped_values);
            }
            break;
        case OracleKind::file: {
            const auto table = load_score_file(*config.score_file);
            for (std::size_t i = 0; i < records.size(); ++i) {
                auto it = table.find(records[i].utt_id);
                if (it == table.end()) {
                    errors[i] = "missing from score file";
                    continue;
                }
                errors[i] = apply_value(task, it->second, config, run.records[i], run.clamped_values);
            }
            break;
        }
        case OracleKind::http: {
            const Endpoint ep = split_endpoint(*config.endpoint);
            std::mutex mu;
            parallel_for(records.size(), config.max_in_flight, [&](std::size_t i) {
                Outcome out = http_request(task, records[i], config, ep);
                std::size_t clamped = 0;
                UtteranceRecord updated = records[i];
                std::optional<std::string> err;
                if (out.value) {
                    err = apply_value(task, *out.value, config, updated, clamped);
                } else {
                    err = out.reason;
                    transport[i] = out.transport_error ? 1 : 0;
                }
                std::lock_guard lock(mu);
                run.clamped_values += clamped;
                errors[i] = std::move(err);
                if (!errors[i]) run.records[i] = std::move(updated);
            });
            break;
        }
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (errors[i]) {
            run.failures.push_back({records[i].utt_id, *errors[i]});
        } else {
            ++run.succeeded;
        }
    }
    run.unreachable = config.kind == OracleKind::http && !records.empty() &&
                      std::all_of(transport.begin(), transport.end(), [](char t) { return t != 0; });
    return run;
}

}  // namespace

std::string_view to_string(OracleKind k) { return kKindNames.at(static_cast<std::size_t>(k)); }

std::optional<OracleKind> parse_oracle_kind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<OracleKind>(i);
    }
    return std::nullopt;
}

void OracleConfig::validate() const {
    if ((kind == OracleKind::http) != endpoint.has_value()) {
        throw ValidationError("an endpoint is required for, and only for, the http oracle");
    }
    if ((kind == OracleKind::file) != score_file.has_value()) {
        throw ValidationError("a score file is required for, and only for, the file oracle");
    }
    if (kind == OracleKind::http) split_endpoint(*endpoint);
    if (max_in_flight == 0) throw ValidationError("in-flight cap must be at least 1");
    if (!(scale_min < scale_max)) throw ValidationError("scale_min must be below scale_max");
    for (double rate : {mock_sub_rate, mock_del_rate, mock_ins_rate}) {
        if (!(rate >= 0.0 && rate <= 1.0)) throw ValidationError("mock rates must lie in [0, 1]");
    }
    if (mock_sub_rate + mock_del_rate > 1.0) throw ValidationError("mock substitution + deletion rate exceeds 1");
    if (!(mock_std >= 0.0)) throw ValidationError("mock standard deviation must be non-negative");
}

void apply_env_overrides(OracleConfig& config) {
    if (const char* v = std::getenv("EMOCORPUS_ORACLE_ENDPOINT"); v && *v) config.endpoint = v;
    if (const char* v = std::getenv("EMOCORPUS_ORACLE_TIMEOUT_MS"); v && *v) {
        try {
            config.timeout = std::chrono::milliseconds(std::stoll(v));
        } catch (const std::exception&) {
            throw ValidationError(std::string("EMOCORPUS_ORACLE_TIMEOUT_MS is not an integer: ") + v);
        }
    }
    if (const char* v = std::getenv("EMOCORPUS_ORACLE_TOKEN"); v && *v) config.bearer_token = v;
}

OracleRun transcribe(std::span<const UtteranceRecord> records, const OracleConfig& config) {
    return run_oracle(Task::transcript, records, config);
}

OracleRun score_emotion(std::span<const UtteranceRecord> records, const OracleConfig& config) {
    return run_oracle(Task::emotion, records, config);
}

OracleRun score_mos(std::span<const UtteranceRecord> records, const OracleConfig& config) {
    return run_oracle(Task::mos, records, config);
}

std::string mock_hypothesis(std::string_view reference, std::uint64_t seed, double sub_rate, double del_rate,
                            double ins_rate) {
    Rng rng(seed);
    std::istringstream words{std::string(reference)};
    std::string word;
    std::string out;
    auto emit = [&](std::string_view w) {
        if (!out.empty()) out += ' ';
        out += w;
    };
    while (words >> word) {
        const double u = uniform_unit(rng);
        if (u < sub_rate) {
            // Pick a filler that differs from the word after normalization.
            const TokenSequence original = normalize(word);
            std::size_t k = uniform_index(rng, kMockWords.size());
            while (original.size() == 1 && original[0] == kMockWords[k]) k = (k + 1) % kMockWords.size();
            emit(kMockWords[k]);
        } else if (u >= sub_rate + del_rate) {
            emit(word);
        }
        if (ins_rate > 0.0 && uniform_unit(rng) < ins_rate) emit(kMockWords[uniform_index(rng, kMockWords.size())]);
    }
    return out;
}

std::string failures_csv(std::span<const OracleFailure> failures) {
    CsvWriter csv({"utt_id", "reason"});
    for (const auto& f : failures) csv.row({f.utt_id, f.reason});
    return csv.str();
}

}  // namespace emocorpus
