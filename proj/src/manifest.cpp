#include "emocorpus/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "emocorpus/errors.hpp"

namespace emocorpus {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 19> kKnownKeys = {
    "utt_id", "pair_id", "source",    "split",     "text_ref", "text_hyp", "audio_path",
    "emotion_label", "act", "val",    "dom",       "scale_min", "scale_max", "mos",
    "n_sub",  "n_del",   "n_ins",     "n_match",   "ops"};

bool is_known_key(std::string_view key) {
    return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end();
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(line, std::string("missing required key '") + key + "'");
    if (!it->is_string()) throw ParseError(line, std::string("key '") + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(line, std::string("key '") + key + "' must be a string");
    return it->get<std::string>();
}

std::optional<double> optional_number(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw ParseError(line, std::string("key '") + key + "' must be a number");
    return it->get<double>();
}

std::optional<std::size_t> optional_count(const json& obj, const char* key, std::size_t line) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_number_unsigned()) return it->get<std::size_t>();
    if (it->is_number_integer() && it->get<std::int64_t>() >= 0) {
        return static_cast<std::size_t>(it->get<std::int64_t>());
    }
    throw ParseError(line, std::string("key '") + key + "' must be a non-negative integer");
}

void check_finite(double v, const std::string& what, const std::string& utt_id) {
    if (!std::isfinite(v)) throw ValidationError("record '" + utt_id + "': " + what + " is not finite");
}

}  // namespace

UtteranceRecord record_from_line(const std::string& line, std::size_t line_no, std::size_t* clamped) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "record must be a JSON object");

    UtteranceRecord r;
    r.utt_id = required_string(obj, "utt_id", line_no);
    if (r.utt_id.empty()) throw ParseError(line_no, "utt_id must be non-empty");

    const std::string source = required_string(obj, "source", line_no);
    const auto parsed_source = parse_source(source);
    if (!parsed_source) throw ParseError(line_no, "unknown source '" + source + "'");
    r.source = *parsed_source;

    const std::string split = required_string(obj, "split", line_no);
    const auto parsed_split = parse_split(split);
    if (!parsed_split) throw ParseError(line_no, "unknown split '" + split + "'");
    r.split = *parsed_split;

    r.text_ref = required_string(obj, "text_ref", line_no);
    r.pair_id = optional_string(obj, "pair_id", line_no);
    r.text_hyp = optional_string(obj, "text_hyp", line_no);
    r.audio_path = optional_string(obj, "audio_path", line_no);

    if (auto label = optional_string(obj, "emotion_label", line_no)) {
        auto e = parse_emotion(*label);
        if (!e) throw ParseError(line_no, "unknown emotion_label '" + *label + "'");
        r.emotion_label = *e;
    }

    std::size_t moved = 0;
    const auto act = optional_number(obj, "act", line_no);
    const auto val = optional_number(obj, "val", line_no);
    const auto dom = optional_number(obj, "dom", line_no);
    const auto smin = optional_number(obj, "scale_min", line_no);
    const auto smax = optional_number(obj, "scale_max", line_no);
    const int n_dims = int(act.has_value()) + int(val.has_value()) + int(dom.has_value());
    if (n_dims != 0 && n_dims != 3) throw ParseError(line_no, "act, val and dom must appear together");
    if (n_dims == 0 && (smin || smax)) throw ParseError(line_no, "scale given without emotion scores");
    if (n_dims == 3) {
        EmotionScore s = EmotionScore::msp(*act, *val, *dom);
        if (smin) s.scale_min = *smin;
        if (smax) s.scale_max = *smax;
        if (!(s.scale_min < s.scale_max)) throw ParseError(line_no, "scale_min must be below scale_max");
        s.neutral = (s.scale_min + s.scale_max) / 2.0;
        moved += s.clamp_to_scale();
        r.emotion_score = s;
    }

    if (auto mos = optional_number(obj, "mos", line_no)) {
        const double c = std::clamp(*mos, kMosMin, kMosMax);
        if (c != *mos) ++moved;
        r.mos = c;
    }

    const auto n_sub = optional_count(obj, "n_sub", line_no);
    const auto n_del = optional_count(obj, "n_del", line_no);
    const auto n_ins = optional_count(obj, "n_ins", line_no);
    const auto n_match = optional_count(obj, "n_match", line_no);
    const int n_counts = int(n_sub.has_value()) + int(n_del.has_value()) + int(n_ins.has_value()) +
                         int(n_match.has_value());
    if (n_counts != 0 && n_counts != 4) {
        throw ParseError(line_no, "n_sub, n_del, n_ins and n_match must appear together");
    }
    auto ops = optional_string(obj, "ops", line_no);
    if (n_counts == 0 && ops) throw ParseError(line_no, "ops given without alignment counts");
    if (n_counts == 4) {
        AlignmentProfile p{*n_sub, *n_del, *n_ins, *n_match, {}};
        if (ops) {
            p.ops.reserve(ops->size());
            for (char c : *ops) {
                auto op = parse_op_code(c);
                if (!op) throw ParseError(line_no, std::string("invalid op code '") + c + "'");
                p.ops.push_back(*op);
            }
            if (!p.ops_consistent()) throw ParseError(line_no, "ops disagree with alignment counts");
        }
        r.align = std::move(p);
    }

    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!is_known_key(it.key())) r.extra.emplace(it.key(), it.value());
    }
    if (clamped) *clamped += moved;
    return r;
}

Manifest read_manifest(std::istream& in) {
    Manifest m;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
            continue;
        }
        UtteranceRecord r = record_from_line(line, line_no, &m.clamped_values);
        if (!seen.insert(r.utt_id).second) {
            throw IntegrityError(line_no, "duplicate utt_id '" + r.utt_id + "'");
        }
        m.records.push_back(std::move(r));
    }
    if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
    return m;
}

Manifest read_manifest_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    return read_manifest(in);
}

void validate_record(const UtteranceRecord& r) {
    const std::string who = "record '" + r.utt_id + "': ";
    if (r.utt_id.empty()) throw ValidationError("record with empty utt_id");
    if (r.emotion_score) {
        const auto& s = *r.emotion_score;
        for (double v : {s.act, s.val, s.dom, s.scale_min, s.scale_max, s.neutral}) {
            check_finite(v, "emotion score", r.utt_id);
        }
        if (!(s.scale_min < s.scale_max)) throw ValidationError(who + "scale_min must be below scale_max");
        if (s.neutral != (s.scale_min + s.scale_max) / 2.0) {
            throw ValidationError(who + "neutral point must be the scale midpoint");
        }
        for (Dimension d : kAllDimensions) {
            const double v = s.get(d);
            if (v < s.scale_min || v > s.scale_max) {
                throw ValidationError(who + std::string(to_string(d)) + " outside its scale");
            }
        }
    }
    if (r.mos) {
        check_finite(*r.mos, "mos", r.utt_id);
        if (*r.mos < kMosMin || *r.mos > kMosMax) throw ValidationError(who + "mos outside [1,5]");
    }
    if (r.align && !r.align->ops_consistent()) {
        throw ValidationError(who + "alignment ops disagree with counts");
    }
    for (const auto& [key, value] : r.extra) {
        if (is_known_key(key)) throw ValidationError(who + "extra key '" + key + "' shadows a field");
    }
}

std::string record_to_line(const UtteranceRecord& r) {
    ordered_json obj;
    obj["utt_id"] = r.utt_id;
    if (r.pair_id) obj["pair_id"] = *r.pair_id;
    obj["source"] = to_string(r.source);
    obj["split"] = to_string(r.split);
    obj["text_ref"] = r.text_ref;
    if (r.text_hyp) obj["text_hyp"] = *r.text_hyp;
    if (r.audio_path) obj["audio_path"] = *r.audio_path;
    if (r.emotion_label) obj["emotion_label"] = to_string(*r.emotion_label);
    if (r.emotion_score) {
        obj["act"] = r.emotion_score->act;
        obj["val"] = r.emotion_score->val;
        obj["dom"] = r.emotion_score->dom;
        obj["scale_min"] = r.emotion_score->scale_min;
        obj["scale_max"] = r.emotion_score->scale_max;
    }
    if (r.mos) obj["mos"] = *r.mos;
    if (r.align) {
        obj["n_sub"] = r.align->n_sub;
        obj["n_del"] = r.align->n_del;
        obj["n_ins"] = r.align->n_ins;
        obj["n_match"] = r.align->n_match;
        if (!r.align->ops.empty()) {
            std::string ops;
            ops.reserve(r.align->ops.size());
            for (EditOp op : r.align->ops) ops.push_back(op_code(op));
            obj["ops"] = ops;
        }
    }
    for (const auto& [key, value] : r.extra) obj[key] = value;
    return obj.dump(-1, ' ', false, json::error_handler_t::strict);
}

std::string write_manifest(std::span<const UtteranceRecord> records) {
    std::unordered_set<std::string_view> seen;
    for (const auto& r : records) {
        validate_record(r);
        if (!seen.insert(r.utt_id).second) throw ValidationError("duplicate utt_id '" + r.utt_id + "'");
    }
    std::string out;
    for (const auto& r : records) {
        out += record_to_line(r);
        out += '\n';
    }
    return out;
}

}  // namespace emocorpus
