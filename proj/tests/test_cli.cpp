#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "emocorpus/cli.hpp"
#include "emocorpus/io.hpp"
#include "emocorpus/manifest.hpp"
#include "httplib.h"
#include "json.hpp"

using namespace emocorpus;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("emocorpus_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path / name) << text; }
    // Manifest fixture: fills in source/split when a line leaves them out.
    void records(const std::string& name, const std::string& text) const {
        std::istringstream in(text);
        std::string line, outtext;
        while (std::getline(in, line)) {
            auto j = nlohmann::ordered_json::parse(line);
            if (!j.contains("source")) j["source"] = "other";
            if (!j.contains("split")) j["split"] = "train";
            outtext += j.dump() + "\n";
        }
        write(name, outtext);
    }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read(const std::string& path) { return read_text_file(path); }

}  // namespace

TEST_CASE("help, version and usage errors") {
    CHECK(run({"--help"}).code == 0);
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out == std::string(kVersion) + "\n");
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    const auto unknown = run({"profile", "--in", "x", "--out", "y", "--bogus"});
    CHECK(unknown.code == 1);
    CHECK(unknown.err.find("--bogus") != std::string::npos);
    CHECK(run({"grid", "--in", "x", "--out", "y", "--scheme", "hexagonal"}).code == 1);
}

TEST_CASE("missing input file is an I/O failure") {
    TempDir dir;
    const auto r = run({"profile", "--in", dir / "absent.jsonl", "--out", dir / "r.csv"});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "r.csv"));
}

TEST_CASE("align attaches counts") {
    TempDir dir;
    dir.records("in.jsonl", R"({"utt_id":"u1","source":"librispeech","text_ref":"The cat sat.","text_hyp":"the cat"})"
                          "\n");
    const auto r = run({"--run-log", dir / "log.json", "align", "--ref", dir / "in.jsonl", "--out", dir / "out.jsonl"});
    REQUIRE(r.code == 0);
    const auto m = read_manifest_file(dir / "out.jsonl");
    REQUIRE(m.records.size() == 1);
    REQUIRE(m.records[0].align.has_value());
    CHECK(m.records[0].align->n_del == 1);
    CHECK(m.records[0].align->n_match == 2);
    CHECK(m.records[0].align->n_sub == 0);
    CHECK(m.records[0].align->n_ins == 0);

    const auto log = nlohmann::json::parse(read(dir / "log.json"));
    CHECK(log["subcommand"] == "align");
    CHECK(log["status"] == "ok");
    CHECK(log["counts"]["aligned"] == 1);
    CHECK(log["outputs"][0] == dir / "out.jsonl");
    CHECK(r.err.find("\"status\":\"ok\"") != std::string::npos);
}

TEST_CASE("align without hypotheses fails unless allowed") {
    TempDir dir;
    dir.records("in.jsonl", R"({"utt_id":"u1","text_ref":"a b"})"
                          "\n"
                          R"({"utt_id":"u2","text_ref":"a b","text_hyp":"a"})"
                          "\n");
    CHECK(run({"align", "--in", dir / "in.jsonl", "--out", dir / "out.jsonl"}).code == 1);
    CHECK_FALSE(fs::exists(dir / "out.jsonl"));
    CHECK(run({"align", "--in", dir / "in.jsonl", "--out", dir / "out.jsonl", "--allow-missing"}).code == 0);
    const auto m = read_manifest_file(dir / "out.jsonl");
    CHECK_FALSE(m.records[0].align.has_value());
    CHECK(m.records[1].align->n_del == 1);
}

TEST_CASE("validation failure leaves no output behind") {
    TempDir dir;
    dir.records("in.jsonl", R"({"utt_id":"u1","text_ref":"a"})"
                          "\n"
                          R"({"utt_id":"u1","text_ref":"b"})"
                          "\n");
    const auto r = run({"sample-transcripts", "--in", dir / "in.jsonl", "--out", dir / "out.jsonl", "--n", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out.jsonl"));
}

TEST_CASE("profile report") {
    TempDir dir;
    dir.records("in.jsonl", R"({"utt_id":"a","text_ref":"x","n_sub":1,"n_del":0,"n_ins":0,"n_match":9,"mos":4})"
                          "\n"
                          R"({"utt_id":"b","text_ref":"x","n_sub":0,"n_del":0,"n_ins":0,"n_match":10,"mos":4})"
                          "\n");
    REQUIRE(run({"profile", "--in", dir / "in.jsonl", "--out", dir / "r.csv"}).code == 0);
    const auto rows = parse_csv(read(dir / "r.csv"));
    CHECK(rows[0] == std::vector<std::string>{"metric", "value", "n"});
    CHECK(rows[1] == std::vector<std::string>{"corpus_wer", "0.05", "2"});
}

TEST_CASE("select writes subsets and verdicts") {
    TempDir dir;
    dir.records("orig.jsonl",
              R"({"utt_id":"o1","source":"librispeech","text_ref":"a b c d","n_sub":1,"n_del":0,"n_ins":0,"n_match":3})"
              "\n");
    dir.records("synth.jsonl",
              R"({"utt_id":"s1","pair_id":"o1","source":"maskgct","text_ref":"a b c d","act":6,"val":4,"dom":4,"n_sub":2,"n_del":0,"n_ins":0,"n_match":2})"
              "\n"
              R"({"utt_id":"s2","pair_id":"o1","source":"maskgct","text_ref":"a b c d","act":4,"val":4,"dom":4,"n_sub":1,"n_del":0,"n_ins":0,"n_match":3})"
              "\n");
    dir.write("stats.json", R"({"act":{"mean":4,"std":1},"val":{"mean":4,"std":1},"dom":{"mean":4,"std":1},"scale_min":1,"scale_max":7,"n":10})");
    const auto r = run({"select", "--synth", dir / "synth.jsonl", "--orig", dir / "orig.jsonl", "--stats",
                        dir / "stats.json", "--out-prefix", dir / "P"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(read_manifest_file(dir / "P_tts_emo_g.jsonl").records.size() == 1);
    CHECK(read_manifest_file(dir / "P_tts_g.jsonl").records.size() == 1);
    CHECK(read_manifest_file(dir / "P_emo_g.jsonl").records.size() == 1);
    const auto rows = parse_csv(read(dir / "P_verdicts.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows[2] == std::vector<std::string>{"s2", "0", "0", "0", "sub_not_increased;not_salient"});

    // TTS-G needs originals.
    CHECK(run({"select", "--synth", dir / "synth.jsonl", "--out-prefix", dir / "Q"}).code == 1);
    CHECK(run({"select", "--synth", dir / "synth.jsonl", "--strategy", "emo-g", "--stats", dir / "stats.json",
               "--out-prefix", dir / "Q"})
              .code == 0);
}

TEST_CASE("emo-stats, grid and grid-diff") {
    TempDir dir;
    std::string lines;
    for (int i = 0; i < 10; ++i) {
        lines += R"({"utt_id":"u)" + std::to_string(i) + R"(","text_ref":"x","act":)" + std::to_string(1 + i % 7) +
                 R"(,"val":4,"dom":4,"n_sub":)" + std::to_string(i % 3) + R"(,"n_del":0,"n_ins":0,"n_match":5})" + "\n";
    }
    dir.records("in.jsonl", lines);
    REQUIRE(run({"emo-stats", "--in", dir / "in.jsonl", "--out", dir / "box.csv", "--stats-out", dir / "s.json"}).code == 0);
    CHECK(parse_csv(read(dir / "box.csv")).size() == 4);
    CHECK(nlohmann::json::parse(read(dir / "s.json"))["n"] == 10);

    REQUIRE(run({"grid", "--in", dir / "in.jsonl", "--out", dir / "g.csv"}).code == 0);
    CHECK(parse_csv(read(dir / "g.csv")).size() == 1 + 3 * 49);
    REQUIRE(run({"grid", "--in", dir / "in.jsonl", "--out", dir / "g1.csv", "--plane", "act_val"}).code == 0);
    REQUIRE(run({"grid-diff", "--baseline", dir / "g1.csv", "--treated", dir / "g1.csv", "--out", dir / "d.csv"}).code == 0);
    for (const auto& row : parse_csv(read(dir / "d.csv"))) {
        if (row[7] == "1") CHECK(row[8] == "unchanged");
    }
    CHECK(run({"grid-diff", "--baseline", dir / "g.csv", "--treated", dir / "g1.csv", "--out", dir / "d2.csv"}).code == 1);
    CHECK_FALSE(fs::exists(dir / "d2.csv"));

    dir.write("empty.jsonl", "");
    CHECK(run({"grid", "--in", dir / "empty.jsonl", "--out", dir / "e.csv"}).code == 1);
}

TEST_CASE("ccc subcommand") {
    TempDir dir;
    dir.records("pred.jsonl", R"({"utt_id":"a","text_ref":"x","act":1,"val":2,"dom":3})"
                            "\n"
                            R"({"utt_id":"b","text_ref":"x","act":3,"val":4,"dom":5})"
                            "\n");
    REQUIRE(run({"ccc", "--pred", dir / "pred.jsonl", "--ref", dir / "pred.jsonl", "--out", dir / "c.csv"}).code == 0);
    const auto rows = parse_csv(read(dir / "c.csv"));
    CHECK(rows[1] == std::vector<std::string>{"ccc_act", "1", "2"});
}

TEST_CASE("plan and oracle subcommands") {
    TempDir dir;
    dir.records("t.jsonl", R"({"utt_id":"t1","source":"librispeech","text_ref":"hello world"})"
                         "\n"
                         R"({"utt_id":"t2","source":"librispeech","text_ref":"good night moon"})"
                         "\n");
    REQUIRE(run({"plan", "--in", dir / "t.jsonl", "--out", dir / "jobs.jsonl", "--model", "cosyvoice2", "--records-out",
                 dir / "synth.jsonl", "--seed", "3"})
                .code == 0);
    CHECK(read_manifest_file(dir / "synth.jsonl").records.size() == 10);
    CHECK(run({"plan", "--in", dir / "t.jsonl", "--out", dir / "j2.jsonl", "--model", "maskgct"}).code == 1);
    CHECK_FALSE(fs::exists(dir / "j2.jsonl"));

    REQUIRE(run({"transcribe", "--in", dir / "synth.jsonl", "--out", dir / "asr.jsonl", "--seed", "1"}).code == 0);
    REQUIRE(run({"score-emotion", "--in", dir / "asr.jsonl", "--out", dir / "emo.jsonl", "--scale", "iemocap",
                 "--mock-mean", "3", "--mock-std", "0.5"})
                .code == 0);
    const auto emo = read_manifest_file(dir / "emo.jsonl");
    for (const auto& r : emo.records) {
        REQUIRE(r.text_hyp.has_value());
        CHECK(r.emotion_score->scale_max == 5.0);
    }
    REQUIRE(run({"score-mos", "--in", dir / "emo.jsonl", "--out", dir / "mos.jsonl"}).code == 0);
    CHECK(read_manifest_file(dir / "mos.jsonl").records[0].mos == 4.0);

    dir.write("scores.jsonl", R"({"utt_id":"t1","mos":3})"
                              "\n");
    REQUIRE(run({"score-mos", "--in", dir / "t.jsonl", "--out", dir / "m2.jsonl", "--oracle", "file", "--score-file",
                 dir / "scores.jsonl", "--failures", dir / "fail.csv"})
                .code == 0);
    CHECK(read(dir / "fail.csv") == "utt_id,reason\nt2,missing from score file\n");
}

TEST_CASE("unreachable oracle exits 2 without output") {
    TempDir dir;
    dir.records("t.jsonl", R"({"utt_id":"t1","text_ref":"hello","audio_path":"a.wav"})"
                         "\n");
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    const auto r = run({"transcribe", "--in", dir / "t.jsonl", "--out", dir / "o.jsonl", "--oracle", "http",
                        "--endpoint", "http://127.0.0.1:" + std::to_string(port) + "/asr", "--retries", "0",
                        "--timeout-ms", "500", "--run-log", dir / "log.json"});
    CHECK(r.code == 2);
    CHECK_FALSE(fs::exists(dir / "o.jsonl"));
    CHECK(r.err.find("unreachable") != std::string::npos);
}

TEST_CASE("http oracle requires an endpoint") {
    TempDir dir;
    dir.records("t.jsonl", R"({"utt_id":"t1","text_ref":"hello"})"
                         "\n");
    CHECK(run({"transcribe", "--in", dir / "t.jsonl", "--out", dir / "o.jsonl", "--oracle", "http"}).code == 1);
}
