#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

#include "rhythmo/preprocess.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/synth.hpp"

using namespace rhythmo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("rhythmo_synth_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("degenerate generator yields a constant series") {
    SynthConfig cfg;
    cfg.class0 = {800.0, 0.0, 4.0, 0.0};
    cfg.min_length = 120;
    cfg.max_length = 120;
    Rng rng(1);
    RhythmogramRecord rec = generate_record(cfg, 0, rng, "s", "p");
    REQUIRE(rec.rr_series.size() == 120);
    for (const auto& s : rec.rr_series) CHECK(s.rr_ms == Catch::Approx(800.0).margin(1e-12));
}

TEST_CASE("pure tone concentrates spectral energy at the expected bin") {
    SynthConfig cfg;
    cfg.class0 = {800.0, 50.0, 4.0, 0.0};
    cfg.min_length = 300;
    cfg.max_length = 300;
    Rng rng(2);
    RhythmogramRecord rec = generate_record(cfg, 0, rng, "s", "p");
    auto frags = fragments_from_tail(rec, 300);
    REQUIRE(frags.size() == 1);
    Spectrogram spec = spectrogram(frags[0], 100, 1);
    // period 4 beats -> bin k = 100/4 = 25 of each 100-sample window
    for (std::size_t r = 0; r < spec.rows; ++r) {
        std::size_t argmax = 1;
        for (std::size_t c = 1; c < spec.cols; ++c)
            if (spec.at(r, c) > spec.at(r, argmax)) argmax = c;
        CHECK(argmax == 25);
    }
}

TEST_CASE("fixed seed gives bit-identical records") {
    SynthConfig cfg;
    cfg.min_length = 150;
    cfg.max_length = 200;
    Rng rng_a(42), rng_b(42);
    RhythmogramRecord a = generate_record(cfg, 1, rng_a, "s", "p");
    RhythmogramRecord b = generate_record(cfg, 1, rng_b, "s", "p");
    REQUIRE(a.rr_series.size() == b.rr_series.size());
    for (std::size_t i = 0; i < a.rr_series.size(); ++i) {
        CHECK(a.rr_series[i].time_ms == b.rr_series[i].time_ms);
        CHECK(a.rr_series[i].rr_ms == b.rr_series[i].rr_ms);
    }
    CHECK(a.questionnaire.level == b.questionnaire.level);
}

TEST_CASE("questionnaire fields are class-consistent and pass ingest invariants") {
    SynthConfig cfg;
    cfg.min_length = 100;
    cfg.max_length = 150;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        int cls = seed % 2 == 0 ? 0 : 1;
        RhythmogramRecord rec = generate_record(cfg, cls, rng, "s", "p");
        CHECK(record_label(rec) == cls);
        auto lr = disadaptation_level(rec.questionnaire.need_scores);
        CHECK(lr.mean_score == rec.questionnaire.mean_score);
        CHECK(lr.level == rec.questionnaire.level);
        long long prev = -1;
        for (const auto& s : rec.rr_series) {
            CHECK(s.rr_ms > 0.0);
            CHECK(s.time_ms > prev);
            prev = s.time_ms;
        }
    }
}

TEST_CASE("generate_corpus respects counts, balance, and round-trips") {
    SynthConfig cfg;
    cfg.n_records = 10;
    cfg.min_length = 100;
    cfg.max_length = 160;
    cfg.seed = 5;
    TempDir tmp;
    auto records = generate_corpus(cfg, tmp.path);
    REQUIRE(records.size() == 10);

    std::size_t n1 = 0;
    for (const auto& r : records)
        if (record_label(r) == 1) n1++;
    CHECK(n1 == 5);

    for (const auto& r : records) {
        CHECK(r.rr_series.size() >= 100);
        CHECK(r.rr_series.size() <= 160);
    }

    auto dirs = list_record_dirs(tmp.path);
    REQUIRE(dirs.size() == 10);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        RhythmogramRecord back = parse_record(dirs[i]);
        const auto& orig = records[i];
        REQUIRE(back.rr_series.size() == orig.rr_series.size());
        for (std::size_t j = 0; j < back.rr_series.size(); ++j) {
            CHECK(back.rr_series[j].time_ms == orig.rr_series[j].time_ms);
            CHECK(back.rr_series[j].rr_ms == orig.rr_series[j].rr_ms);
        }
        CHECK(back.meta.session_id == orig.meta.session_id);
        CHECK(back.questionnaire.level == orig.questionnaire.level);
    }
}

TEST_CASE("invalid configs are rejected") {
    SynthConfig cfg;
    cfg.n_records = 0;
    CHECK_THROWS_AS(validate_config(cfg), Error);

    cfg = {};
    cfg.min_length = 50;
    CHECK_THROWS_AS(validate_config(cfg), Error);

    cfg = {};
    cfg.class1 = {100.0, 80.0, 4.0, 10.0}; // baseline too close to amplitude+noise
    CHECK_THROWS_AS(validate_config(cfg), Error);

    cfg = {};
    cfg.class_balance = 1.5;
    CHECK_THROWS_AS(validate_config(cfg), Error);
}
