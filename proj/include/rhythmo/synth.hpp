#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/ingest.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct ClassProfile {
    double baseline_rr_ms = 800.0;
    double oscillation_amplitude_ms = 50.0;
    double oscillation_period_beats = 4.0;
    double noise_std_ms = 10.0;
};

struct SynthConfig {
    std::size_t n_records = 200;
    std::size_t min_length = 300;
    std::size_t max_length = 600;
    std::uint64_t seed = 1;
    double class_balance = 0.5; // fraction of class-1 records
    // Stylized high-HRV relaxed vs low-HRV stressed contrast.
    ClassProfile class0{800.0, 50.0, 4.0, 10.0};
    ClassProfile class1{650.0, 10.0, 4.0, 10.0};
};

inline void validate_config(const SynthConfig& cfg) {
    auto check_profile = [](const ClassProfile& p, const char* name) {
        if (p.baseline_rr_ms <= p.oscillation_amplitude_ms + 4.0 * p.noise_std_ms)
            throw usage_error("InvalidConfig",
                              std::string(name) +
                                  ": baseline must exceed amplitude + 4*noise_std to keep RR positive");
        if (p.oscillation_period_beats <= 0.0)
            throw usage_error("InvalidConfig", std::string(name) + ": period must be positive");
        if (p.noise_std_ms < 0.0 || p.oscillation_amplitude_ms < 0.0)
            throw usage_error("InvalidConfig", std::string(name) + ": negative amplitude or noise");
    };
    if (cfg.n_records == 0)
        throw usage_error("InvalidConfig", "n_records must be positive");
    if (cfg.min_length < 100 || cfg.max_length < cfg.min_length)
        throw usage_error("InvalidConfig", "length range must satisfy 100 <= min <= max");
    if (cfg.class_balance <= 0.0 || cfg.class_balance >= 1.0)
        throw usage_error("InvalidConfig", "class_balance must lie in (0,1)");
    check_profile(cfg.class0, "class0");
    check_profile(cfg.class1, "class1");
}

// Sinusoid-plus-noise rhythmogram with questionnaire fields consistent
// with the target class: class 0 draws level from {0,1}, class 1 from
// {2,3}; all four need scores equal the level so the mean matches exactly.
inline RhythmogramRecord generate_record(const SynthConfig& cfg, int cls, Rng& rng,
                                         const std::string& session_id,
                                         const std::string& person_id) {
    validate_config(cfg);
    const ClassProfile& profile = cls == 1 ? cfg.class1 : cfg.class0;
    std::size_t length =
        cfg.min_length + static_cast<std::size_t>(rng.below(cfg.max_length - cfg.min_length + 1));

    RhythmogramRecord rec;
    rec.rr_series.reserve(length);
    const double two_pi = 2.0 * 3.14159265358979323846;
    double t = 0.0;
    for (std::size_t beat = 0; beat < length; ++beat) {
        double rr = profile.baseline_rr_ms +
                    profile.oscillation_amplitude_ms *
                        std::sin(two_pi * static_cast<double>(beat) /
                                 profile.oscillation_period_beats) +
                    profile.noise_std_ms * rng.normal();
        if (rr < 1.0) rr = 1.0;
        t += rr;
        rec.rr_series.push_back({static_cast<long long>(std::llround(t)), rr});
    }

    rec.meta.start_time = "2022-01-01T00:00:00";
    rec.meta.session_id = session_id;
    rec.meta.person_id = person_id;
    rec.meta.age = 20 + static_cast<int>(rng.below(40));
    rec.meta.gender = rng.below(2) == 0 ? Gender::male : Gender::female;

    int level = cls == 1 ? 2 + static_cast<int>(rng.below(2)) : static_cast<int>(rng.below(2));
    rec.questionnaire.ms_begin = 0;
    rec.questionnaire.ms_end = rec.rr_series.back().time_ms;
    rec.questionnaire.need_scores = {level, level, level, level};
    rec.questionnaire.mean_score = static_cast<double>(level);
    rec.questionnaire.level = level;
    return rec;
}

// Writes n_records directories in the three-file format. Class counts are
// within one record of the configured balance; per-record seeds derive
// from the master seed by index.
inline std::vector<RhythmogramRecord> generate_corpus(const SynthConfig& cfg,
                                                      const std::filesystem::path& out_dir) {
    validate_config(cfg);
    std::size_t n1 = static_cast<std::size_t>(
        std::floor(cfg.class_balance * static_cast<double>(cfg.n_records) + 0.5));
    std::vector<RhythmogramRecord> records;
    records.reserve(cfg.n_records);
    for (std::size_t i = 0; i < cfg.n_records; ++i) {
        int cls = i < n1 ? 1 : 0;
        Rng rng(derive_seed(cfg.seed, i));
        char name[32];
        std::snprintf(name, sizeof(name), "record_%04zu", i);
        std::string session_id = std::string("s") + std::to_string(cfg.seed) + "_" +
                                 std::to_string(i);
        std::string person_id = "p" + std::to_string(i);
        RhythmogramRecord rec = generate_record(cfg, cls, rng, session_id, person_id);
        write_record(rec, out_dir / name);
        records.push_back(std::move(rec));
    }
    return records;
}

} // namespace rhythmo
