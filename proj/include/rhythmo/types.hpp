#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "rhythmo/error.hpp"

namespace rhythmo {

enum class Gender { male, female, unspecified };

struct RrSample {
    long long time_ms = 0; // ms from record start, strictly increasing
    double rr_ms = 0.0;    // > 0
};

struct RecordMeta {
    std::string start_time;
    std::string session_id;
    std::string person_id;
    int age = 0;
    Gender gender = Gender::unspecified;
};

struct QuestionnaireResult {
    long long ms_begin = 0;
    long long ms_end = 0;
    std::array<int, 4> need_scores{}; // U1..U4, each in {0,1,2,3}
    double mean_score = 0.0;
    int level = 0; // 0..3
};

struct RhythmogramRecord {
    std::vector<RrSample> rr_series;
    RecordMeta meta;
    QuestionnaireResult questionnaire;
};

// 0 = no disadaptation (questionnaire level 0 or 1), 1 = present.
using ClassLabel = int;

struct SegmentOrigin {
    std::string session_id;
    int index_from_tail = 0;
};

struct Segment {
    std::vector<double> values; // standardized, fixed length (default 100)
    ClassLabel label = 0;
    SegmentOrigin origin;
};

struct Fragment {
    std::vector<double> values; // standardized, fixed length (default 300)
    ClassLabel label = 0;
    SegmentOrigin origin;
};

struct Spectrogram {
    std::size_t rows = 0; // window positions
    std::size_t cols = 0; // frequency bins
    std::vector<double> data; // row-major magnitudes
    ClassLabel label = 0;

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }
};

} // namespace rhythmo
