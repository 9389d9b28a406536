#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/ingest.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

// z-scoring with the population (1/N) standard deviation. A constant
// input maps to the all-zero vector.
inline std::vector<double> standardize(const std::vector<double>& values) {
    if (values.empty())
        throw data_error("EmptyInput", "cannot standardize an empty series");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    double sd = std::sqrt(var);
    std::vector<double> out(values.size());
    if (sd < 1e-12) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
    return out;
}

namespace detail {

// Tail-anchored raw slices: contiguous, non-overlapping, anchored at the
// final sample; a leading remainder shorter than `size` is discarded.
// Slice 0 is the tail-most.
inline std::vector<std::vector<double>> tail_slices(const std::vector<RrSample>& series,
                                                    std::size_t size) {
    std::vector<std::vector<double>> out;
    std::size_t n = series.size();
    std::size_t count = n / size;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::size_t end = n - k * size;
        std::vector<double> slice(size);
        for (std::size_t i = 0; i < size; ++i) slice[i] = series[end - size + i].rr_ms;
        out.push_back(std::move(slice));
    }
    return out;
}

} // namespace detail

inline std::vector<Segment> segment_from_tail(const RhythmogramRecord& rec, std::size_t size) {
    if (size < 2)
        throw usage_error("InvalidConfig", "segment size must be at least 2");
    std::vector<Segment> out;
    auto slices = detail::tail_slices(rec.rr_series, size);
    ClassLabel label = record_label(rec);
    for (std::size_t k = 0; k < slices.size(); ++k) {
        Segment seg;
        seg.values = standardize(slices[k]);
        seg.label = label;
        seg.origin = {rec.meta.session_id, static_cast<int>(k)};
        out.push_back(std::move(seg));
    }
    return out;
}

inline std::vector<Fragment> fragments_from_tail(const RhythmogramRecord& rec, std::size_t size) {
    if (size < 2)
        throw usage_error("InvalidConfig", "fragment size must be at least 2");
    std::vector<Fragment> out;
    auto slices = detail::tail_slices(rec.rr_series, size);
    ClassLabel label = record_label(rec);
    for (std::size_t k = 0; k < slices.size(); ++k) {
        Fragment frag;
        frag.values = standardize(slices[k]);
        frag.label = label;
        frag.origin = {rec.meta.session_id, static_cast<int>(k)};
        out.push_back(std::move(frag));
    }
    return out;
}

namespace detail {

// One-sided DFT basis for a fixed window length, reused across windows.
struct DftTables {
    std::size_t window;
    std::size_t bins;
    std::vector<double> cos_table; // bins x window
    std::vector<double> sin_table;

    explicit DftTables(std::size_t w) : window(w), bins(w / 2 + 1) {
        cos_table.resize(bins * window);
        sin_table.resize(bins * window);
        const double two_pi = 2.0 * 3.14159265358979323846;
        for (std::size_t k = 0; k < bins; ++k)
            for (std::size_t n = 0; n < window; ++n) {
                double phase = two_pi * static_cast<double>(k) * static_cast<double>(n) /
                               static_cast<double>(window);
                cos_table[k * window + n] = std::cos(phase);
                sin_table[k * window + n] = std::sin(phase);
            }
    }
};

} // namespace detail

// Sliding-window magnitude spectrogram: rectangular taper, one-sided
// spectrum with floor(window/2)+1 bins, rows ordered by window start.
inline Spectrogram spectrogram(const std::vector<double>& values, std::size_t window = 100,
                               std::size_t stride = 1, ClassLabel label = 0) {
    if (window == 0 || stride == 0)
        throw usage_error("InvalidConfig", "window and stride must be positive");
    if (values.size() < window)
        throw data_error("WindowTooLarge",
                         "window " + std::to_string(window) + " exceeds fragment length " +
                             std::to_string(values.size()));
    detail::DftTables tables(window);
    std::size_t n_windows = (values.size() - window) / stride + 1;
    Spectrogram spec;
    spec.rows = n_windows;
    spec.cols = tables.bins;
    spec.label = label;
    spec.data.resize(n_windows * tables.bins);
    for (std::size_t w = 0; w < n_windows; ++w) {
        const double* x = values.data() + w * stride;
        for (std::size_t k = 0; k < tables.bins; ++k) {
            const double* ct = tables.cos_table.data() + k * window;
            const double* st = tables.sin_table.data() + k * window;
            double re = 0.0, im = 0.0;
            for (std::size_t n = 0; n < window; ++n) {
                re += x[n] * ct[n];
                im -= x[n] * st[n];
            }
            spec.at(w, k) = std::sqrt(re * re + im * im);
        }
    }
    return spec;
}

inline Spectrogram spectrogram(const Fragment& frag, std::size_t window = 100,
                               std::size_t stride = 1) {
    return spectrogram(frag.values, window, stride, frag.label);
}

// Row-major flattening into a feature vector (201*51 = 10251 at defaults).
inline std::vector<double> flatten(const Spectrogram& spec) {
    return spec.data;
}

inline Spectrogram unflatten(const std::vector<double>& v, std::size_t rows, std::size_t cols,
                             ClassLabel label = 0) {
    if (v.size() != rows * cols)
        throw data_error("DimensionMismatch", "vector length does not match rows*cols");
    Spectrogram spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.label = label;
    spec.data = v;
    return spec;
}

inline Spectrogram class_mean_spectrogram(const std::vector<Spectrogram>& specs, ClassLabel cls) {
    Spectrogram mean;
    std::size_t count = 0;
    for (const auto& s : specs) {
        if (s.label != cls) continue;
        if (count == 0) {
            mean = s;
        } else {
            if (s.rows != mean.rows || s.cols != mean.cols)
                throw data_error("DimensionMismatch", "spectrogram dimensions differ");
            for (std::size_t i = 0; i < s.data.size(); ++i) mean.data[i] += s.data[i];
        }
        ++count;
    }
    if (count == 0)
        throw data_error("EmptyClass",
                         "no spectrograms with class " + std::to_string(cls));
    for (double& v : mean.data) v /= static_cast<double>(count);
    mean.label = cls;
    return mean;
}

// Signed element-wise mean1 - mean0.
inline Matrix diff_spectrogram(const Spectrogram& mean0, const Spectrogram& mean1) {
    if (mean0.rows != mean1.rows || mean0.cols != mean1.cols)
        throw data_error("DimensionMismatch", "spectrogram dimensions differ");
    Matrix out(mean0.rows, mean0.cols);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = mean1.data[i] - mean0.data[i];
    return out;
}

} // namespace rhythmo
