#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "rhythmo/evaluate.hpp"
#include "rhythmo/ingest.hpp"
#include "rhythmo/model.hpp"
#include "rhythmo/preprocess.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct PipelineConfig {
    std::size_t segment_size = 100;
    std::size_t fragment_size = 300;
    std::size_t window = 100;
    std::size_t stride = 1;
    double split_fraction = 0.8;
    std::uint64_t seed = 0;
    double logistic_c = 1.0;
    GbmOptions gbm{};
    EasyEnsembleOptions easy{};

    void validate() const {
        if (segment_size < 2)
            throw usage_error("InvalidConfig", "segment size must be at least 2");
        if (window > fragment_size)
            throw usage_error("InvalidConfig", "window must not exceed fragment size");
        if (stride == 0 || window == 0)
            throw usage_error("InvalidConfig", "window and stride must be positive");
    }
};

// Feature vectors of one record for the given feature kind: standardized
// tail segments, or flattened spectrograms of standardized tail fragments.
inline std::vector<std::vector<double>> record_features(const RhythmogramRecord& rec,
                                                        FeatureKind kind,
                                                        const PipelineConfig& cfg) {
    std::vector<std::vector<double>> parts;
    if (kind == FeatureKind::raw_segment) {
        for (auto& seg : segment_from_tail(rec, cfg.segment_size))
            parts.push_back(std::move(seg.values));
    } else {
        for (const auto& frag : fragments_from_tail(rec, cfg.fragment_size))
            parts.push_back(flatten(spectrogram(frag, cfg.window, cfg.stride)));
    }
    return parts;
}

inline std::size_t feature_dimension(FeatureKind kind, const PipelineConfig& cfg) {
    if (kind == FeatureKind::raw_segment) return cfg.segment_size;
    std::size_t n_windows = (cfg.fragment_size - cfg.window) / cfg.stride + 1;
    return n_windows * (cfg.window / 2 + 1);
}

inline std::size_t min_record_length(FeatureKind kind, const PipelineConfig& cfg) {
    return kind == FeatureKind::raw_segment ? cfg.segment_size : cfg.fragment_size;
}

struct LoadedCorpus {
    std::vector<RhythmogramRecord> records;
    std::vector<std::string> warnings;
};

inline LoadedCorpus load_corpus(const std::filesystem::path& dir) {
    LoadedCorpus corpus;
    for (const auto& record_dir : list_record_dirs(dir))
        corpus.records.push_back(parse_record(record_dir, &corpus.warnings));
    return corpus;
}

// Per-part training matrix for the records named in `session_ids`.
inline void build_dataset(const std::vector<RhythmogramRecord>& records,
                          const std::vector<std::string>& session_ids, FeatureKind kind,
                          const PipelineConfig& cfg, Matrix& X, std::vector<int>& y) {
    std::vector<std::vector<double>> rows;
    y.clear();
    for (const auto& rec : records) {
        if (!std::binary_search(session_ids.begin(), session_ids.end(), rec.meta.session_id))
            continue;
        int label = record_label(rec);
        for (auto& part : record_features(rec, kind, cfg)) {
            rows.push_back(std::move(part));
            y.push_back(label);
        }
    }
    if (rows.empty())
        throw data_error("EmptyInput", "no usable parts in the selected records");
    X = Matrix(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), X.row(i));
}

inline TrainedModel train_model(Algorithm alg, FeatureKind kind, const Matrix& X,
                                const std::vector<int>& y, const PipelineConfig& cfg) {
    TrainedModel model;
    model.kind = kind;
    model.feature_dim = X.cols;
    switch (alg) {
        case Algorithm::logistic:
            model.model = train_logistic(X, y, cfg.logistic_c);
            break;
        case Algorithm::gbm:
            model.model = train_gbm(X, y, cfg.gbm);
            break;
        case Algorithm::easy_ensemble:
            model.model = train_easy_ensemble(X, y, cfg.seed, cfg.easy);
            break;
    }
    return model;
}

// Score every test record by segment voting and assemble the full report.
inline EvalReport evaluate_on_split(const TrainedModel& model,
                                    const std::vector<RhythmogramRecord>& records,
                                    const std::vector<std::string>& test_ids,
                                    const PipelineConfig& cfg) {
    std::vector<double> scores, proba_scores;
    std::vector<int> predicted, truth;
    for (const auto& rec : records) {
        if (!std::binary_search(test_ids.begin(), test_ids.end(), rec.meta.session_id)) continue;
        auto parts = record_features(rec, model.kind, cfg);
        if (parts.empty()) continue; // record shorter than one part
        RecordScore rs = record_score(model, parts);
        scores.push_back(rs.mean_label);
        proba_scores.push_back(rs.mean_proba);
        predicted.push_back(rs.label);
        truth.push_back(record_label(rec));
    }
    if (truth.empty())
        throw data_error("EmptyInput", "no scorable records in the test split");
    return evaluate_predictions(scores, proba_scores, predicted, truth);
}

inline void write_roc_csv(const EvalReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("IoFailure", "cannot write " + path.string());
    out << "fpr,tpr\n";
    for (const auto& p : report.roc_points)
        out << format_double(p.fpr) << ',' << format_double(p.tpr) << '\n';
}

// One feature vector per row, label as the final column.
inline void write_feature_csv(const Matrix& X, const std::vector<int>& y,
                              const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("IoFailure", "cannot write " + path.string());
    for (std::size_t i = 0; i < X.rows; ++i) {
        for (std::size_t j = 0; j < X.cols; ++j) out << format_double(X(i, j)) << ',';
        out << y[i] << '\n';
    }
}

// Row-per-window CSV grid for external heatmap plotting.
inline void write_grid_csv(const double* data, std::size_t rows, std::size_t cols,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("IoFailure", "cannot write " + path.string());
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c)
            out << format_double(data[r * cols + c]) << (c + 1 == cols ? '\n' : ',');
    }
}

inline void write_grid_csv(const Spectrogram& s, const std::filesystem::path& path) {
    write_grid_csv(s.data.data(), s.rows, s.cols, path);
}

inline void write_grid_csv(const Matrix& m, const std::filesystem::path& path) {
    write_grid_csv(m.data.data(), m.rows, m.cols, path);
}

inline void write_split_plan(const SplitPlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("IoFailure", "cannot write " + path.string());
    out << "fraction " << format_double(plan.fraction) << "\nseed " << plan.seed << "\n";
    out << "train " << plan.train_session_ids.size() << "\n";
    for (const auto& id : plan.train_session_ids) out << id << "\n";
    out << "test " << plan.test_session_ids.size() << "\n";
    for (const auto& id : plan.test_session_ids) out << id << "\n";
}

} // namespace rhythmo
