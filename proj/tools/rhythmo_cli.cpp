#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhythmo/rhythmo.hpp"

namespace fs = std::filesystem;
using namespace rhythmo;

namespace {

struct CommonFlags {
    std::uint64_t seed = 1;
    bool group_by_person = false;
    PipelineConfig pipeline;
};

void add_pipeline_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "master random seed");
    cmd->add_flag("--group-by-person", flags.group_by_person,
                  "keep all sessions of one person on the same split side");
    cmd->add_option("--segment-size", flags.pipeline.segment_size, "raw segment length");
    cmd->add_option("--fragment-size", flags.pipeline.fragment_size, "spectrogram fragment length");
    cmd->add_option("--window", flags.pipeline.window, "spectrogram window length");
    cmd->add_option("--stride", flags.pipeline.stride, "spectrogram window stride");
    cmd->add_option("--fraction", flags.pipeline.split_fraction, "train split fraction");
    cmd->add_option("--logistic-c", flags.pipeline.logistic_c, "logistic regularization C");
    cmd->add_option("--gbm-stages", flags.pipeline.gbm.n_stages, "boosting stages");
    cmd->add_option("--gbm-learning-rate", flags.pipeline.gbm.learning_rate, "boosting shrinkage");
    cmd->add_option("--gbm-depth", flags.pipeline.gbm.max_depth, "boosting tree depth");
    cmd->add_option("--easy-learners", flags.pipeline.easy.n_learners, "ensemble member count");
    cmd->add_option("--easy-rounds", flags.pipeline.easy.adaboost.n_rounds,
                    "AdaBoost rounds per member");
}

FeatureKind parse_kind(const std::string& s) {
    if (s == "raw-segment" || s == "raw_segment") return FeatureKind::raw_segment;
    if (s == "spectrogram") return FeatureKind::spectrogram;
    throw usage_error("InvalidConfig", "unknown feature kind '" + s + "'");
}

std::vector<std::pair<std::string, int>> labeled_sessions(
    const std::vector<RhythmogramRecord>& records) {
    std::vector<std::pair<std::string, int>> out;
    out.reserve(records.size());
    for (const auto& rec : records) out.emplace_back(rec.meta.session_id, record_label(rec));
    return out;
}

SplitPlan make_split(const CommonFlags& flags, const std::vector<RhythmogramRecord>& records,
                     const PipelineConfig& cfg) {
    if (flags.group_by_person) {
        std::vector<std::tuple<std::string, std::string, int>> rows;
        for (const auto& rec : records)
            rows.emplace_back(rec.meta.session_id, rec.meta.person_id, record_label(rec));
        return split_records_by_person(rows, cfg.split_fraction, cfg.seed);
    }
    return split_records(labeled_sessions(records), cfg.split_fraction, cfg.seed);
}

void print_warnings(const LoadedCorpus& corpus) {
    for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
}

int run_synth(const SynthConfig& cfg, const std::string& out_dir) {
    generate_corpus(cfg, out_dir);
    std::cout << "wrote " << cfg.n_records << " records to " << out_dir << "\n";
    return 0;
}

int run_train(const CommonFlags& flags, const std::string& corpus_dir, const std::string& kind_s,
              const std::string& algorithm_s, const std::string& model_out) {
    flags.pipeline.validate();
    FeatureKind kind = parse_kind(kind_s);
    Algorithm alg = algorithm_from_name(algorithm_s);

    LoadedCorpus corpus = load_corpus(corpus_dir);
    print_warnings(corpus);

    PipelineConfig cfg = flags.pipeline;
    cfg.seed = flags.seed;
    SplitPlan plan = make_split(flags, corpus.records, cfg);

    Matrix X;
    std::vector<int> y;
    build_dataset(corpus.records, plan.train_session_ids, kind, cfg, X, y);
    TrainedModel model = train_model(alg, kind, X, y, cfg);
    save_model(model, model_out);
    write_split_plan(plan, model_out + ".split");

    std::vector<int> predicted;
    for (std::size_t i = 0; i < X.rows; ++i)
        predicted.push_back(model.predict_label(std::span(X.row(i), X.cols)));
    EvalReport train_report;
    fill_precision_recall(train_report, predicted, y);
    std::cout << "trained " << algorithm_name(alg) << " on " << X.rows << " parts from "
              << plan.train_session_ids.size() << " records\n";
    std::cout << "train accuracy " << train_report.accuracy << "\n";
    std::cout << "model written to " << model_out << "\n";
    return 0;
}

int run_predict(const CommonFlags& flags, const std::string& model_path,
                const std::string& record_dir) {
    TrainedModel model = load_model(model_path);
    PipelineConfig cfg = flags.pipeline;
    std::vector<std::string> warnings;
    RhythmogramRecord rec = parse_record(record_dir, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::size_t min_len = min_record_length(model.kind, cfg);
    if (rec.rr_series.size() < min_len)
        throw data_error("RecordTooShort",
                         "record has " + std::to_string(rec.rr_series.size()) +
                             " samples; the " + feature_kind_name(model.kind) +
                             " model needs at least " + std::to_string(min_len));

    auto parts = record_features(rec, model.kind, cfg);
    if (!parts.empty() && parts[0].size() != model.feature_dim)
        throw data_error("FeatureKindMismatch",
                         "extracted dimension " + std::to_string(parts[0].size()) +
                             " does not match model dimension " +
                             std::to_string(model.feature_dim));
    RecordScore rs = record_score(model, parts);
    std::cout << "score=" << format_double(rs.mean_label) << " label=" << rs.label << "\n";
    return 0;
}

struct EvalTarget {
    std::string name;
    Algorithm alg;
    FeatureKind kind;
};

int run_evaluate(const CommonFlags& flags, const std::string& corpus_dir,
                 const std::string& out_dir, bool all, std::vector<std::string> model_specs) {
    flags.pipeline.validate();
    PipelineConfig cfg = flags.pipeline;
    cfg.seed = flags.seed;

    std::vector<EvalTarget> targets;
    if (all || model_specs.empty()) {
        targets = {{"logistic-raw", Algorithm::logistic, FeatureKind::raw_segment},
                   {"gbm-raw", Algorithm::gbm, FeatureKind::raw_segment},
                   {"easy-ensemble-raw", Algorithm::easy_ensemble, FeatureKind::raw_segment},
                   {"gbm-spectrogram", Algorithm::gbm, FeatureKind::spectrogram}};
    } else {
        for (const auto& spec : model_specs) {
            auto pos = spec.find(':');
            if (pos == std::string::npos)
                throw usage_error("InvalidConfig",
                                  "model spec '" + spec + "' must be algorithm:feature-kind");
            Algorithm alg = algorithm_from_name(spec.substr(0, pos));
            FeatureKind kind = parse_kind(spec.substr(pos + 1));
            targets.push_back({std::string(algorithm_name(alg)) + "-" +
                                   (kind == FeatureKind::raw_segment ? "raw" : "spectrogram"),
                               alg, kind});
        }
    }

    LoadedCorpus corpus = load_corpus(corpus_dir);
    print_warnings(corpus);
    SplitPlan plan = make_split(flags, corpus.records, cfg);

    fs::create_directories(out_dir);
    write_split_plan(plan, fs::path(out_dir) / "split.txt");

    std::vector<std::pair<std::string, EvalReport>> reports;
    for (const auto& target : targets) {
        Matrix X;
        std::vector<int> y;
        build_dataset(corpus.records, plan.train_session_ids, target.kind, cfg, X, y);
        TrainedModel model = train_model(target.alg, target.kind, X, y, cfg);
        save_model(model, fs::path(out_dir) / (target.name + ".model"));
        EvalReport report = evaluate_on_split(model, corpus.records, plan.test_session_ids, cfg);
        write_roc_csv(report, fs::path(out_dir) / (target.name + ".roc.csv"));
        std::ofstream rep(fs::path(out_dir) / (target.name + ".report.txt"));
        rep << format_report(report);
        std::cout << target.name << ": auc=" << report.auc << " accuracy=" << report.accuracy
                  << "\n";
        reports.emplace_back(target.name, std::move(report));
    }

    auto rows = compare_models(reports);
    std::string table = format_comparison(rows);
    std::ofstream cmp(fs::path(out_dir) / "comparison.txt");
    cmp << table;
    std::cout << table;
    return 0;
}

int run_spectrogram(const CommonFlags& flags, const std::string& input_dir,
                    const std::string& out_dir, int class_filter) {
    flags.pipeline.validate();
    PipelineConfig cfg = flags.pipeline;
    fs::create_directories(out_dir);

    auto dirs = list_record_dirs(input_dir);
    if (dirs.size() == 1) {
        std::vector<std::string> warnings;
        RhythmogramRecord rec = parse_record(dirs[0], &warnings);
        auto frags = fragments_from_tail(rec, cfg.fragment_size);
        if (frags.empty())
            throw data_error("RecordTooShort",
                             "record shorter than one fragment (" +
                                 std::to_string(cfg.fragment_size) + " samples)");
        for (std::size_t i = 0; i < frags.size(); ++i) {
            Spectrogram s = spectrogram(frags[i], cfg.window, cfg.stride);
            write_grid_csv(s, fs::path(out_dir) / ("fragment_" + std::to_string(i) + ".csv"));
        }
        std::cout << "wrote " << frags.size() << " spectrogram grids to " << out_dir << "\n";
        return 0;
    }

    LoadedCorpus corpus = load_corpus(input_dir);
    print_warnings(corpus);
    std::vector<Spectrogram> specs;
    for (const auto& rec : corpus.records)
        for (const auto& frag : fragments_from_tail(rec, cfg.fragment_size))
            specs.push_back(spectrogram(frag, cfg.window, cfg.stride));

    if (class_filter == 0 || class_filter == 1) {
        Spectrogram mean = class_mean_spectrogram(specs, class_filter);
        write_grid_csv(mean,
                       fs::path(out_dir) / ("mean" + std::to_string(class_filter) + ".csv"));
        std::cout << "wrote class-" << class_filter << " mean spectrogram\n";
        return 0;
    }

    Spectrogram mean0 = class_mean_spectrogram(specs, 0);
    Spectrogram mean1 = class_mean_spectrogram(specs, 1);
    Matrix diff = diff_spectrogram(mean0, mean1);
    write_grid_csv(mean0, fs::path(out_dir) / "mean0.csv");
    write_grid_csv(mean1, fs::path(out_dir) / "mean1.csv");
    write_grid_csv(diff, fs::path(out_dir) / "diff.csv");
    std::cout << "wrote mean0.csv, mean1.csv, diff.csv to " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rhythmogram disadaptation classification pipeline"};
    app.require_subcommand(1);

    CommonFlags flags;

    // synth
    SynthConfig synth_cfg;
    std::string synth_out;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic labeled corpus");
    synth_cmd->add_option("--n", synth_cfg.n_records, "number of records");
    synth_cmd->add_option("--seed", synth_cfg.seed, "master random seed");
    synth_cmd->add_option("--min-length", synth_cfg.min_length, "minimum record length");
    synth_cmd->add_option("--max-length", synth_cfg.max_length, "maximum record length");
    synth_cmd->add_option("--balance", synth_cfg.class_balance, "fraction of class-1 records");
    synth_cmd->add_option("--out", synth_out, "output corpus directory")->required();
    auto add_profile = [&](const char* prefix, ClassProfile& p) {
        std::string pre(prefix);
        synth_cmd->add_option("--" + pre + "-baseline", p.baseline_rr_ms, "baseline RR (ms)");
        synth_cmd->add_option("--" + pre + "-amplitude", p.oscillation_amplitude_ms,
                              "oscillation amplitude (ms)");
        synth_cmd->add_option("--" + pre + "-period", p.oscillation_period_beats,
                              "oscillation period (beats)");
        synth_cmd->add_option("--" + pre + "-noise", p.noise_std_ms, "noise std (ms)");
    };
    add_profile("class0", synth_cfg.class0);
    add_profile("class1", synth_cfg.class1);

    // train
    std::string corpus_dir, kind_s = "raw-segment", algorithm_s = "gbm", model_out = "model.txt";
    auto* train_cmd = app.add_subcommand("train", "train a classifier on a corpus");
    train_cmd->add_option("--corpus", corpus_dir, "corpus directory")->required();
    train_cmd->add_option("--features", kind_s, "raw-segment | spectrogram");
    train_cmd->add_option("--algorithm", algorithm_s, "logistic | gbm | easy-ensemble");
    train_cmd->add_option("--out", model_out, "model output file")->required();
    add_pipeline_flags(train_cmd, flags);

    // predict
    std::string model_path, record_dir;
    auto* predict_cmd = app.add_subcommand("predict", "score one record with a trained model");
    predict_cmd->add_option("--model", model_path, "model file")->required();
    predict_cmd->add_option("--record", record_dir, "record directory")->required();
    add_pipeline_flags(predict_cmd, flags);

    // evaluate
    std::string eval_corpus, eval_out = "eval";
    bool eval_all = false;
    std::vector<std::string> eval_models;
    auto* eval_cmd = app.add_subcommand("evaluate", "train and compare classifiers on a split");
    eval_cmd->add_option("--corpus", eval_corpus, "corpus directory")->required();
    eval_cmd->add_option("--out", eval_out, "output directory");
    eval_cmd->add_flag("--all", eval_all, "evaluate the full model set");
    eval_cmd->add_option("--model", eval_models, "algorithm:feature-kind (repeatable)");
    add_pipeline_flags(eval_cmd, flags);

    // spectrogram
    std::string spec_input, spec_out = "spectrograms";
    int class_filter = -1;
    auto* spec_cmd =
        app.add_subcommand("spectrogram", "emit spectrogram / class-mean / difference grids");
    spec_cmd->add_option("--input", spec_input, "corpus or single record directory")->required();
    spec_cmd->add_option("--out", spec_out, "output directory");
    spec_cmd->add_option("--class", class_filter, "emit only one class mean (0 or 1)");
    add_pipeline_flags(spec_cmd, flags);

    try {
        app.parse(argc, argv);
        if (synth_cmd->parsed()) return run_synth(synth_cfg, synth_out);
        if (train_cmd->parsed())
            return run_train(flags, corpus_dir, kind_s, algorithm_s, model_out);
        if (predict_cmd->parsed()) return run_predict(flags, model_path, record_dir);
        if (eval_cmd->parsed())
            return run_evaluate(flags, eval_corpus, eval_out, eval_all, eval_models);
        if (spec_cmd->parsed()) return run_spectrogram(flags, spec_input, spec_out, class_filter);
        return 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 4;
    }
}
