#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "rhythmo/adaboost.hpp"
#include "rhythmo/easy_ensemble.hpp"
#include "rhythmo/error.hpp"
#include "rhythmo/gbm.hpp"
#include "rhythmo/ingest.hpp"
#include "rhythmo/logistic.hpp"

namespace rhythmo {

enum class FeatureKind { raw_segment, spectrogram };

inline const char* feature_kind_name(FeatureKind k) {
    return k == FeatureKind::raw_segment ? "raw_segment" : "spectrogram";
}

inline FeatureKind feature_kind_from_name(const std::string& s) {
    if (s == "raw_segment") return FeatureKind::raw_segment;
    if (s == "spectrogram") return FeatureKind::spectrogram;
    throw data_error("CorruptModel", "unknown feature kind '" + s + "'");
}

enum class Algorithm { logistic, gbm, easy_ensemble };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::logistic: return "logistic";
        case Algorithm::gbm: return "gbm";
        default: return "easy-ensemble";
    }
}

inline Algorithm algorithm_from_name(const std::string& s) {
    if (s == "logistic") return Algorithm::logistic;
    if (s == "gbm") return Algorithm::gbm;
    if (s == "easy-ensemble" || s == "easy_ensemble") return Algorithm::easy_ensemble;
    throw data_error("CorruptModel", "unknown algorithm '" + s + "'");
}

struct TrainedModel {
    FeatureKind kind = FeatureKind::raw_segment;
    std::size_t feature_dim = 0;
    std::variant<LogisticModel, GradientBoostingModel, EasyEnsembleModel> model;

    Algorithm algorithm() const { return static_cast<Algorithm>(model.index()); }

    double predict_proba(std::span<const double> x) const {
        if (x.size() != feature_dim)
            throw data_error("FeatureKindMismatch",
                             "model expects " + std::string(feature_kind_name(kind)) +
                                 " features of dimension " + std::to_string(feature_dim) +
                                 ", got " + std::to_string(x.size()));
        return std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, LogisticModel>)
                    return predict_proba_logistic(m, x);
                else if constexpr (std::is_same_v<T, GradientBoostingModel>)
                    return predict_proba_gbm(m, x);
                else
                    return predict_proba_easy(m, x);
            },
            model);
    }

    int predict_label(std::span<const double> x) const { return predict_proba(x) >= 0.5 ? 1 : 0; }
};

namespace detail {

constexpr int kModelFormatVersion = 1;

class ModelReader {
public:
    explicit ModelReader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

    std::string token() {
        std::string t;
        if (!(in_ >> t))
            throw data_error("CorruptModel", file_ + ": unexpected end of file");
        return t;
    }

    std::string expect_key(const std::string& key) {
        std::string t = token();
        if (t != key)
            throw data_error("CorruptModel", file_ + ": expected '" + key + "', got '" + t + "'");
        return token();
    }

    long long read_int(const std::string& key) {
        std::string v = expect_key(key);
        long long out = 0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw data_error("CorruptModel", file_ + ": bad integer for " + key);
        return out;
    }

    double read_double(const std::string& key) { return parse_double(expect_key(key)); }

    double parse_double(const std::string& v) {
        double out = 0.0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
            throw data_error("CorruptModel", file_ + ": bad number '" + v + "'");
        return out;
    }

    const std::string& file() const { return file_; }

private:
    std::istream& in_;
    std::string file_;
};

inline void write_tree(std::ostream& out, const DecisionTree& tree) {
    out << "tree " << tree.nodes.size() << ' ' << tree.max_depth << '\n';
    for (const auto& n : tree.nodes)
        out << n.feature << ' ' << format_double(n.threshold) << ' ' << format_double(n.value)
            << ' ' << n.left << ' ' << n.right << '\n';
}

inline DecisionTree read_tree(ModelReader& r) {
    long long n_nodes = r.read_int("tree");
    DecisionTree tree;
    tree.max_depth = static_cast<int>(r.parse_double(r.token()));
    if (n_nodes <= 0)
        throw data_error("CorruptModel", r.file() + ": invalid node count");
    tree.nodes.resize(static_cast<std::size_t>(n_nodes));
    for (auto& n : tree.nodes) {
        n.feature = static_cast<int>(r.parse_double(r.token()));
        n.threshold = r.parse_double(r.token());
        n.value = r.parse_double(r.token());
        n.left = static_cast<int>(r.parse_double(r.token()));
        n.right = static_cast<int>(r.parse_double(r.token()));
    }
    return tree;
}

} // namespace detail

inline void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw data_error("IoFailure", "cannot write " + path.string());
    out << "rhythmo-model " << detail::kModelFormatVersion << '\n';
    out << "algorithm " << algorithm_name(model.algorithm()) << '\n';
    out << "feature_kind " << feature_kind_name(model.kind) << '\n';
    out << "feature_dim " << model.feature_dim << '\n';

    if (const auto* lm = std::get_if<LogisticModel>(&model.model)) {
        out << "regularization_c " << format_double(lm->regularization_c) << '\n';
        out << "intercept " << format_double(lm->intercept) << '\n';
        out << "weights " << lm->weights.size() << '\n';
        for (double w : lm->weights) out << format_double(w) << '\n';
    } else if (const auto* gm = std::get_if<GradientBoostingModel>(&model.model)) {
        out << "initial_score " << format_double(gm->initial_score) << '\n';
        out << "learning_rate " << format_double(gm->learning_rate) << '\n';
        out << "n_stages " << gm->n_stages << '\n';
        out << "trees " << gm->trees.size() << '\n';
        for (const auto& t : gm->trees) detail::write_tree(out, t);
    } else if (const auto* em = std::get_if<EasyEnsembleModel>(&model.model)) {
        out << "n_learners " << em->members.size() << '\n';
        for (const auto& member : em->members) {
            out << "member " << member.model.members.size() << '\n';
            for (const auto& ab : member.model.members) {
                out << "alpha " << format_double(ab.alpha) << '\n';
                detail::write_tree(out, ab.stump);
            }
            out << "subset " << member.training_rows.size() << '\n';
            for (std::size_t i = 0; i < member.training_rows.size(); ++i)
                out << member.training_rows[i]
                    << (i + 1 == member.training_rows.size() ? '\n' : ' ');
            if (member.training_rows.empty()) out << '\n';
        }
    }
    out << "end\n";
    if (!out)
        throw data_error("IoFailure", "write failed for " + path.string());
}

inline TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw data_error("MissingFile", "cannot open model file " + path.string());
    detail::ModelReader r(in, path.string());

    long long version = r.read_int("rhythmo-model");
    if (version != detail::kModelFormatVersion)
        throw data_error("UnsupportedVersion",
                         path.string() + ": format version " + std::to_string(version) +
                             " not supported");

    TrainedModel model;
    Algorithm alg = algorithm_from_name(r.expect_key("algorithm"));
    model.kind = feature_kind_from_name(r.expect_key("feature_kind"));
    long long dim = r.read_int("feature_dim");
    if (dim <= 0)
        throw data_error("CorruptModel", path.string() + ": invalid feature dimension");
    model.feature_dim = static_cast<std::size_t>(dim);

    if (alg == Algorithm::logistic) {
        LogisticModel lm;
        lm.regularization_c = r.read_double("regularization_c");
        lm.intercept = r.read_double("intercept");
        long long n = r.read_int("weights");
        if (n != static_cast<long long>(model.feature_dim))
            throw data_error("CorruptModel", path.string() + ": weight count mismatch");
        lm.weights.resize(static_cast<std::size_t>(n));
        for (auto& w : lm.weights) w = r.parse_double(r.token());
        model.model = std::move(lm);
    } else if (alg == Algorithm::gbm) {
        GradientBoostingModel gm;
        gm.initial_score = r.read_double("initial_score");
        gm.learning_rate = r.read_double("learning_rate");
        gm.n_stages = static_cast<int>(r.read_int("n_stages"));
        gm.feature_dim = model.feature_dim;
        long long n_trees = r.read_int("trees");
        for (long long i = 0; i < n_trees; ++i) gm.trees.push_back(detail::read_tree(r));
        model.model = std::move(gm);
    } else {
        EasyEnsembleModel em;
        em.feature_dim = model.feature_dim;
        long long n_learners = r.read_int("n_learners");
        for (long long i = 0; i < n_learners; ++i) {
            EasyEnsembleMember member;
            member.model.feature_dim = model.feature_dim;
            long long n_members = r.read_int("member");
            for (long long j = 0; j < n_members; ++j) {
                AdaBoostMember ab;
                ab.alpha = r.read_double("alpha");
                ab.stump = detail::read_tree(r);
                member.model.members.push_back(std::move(ab));
            }
            long long n_subset = r.read_int("subset");
            member.training_rows.resize(static_cast<std::size_t>(n_subset));
            for (auto& row : member.training_rows)
                row = static_cast<std::uint32_t>(r.parse_double(r.token()));
            em.members.push_back(std::move(member));
        }
        model.model = std::move(em);
    }

    std::string tail = r.token();
    if (tail != "end")
        throw data_error("CorruptModel", path.string() + ": missing end marker");
    return model;
}

} // namespace rhythmo
