#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rhythmo/adaboost.hpp"
#include "rhythmo/error.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct EasyEnsembleMember {
    AdaBoostModel model;
    std::vector<std::uint32_t> training_rows; // audit trail
};

struct EasyEnsembleModel {
    std::vector<EasyEnsembleMember> members;
    std::size_t feature_dim = 0;
};

struct EasyEnsembleOptions {
    int n_learners = 10;
    AdaBoostOptions adaboost{};
};

// Each member trains AdaBoost on the full minority class plus a uniform
// without-replacement majority subset of minority size. Member seeds are
// derived from the master seed by index, so parallel and serial training
// agree.
inline EasyEnsembleModel train_easy_ensemble(const Matrix& X, const std::vector<int>& y,
                                             std::uint64_t seed,
                                             const EasyEnsembleOptions& opt = {}) {
    if (y.size() != X.rows)
        throw data_error("DimensionMismatch", "label length does not match row count");
    std::vector<std::uint32_t> class0, class1;
    for (std::size_t i = 0; i < y.size(); ++i)
        (y[i] == 1 ? class1 : class0).push_back(static_cast<std::uint32_t>(i));
    if (class0.empty() || class1.empty())
        throw data_error("SingleClassInput", "both classes must be present for training");

    const auto& minority = class1.size() <= class0.size() ? class1 : class0;
    const auto& majority = class1.size() <= class0.size() ? class0 : class1;

    EasyEnsembleModel model;
    model.feature_dim = X.cols;
    model.members.resize(static_cast<std::size_t>(opt.n_learners));

    for (int m = 0; m < opt.n_learners; ++m) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(m)));
        std::vector<std::uint32_t> pool(majority);
        rng.shuffle(pool);
        std::size_t take = std::min(minority.size(), pool.size());

        auto& member = model.members[static_cast<std::size_t>(m)];
        member.training_rows.assign(minority.begin(), minority.end());
        member.training_rows.insert(member.training_rows.end(), pool.begin(),
                                    pool.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(member.training_rows.begin(), member.training_rows.end());

        Matrix sub(member.training_rows.size(), X.cols);
        std::vector<int> sub_y(member.training_rows.size());
        for (std::size_t i = 0; i < member.training_rows.size(); ++i) {
            std::uint32_t r = member.training_rows[i];
            std::copy(X.row(r), X.row(r) + X.cols, sub.row(i));
            sub_y[i] = y[r];
        }
        member.model = train_adaboost(sub, sub_y, opt.adaboost);
    }
    return model;
}

// Fraction of members voting class 1; the hard label is fraction >= 0.5.
inline double predict_proba_easy(const EasyEnsembleModel& model, std::span<const double> x) {
    if (model.feature_dim != 0 && x.size() != model.feature_dim)
        throw data_error("DimensionMismatch", "feature length " + std::to_string(x.size()) +
                                                  " does not match model dimension " +
                                                  std::to_string(model.feature_dim));
    if (model.members.empty()) return 0.0;
    int votes = 0;
    for (const auto& m : model.members) votes += predict_adaboost(m.model, x);
    return static_cast<double>(votes) / static_cast<double>(model.members.size());
}

} // namespace rhythmo
