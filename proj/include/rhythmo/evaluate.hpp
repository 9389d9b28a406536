#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <numeric>
#include <tuple>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/model.hpp"
#include "rhythmo/rng.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct SplitPlan {
    std::vector<std::string> train_session_ids;
    std::vector<std::string> test_session_ids;
    double fraction = 0.8;
    std::uint64_t seed = 0;
};

// Record-level uniform random split; re-drawn (up to 100 times) until the
// train side carries both classes.
inline SplitPlan split_records(const std::vector<std::pair<std::string, int>>& records,
                               double fraction, std::uint64_t seed) {
    if (records.size() < 2)
        throw data_error("TooFewRecords", "need at least 2 records to split");
    bool has0 = false, has1 = false;
    for (const auto& [id, label] : records) (label == 1 ? has1 : has0) = true;
    if (!has0 || !has1)
        throw data_error("SingleClassInput", "both classes must be present to split");

    std::size_t n_train = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(records.size()) + 0.5));
    n_train = std::min(std::max<std::size_t>(n_train, 1), records.size() - 1);

    Rng rng(seed);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::vector<std::size_t> order(records.size());
        std::iota(order.begin(), order.end(), 0u);
        rng.shuffle(order);

        bool train0 = false, train1 = false;
        for (std::size_t i = 0; i < n_train; ++i)
            (records[order[i]].second == 1 ? train1 : train0) = true;
        if (!train0 || !train1) continue;

        SplitPlan plan;
        plan.fraction = fraction;
        plan.seed = seed;
        for (std::size_t i = 0; i < records.size(); ++i)
            (i < n_train ? plan.train_session_ids : plan.test_session_ids)
                .push_back(records[order[i]].first);
        std::sort(plan.train_session_ids.begin(), plan.train_session_ids.end());
        std::sort(plan.test_session_ids.begin(), plan.test_session_ids.end());
        return plan;
    }
    throw data_error("SingleClassTrain",
                     "could not draw a train split containing both classes in 100 attempts");
}

// Group-aware split: all sessions of one person land on the same side.
// Groups are split 80/20 by group count; a group's label is 1 if any of
// its records is class 1.
inline SplitPlan split_records_by_person(
    const std::vector<std::tuple<std::string, std::string, int>>& records, // session, person, label
    double fraction, std::uint64_t seed) {
    std::map<std::string, std::pair<std::vector<std::string>, int>> groups;
    for (const auto& [session, person, label] : records) {
        auto& g = groups[person];
        g.first.push_back(session);
        g.second = std::max(g.second, label);
    }
    std::vector<std::pair<std::string, int>> group_rows;
    for (const auto& [person, g] : groups) group_rows.emplace_back(person, g.second);
    SplitPlan group_plan = split_records(group_rows, fraction, seed);

    SplitPlan plan;
    plan.fraction = fraction;
    plan.seed = seed;
    for (const auto& person : group_plan.train_session_ids)
        for (const auto& session : groups[person].first)
            plan.train_session_ids.push_back(session);
    for (const auto& person : group_plan.test_session_ids)
        for (const auto& session : groups[person].first)
            plan.test_session_ids.push_back(session);
    std::sort(plan.train_session_ids.begin(), plan.train_session_ids.end());
    std::sort(plan.test_session_ids.begin(), plan.test_session_ids.end());
    return plan;
}

struct RecordScore {
    double mean_label = 0.0; // primary ROC score: mean of per-part hard labels
    double mean_proba = 0.0; // secondary score: mean per-part probability
    int label = 0;           // half-up rounded mean_label
};

// Segment voting: per-part hard labels averaged; the unrounded mean is the
// ROC score, the label rounds half-up (0.5 -> 1).
inline RecordScore record_score(const TrainedModel& model,
                                const std::vector<std::vector<double>>& parts) {
    if (parts.empty())
        throw data_error("EmptyRecord", "record has no feature parts to score");
    RecordScore rs;
    for (const auto& part : parts) {
        double p = model.predict_proba(part);
        rs.mean_proba += p;
        rs.mean_label += p >= 0.5 ? 1.0 : 0.0;
    }
    rs.mean_label /= static_cast<double>(parts.size());
    rs.mean_proba /= static_cast<double>(parts.size());
    rs.label = rs.mean_label >= 0.5 ? 1 : 0;
    return rs;
}

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocResult {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

// Threshold sweep over distinct scores descending; tied scores collapse to
// a single vertex; AUC by the trapezoidal rule.
inline RocResult roc_curve(const std::vector<double>& scores, const std::vector<int>& truth) {
    if (scores.size() != truth.size())
        throw data_error("LengthMismatch", "scores and truth differ in length");
    std::size_t n_pos = 0, n_neg = 0;
    for (int t : truth) (t == 1 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw data_error("SingleClassTruth", "both classes must be present in truth");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocResult roc;
    roc.points.push_back({0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (truth[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        double fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
        double tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
        roc.points.push_back({fpr, tpr});
        roc.auc += 0.5 * (fpr - prev_fpr) * (tpr + prev_tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
    }
    return roc;
}

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    bool zero_denominator = false;
};

struct Confusion {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

struct EvalReport {
    std::vector<RocPoint> roc_points;
    double auc = 0.0;
    double auc_proba = 0.0; // from the mean per-part probability score
    ClassMetrics per_class[2];
    Confusion confusion;
    double accuracy = 0.0;
};

inline void fill_precision_recall(EvalReport& report, const std::vector<int>& predicted,
                                  const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw data_error("LengthMismatch", "predicted and truth differ in length");
    if (predicted.empty())
        throw data_error("EmptyInput", "nothing to evaluate");

    Confusion& c = report.confusion;
    c = {};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1)
            (predicted[i] == 1 ? c.tp : c.fn)++;
        else
            (predicted[i] == 1 ? c.fp : c.tn)++;
    }
    report.accuracy =
        static_cast<double>(c.tp + c.tn) / static_cast<double>(predicted.size());

    auto metrics = [](std::size_t tp, std::size_t fp, std::size_t fn, std::size_t support) {
        ClassMetrics m;
        m.support = support;
        if (tp + fp == 0) {
            m.zero_denominator = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.zero_denominator = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        if (m.precision + m.recall > 0.0)
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        return m;
    };
    report.per_class[0] = metrics(c.tn, c.fn, c.fp, c.tn + c.fp);
    report.per_class[1] = metrics(c.tp, c.fp, c.fn, c.tp + c.fn);
}

inline EvalReport evaluate_predictions(const std::vector<double>& scores,
                                       const std::vector<double>& proba_scores,
                                       const std::vector<int>& predicted,
                                       const std::vector<int>& truth) {
    EvalReport report;
    RocResult roc = roc_curve(scores, truth);
    report.roc_points = std::move(roc.points);
    report.auc = roc.auc;
    report.auc_proba = roc_curve(proba_scores, truth).auc;
    fill_precision_recall(report, predicted, truth);
    return report;
}

inline std::string format_report(const EvalReport& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "auc            " << r.auc << "\n";
    out << "auc_proba      " << r.auc_proba << "\n";
    out << "accuracy       " << r.accuracy << "\n";
    out << "class  precision  recall     f1         support\n";
    for (int cls = 0; cls < 2; ++cls) {
        const auto& m = r.per_class[cls];
        out << cls << "      " << std::setw(9) << m.precision << "  " << std::setw(9) << m.recall
            << "  " << std::setw(9) << m.f1 << "  " << std::setw(7) << m.support
            << (m.zero_denominator ? "  (zero denominator)" : "") << "\n";
    }
    out << "confusion tp=" << r.confusion.tp << " fp=" << r.confusion.fp
        << " tn=" << r.confusion.tn << " fn=" << r.confusion.fn << "\n";
    return out.str();
}

// Comparison rows sorted by AUC descending; equal AUCs keep name order.
inline std::vector<std::pair<std::string, const EvalReport*>> compare_models(
    const std::vector<std::pair<std::string, EvalReport>>& reports) {
    std::vector<std::pair<std::string, const EvalReport*>> rows;
    rows.reserve(reports.size());
    for (const auto& [name, rep] : reports) rows.emplace_back(name, &rep);
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second->auc != b.second->auc) return a.second->auc > b.second->auc;
        return a.first < b.first;
    });
    return rows;
}

inline std::string format_comparison(
    const std::vector<std::pair<std::string, const EvalReport*>>& rows) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "model                      auc      accuracy\n";
    for (const auto& [name, rep] : rows) {
        out << name;
        for (std::size_t i = name.size(); i < 27; ++i) out << ' ';
        out << rep->auc << "   " << rep->accuracy << "\n";
    }
    return out.str();
}

} // namespace rhythmo
