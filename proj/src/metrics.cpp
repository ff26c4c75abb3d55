#include "tsch/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "tsch/errors.hpp"

namespace tsch {

ConfusionMatrix confusion(const std::vector<bool>& flags, const std::vector<bool>& targets) {
    if (flags.size() != targets.size())
        throw DomainError("confusion: " + std::to_string(flags.size()) + " flags vs " +
                          std::to_string(targets.size()) + " targets");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (targets[i]) (flags[i] ? cm.tp : cm.fn)++;
        else            (flags[i] ? cm.fp : cm.tn)++;
    }
    return cm;
}

ConfusionMatrix confusion(const Eigen::Ref<const Eigen::VectorXd>& scores,
                          const Eigen::Ref<const Eigen::VectorXd>& targets, double threshold) {
    if (scores.size() != targets.size())
        throw DomainError("confusion: score/target length mismatch");
    ConfusionMatrix cm;
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        const bool flag = scores[i] >= threshold;
        if (targets[i] != 0.0) (flag ? cm.tp : cm.fn)++;
        else                   (flag ? cm.fp : cm.tn)++;
    }
    return cm;
}

MetricSet metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DomainError("metrics of an empty confusion matrix");
    auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    MetricSet m;
    m.accuracy = ratio(cm.tp + cm.tn, cm.total());
    m.precision = ratio(cm.tp, cm.tp + cm.fp);
    m.recall = ratio(cm.tp, cm.tp + cm.fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    return m;
}

namespace {

double auc_ranked(std::vector<std::pair<double, bool>>& v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::size_t n = v.size();
    std::size_t pos = 0;
    for (const auto& [_, t] : v) pos += t ? 1 : 0;
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0)
        throw DomainError("auc requires both classes in the targets");

    // Sum of positive ranks with ties averaged (Mann-Whitney U).
    double rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && v[j].first == v[i].first) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j); // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (v[k].second) rank_sum += avg_rank;
        i = j;
    }
    const double u = rank_sum - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1);
    return u / (static_cast<double>(pos) * static_cast<double>(neg));
}

} // namespace

double auc(const std::vector<double>& scores, const std::vector<bool>& targets) {
    if (scores.size() != targets.size()) throw DomainError("auc: length mismatch");
    std::vector<std::pair<double, bool>> v(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) v[i] = {scores[i], targets[i]};
    return auc_ranked(v);
}

double auc(const Eigen::Ref<const Eigen::VectorXd>& scores,
           const Eigen::Ref<const Eigen::VectorXd>& targets) {
    if (scores.size() != targets.size()) throw DomainError("auc: length mismatch");
    std::vector<std::pair<double, bool>> v(static_cast<std::size_t>(scores.size()));
    for (Eigen::Index i = 0; i < scores.size(); ++i)
        v[static_cast<std::size_t>(i)] = {scores[i], targets[i] != 0.0};
    return auc_ranked(v);
}

} // namespace tsch
