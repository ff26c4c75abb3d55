#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace tsch {

struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
    std::uint64_t positives() const { return tp + fn; }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp; fn += o.fn; fp += o.fp; tn += o.tn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;
};

// Tally predicted-used flags against actual usage; DomainError on length
// mismatch.
ConfusionMatrix confusion(const std::vector<bool>& flags, const std::vector<bool>& targets);
ConfusionMatrix confusion(const Eigen::Ref<const Eigen::VectorXd>& scores,
                          const Eigen::Ref<const Eigen::VectorXd>& targets, double threshold);

// Ratios with a zero denominator come back empty rather than as silent zeros.
struct MetricSet {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

MetricSet metrics(const ConfusionMatrix& cm); // DomainError when total() == 0

// Probability a random positive outscores a random negative, ties at 1/2
// (the rank statistic). DomainError unless both classes are present.
double auc(const std::vector<double>& scores, const std::vector<bool>& targets);
double auc(const Eigen::Ref<const Eigen::VectorXd>& scores,
           const Eigen::Ref<const Eigen::VectorXd>& targets);

} // namespace tsch
