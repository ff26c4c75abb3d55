#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsch/energy.hpp"
#include "tsch/metrics.hpp"
#include "tsch/types.hpp"

namespace tsch {

// Everything evaluate produces for one link.
struct LinkReport {
    Edge link;
    int level = 0;
    std::uint64_t test_samples = 0;  // test segment length
    std::uint64_t window_count = 0;  // evaluated windows = test_samples - n_p
    int window_len = 890;
    double threshold = 0.5;
    double t_matrix_s = 0.0;
    ConfusionMatrix cm;
    MetricSet metric;
    std::optional<double> auc;
    double rho_max = 0.0;
    std::uint64_t rho_max_lag = 0;
    EnergyReport energy;
    std::string profile_name;
};

nlohmann::json to_json(const LinkReport& report);

// CSV tables mirroring the published layout: metrics rounded to 3 decimals,
// microwatts to 2; undefined ratios print as NA. JSON keeps full precision.
std::string metrics_csv(const std::vector<LinkReport>& reports);
std::string energy_csv(const std::vector<LinkReport>& reports);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);

} // namespace tsch
