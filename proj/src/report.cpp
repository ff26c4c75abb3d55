#include "tsch/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsch/errors.hpp"

namespace tsch {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : "NA";
}

} // namespace

json to_json(const LinkReport& r) {
    json j;
    j["link"] = {{"from", r.link.from}, {"to", r.link.to}};
    j["level"] = r.level;
    j["window_len"] = r.window_len;
    j["test_samples"] = r.test_samples;
    j["window_count"] = r.window_count;
    j["threshold"] = r.threshold;
    j["t_matrix_s"] = r.t_matrix_s;
    j["confusion"] = {{"tp", r.cm.tp}, {"fn", r.cm.fn}, {"fp", r.cm.fp}, {"tn", r.cm.tn}};
    j["metrics"] = {{"accuracy", opt(r.metric.accuracy)},
                    {"precision", opt(r.metric.precision)},
                    {"recall", opt(r.metric.recall)},
                    {"f1", opt(r.metric.f1)},
                    {"auc", opt(r.auc)}};
    j["autocorrelation"] = {{"rho_max", r.rho_max}, {"rho_max_lag", r.rho_max_lag}};
    j["energy"] = {{"profile", r.profile_name},
                   {"p_tx_w", r.energy.p_tx},
                   {"p_rx_w", r.energy.p_rx},
                   {"p_listen_w", r.energy.p_listen},
                   {"p_listen_no_ml_w", r.energy.p_listen_no_ml}};
    return j;
}

std::string metrics_csv(const std::vector<LinkReport>& reports) {
    std::ostringstream oss;
    oss << "link,level,tp,fn,fp,tn,rho_max,accuracy,precision,recall,f1,auc\n";
    for (const LinkReport& r : reports) {
        oss << r.link.name() << ',' << r.level << ',' << r.cm.tp << ',' << r.cm.fn << ','
            << r.cm.fp << ',' << r.cm.tn << ',' << fixed(r.rho_max, 3) << ','
            << opt_fixed(r.metric.accuracy, 3) << ',' << opt_fixed(r.metric.precision, 3) << ','
            << opt_fixed(r.metric.recall, 3) << ',' << opt_fixed(r.metric.f1, 3) << ','
            << opt_fixed(r.auc, 3) << '\n';
    }
    return oss.str();
}

std::string energy_csv(const std::vector<LinkReport>& reports) {
    std::ostringstream oss;
    oss << "link,level,profile,p_tx_uw,p_rx_uw,p_listen_uw,p_listen_no_ml_uw\n";
    for (const LinkReport& r : reports) {
        oss << r.link.name() << ',' << r.level << ',' << r.profile_name << ','
            << fixed(r.energy.p_tx * 1e6, 2) << ',' << fixed(r.energy.p_rx * 1e6, 2) << ','
            << fixed(r.energy.p_listen * 1e6, 2) << ','
            << fixed(r.energy.p_listen_no_ml * 1e6, 2) << '\n';
    }
    return oss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing: " + path);
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace tsch
