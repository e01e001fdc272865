#include "segmetrics/report.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace segmetrics {

namespace {

using nlohmann::json;

json verdict_to_json(const ConsistencyVerdict& v) {
    json j;
    j["consistent"] = v.consistent;
    j["violations"] = json::array();
    for (const auto& viol : v.violations) {
        j["violations"].push_back({{"feature_a", viol.feature_a},
                                   {"feature_b", viol.feature_b},
                                   {"index_a", viol.index_a},
                                   {"index_b", viol.index_b},
                                   {"delta_a", viol.delta_a},
                                   {"delta_b", viol.delta_b}});
    }
    j["rankings"] = v.rankings;
    return j;
}

ConsistencyVerdict verdict_from_json(const json& j) {
    ConsistencyVerdict v;
    v.consistent = j.at("consistent").get<bool>();
    for (const auto& viol : j.at("violations")) {
        v.violations.push_back({viol.at("feature_a").get<std::string>(),
                                viol.at("feature_b").get<std::string>(),
                                viol.at("index_a").get<std::string>(),
                                viol.at("index_b").get<std::string>(),
                                viol.at("delta_a").get<double>(),
                                viol.at("delta_b").get<double>()});
    }
    v.rankings = j.at("rankings").get<std::vector<std::vector<std::string>>>();
    return v;
}

std::string format4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string to_json(const RunReport& report) {
    json j;
    j["meta"] = report.meta;
    j["meta"]["feature"] = report.feature;
    j["groups"] = json::array();
    for (const auto& g : report.groups) {
        json jg;
        jg["label"] = g.group;
        jg["n"] = g.member_count;
        jg["mean_isi"] = g.mean_isi ? json(*g.mean_isi) : json(nullptr);
        jg["mean_iii"] = g.mean_iii ? json(*g.mean_iii) : json(nullptr);
        jg["mean_obi"] = g.mean_obi ? json(*g.mean_obi) : json(nullptr);
        jg["fsi"] = g.fsi ? json(*g.fsi) : json(nullptr);
        jg["hi"] = g.hi ? json(*g.hi) : json(nullptr);
        jg["histogram"] = g.obi_histogram;
        j["groups"].push_back(std::move(jg));
    }
    j["consistency"] = report.consistency
                           ? verdict_to_json(*report.consistency)
                           : json(nullptr);
    j["filters"] = {{"stage1_dropped", report.filters.stage1_dropped},
                    {"stage2_dropped", report.filters.stage2_dropped},
                    {"iterations", report.filters.iterations}};
    j["timing"] = {{"elapsed_seconds", report.elapsed_seconds}};
    return j.dump(2);
}

RunReport report_from_json(const std::string& text) {
    const json j = json::parse(text);
    RunReport report;
    for (const auto& [key, value] : j.at("meta").items()) {
        if (key == "feature")
            report.feature = value.get<std::string>();
        else
            report.meta[key] = value.get<std::string>();
    }
    for (const auto& jg : j.at("groups")) {
        GroupReport g;
        g.group = jg.at("label").get<std::string>();
        g.member_count = jg.at("n").get<std::uint64_t>();
        auto opt = [&](const char* key) -> std::optional<double> {
            if (jg.at(key).is_null()) return std::nullopt;
            return jg.at(key).get<double>();
        };
        g.mean_isi = opt("mean_isi");
        g.mean_iii = opt("mean_iii");
        g.mean_obi = opt("mean_obi");
        g.fsi = opt("fsi");
        g.hi = opt("hi");
        g.obi_histogram = jg.at("histogram").get<std::vector<double>>();
        report.groups.push_back(std::move(g));
    }
    if (!j.at("consistency").is_null())
        report.consistency = verdict_from_json(j.at("consistency"));
    const auto& jf = j.at("filters");
    report.filters.stage1_dropped =
        jf.at("stage1_dropped").get<std::uint64_t>();
    report.filters.stage2_dropped =
        jf.at("stage2_dropped").get<std::uint64_t>();
    report.filters.iterations = jf.at("iterations").get<std::uint32_t>();
    if (j.contains("timing"))
        report.elapsed_seconds =
            j.at("timing").at("elapsed_seconds").get<double>();
    return report;
}

IndexTable report_index_table(const RunReport& report) {
    IndexTable table;
    table.index_names = {"FSI", "HI", "OBI"};
    table.values.resize(3);
    for (const auto& g : report.groups) {
        if (!g.fsi || !g.hi || !g.mean_obi)
            throw IncompleteTable("group " + g.group +
                                  " lacks an index value");
        table.feature_values.push_back(g.group);
        table.values[0].push_back(*g.fsi);
        table.values[1].push_back(*g.hi);
        table.values[2].push_back(*g.mean_obi);
    }
    table.validate();
    return table;
}

std::string to_json(const ConsistencyVerdict& verdict) {
    return verdict_to_json(verdict).dump(2);
}

void write_records_csv(const std::vector<IndexRecord>& records,
                       const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << "id,group,isi,iii,obi\n";
    for (const auto& r : records)
        f << r.id << ',' << r.group << ',' << format4(r.isi) << ','
          << format4(r.iii) << ',' << format4(r.obi) << '\n';
}

void write_histogram_csv(const std::vector<GroupReport>& groups,
                         const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << "group,bin_low,bin_high,mass\n";
    for (const auto& g : groups) {
        const std::size_t bins = g.obi_histogram.size();
        for (std::size_t b = 0; b < bins; ++b) {
            const double width = 2.0 / static_cast<double>(bins);
            f << g.group << ',' << format4(-1.0 + width * b) << ','
              << format4(-1.0 + width * (b + 1)) << ','
              << format4(g.obi_histogram[b]) << '\n';
        }
    }
}

}  // namespace segmetrics
