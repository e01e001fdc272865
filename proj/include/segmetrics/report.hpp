#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "segmetrics/consistency.hpp"
#include "segmetrics/core.hpp"
#include "segmetrics/ingest.hpp"

namespace segmetrics {

// Machine-readable run output. JSON layout is stable:
// {meta:{...}, groups:[{label,n,mean_isi,mean_iii,mean_obi,fsi,hi,
//  histogram:[...]}], consistency:{...}, filters:{stage1_dropped,
//  stage2_dropped,iterations}}
struct RunReport {
    std::map<std::string, std::string> meta;  // config echo
    std::string feature;
    std::vector<GroupReport> groups;
    std::optional<ConsistencyVerdict> consistency;
    FilterStats filters;
    double elapsed_seconds = 0.0;  // excluded from determinism hashing
};

std::string to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);

// Rebuilds the FSI/HI/mean-OBI index table of one report for the
// consistency checker.
IndexTable report_index_table(const RunReport& report);

std::string to_json(const ConsistencyVerdict& verdict);

void write_records_csv(const std::vector<IndexRecord>& records,
                       const std::string& path);
void write_histogram_csv(const std::vector<GroupReport>& groups,
                         const std::string& path);

}  // namespace segmetrics
