#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "segmetrics/core.hpp"
#include "segmetrics/ingest.hpp"

namespace segmetrics {

struct SynthConfig {
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> group_sizes;
    std::vector<double> within_prob;  // per group
    double mean_degree = 10.0;
    std::string feature = "gender";  // attribute column carrying the label
};

// Exact realized counts, the oracle side for generator-based tests.
struct SynthLedger {
    std::uint64_t call_events = 0;   // rows a CSV dump would contain
    std::uint64_t distinct_pairs = 0;
    std::uint64_t nodes_with_edges = 0;
    std::vector<std::uint64_t> within_ties;  // per group, weighted
    std::uint64_t cross_ties = 0;            // weighted
};

struct SynthOutput {
    InteractionGraph graph;
    AttributeTable attributes;
    std::vector<std::string> node_group;  // per dense node index
    SynthLedger ledger;
};

// Deterministic for a fixed config. Each call event picks a source node
// uniformly; with its group's within_prob the partner is uniform in-group,
// otherwise uniform out-of-group.
SynthOutput generate(const SynthConfig& config);

// Writes the CSV pair ingestion consumes.
void write_cdr_csv(const SynthOutput& out, const std::string& path);
void write_attributes_csv(const SynthOutput& out, const std::string& path,
                          const std::string& feature);

// The ten-node worked-example network (six females F1..F6, four males
// M1..M4) with population shares (0.6, 0.4) and the published index
// values as the regression target.
struct Fig6Fixture {
    InteractionGraph graph;
    AttributeTable attributes;
    GroupSpace group_space;
    std::vector<IndexRecord> expected;  // published values, F1..F6,M1..M4
};

Fig6Fixture fig6_fixture();

}  // namespace segmetrics
