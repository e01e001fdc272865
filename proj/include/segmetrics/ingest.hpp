#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "segmetrics/core.hpp"

namespace segmetrics {

// Undirected weighted interaction graph with dense node indices.
// Edges are stored once with u < v; weight = call-record multiplicity.
struct InteractionGraph {
    struct Edge {
        std::uint32_t u;
        std::uint32_t v;
        std::uint32_t weight;
    };

    std::vector<std::string> node_ids;  // dense index -> external id
    std::vector<Edge> edges;            // sorted by (u,v)

    std::size_t node_count() const { return node_ids.size(); }
    std::size_t edge_count() const { return edges.size(); }

    // Distinct-partner degree per node.
    std::vector<std::uint32_t> degrees() const;

    // Canonical form over external ids; equal for any row order of the
    // same input.
    bool same_graph(const InteractionGraph& other) const;
};

struct ParseStats {
    std::uint64_t rows = 0;
    std::uint64_t malformed = 0;
    std::uint64_t self_loops = 0;
};

// Parses CDR CSV (header caller_id,callee_id,timestamp,cell). Direction is
// folded; self-loops are counted malformed and skipped. Throws
// TooManyMalformedRows when malformed rows exceed 1% of the input.
InteractionGraph parse_cdr(std::istream& in, ParseStats* stats = nullptr);
InteractionGraph parse_cdr_file(const std::string& path,
                                ParseStats* stats = nullptr);

struct AttributeRow {
    std::optional<std::string> gender;
    std::optional<int> birth_year;
    std::optional<std::string> language;
    std::optional<std::string> county;
};

class AttributeTable {
  public:
    void insert(const std::string& id, AttributeRow row);

    // Feature value for an id: gender | age_group | language | county.
    // age_group is derived from birth_year via encode_age.
    std::optional<std::string> value(const std::string& id,
                                     const std::string& feature) const;

    // Known-value shares for a feature (sample marginals), label-sorted.
    GroupSpace sample_group_space(const std::string& feature) const;

    std::size_t size() const { return rows_.size(); }
    int reference_year() const { return reference_year_; }
    void set_reference_year(int year) { reference_year_ = year; }

  private:
    std::unordered_map<std::string, AttributeRow> rows_;
    int reference_year_ = 2017;
};

// Attributes CSV: header id,gender,birth_year,language,county; empty
// field = unknown.
AttributeTable parse_attributes(std::istream& in);
AttributeTable parse_attributes_file(const std::string& path);

// Census file rows feature,value,share; shares per feature sum to 1.
GroupSpace census_group_space(const std::string& path,
                              const std::string& feature);

// Age in (0,100] mapped onto (0,14], (14,24], (24,54], (54,64], (64,100].
std::string encode_age(int birth_year, int reference_year);
const std::vector<std::string>& age_group_labels();

struct FilterStats {
    std::uint64_t stage1_dropped = 0;
    std::uint64_t stage2_dropped = 0;
    std::uint32_t iterations = 0;
};

// Two-stage minimum-connection filter. Stage 1 drops nodes with fewer
// than k distinct partners; stage 2 (when a feature is given) drops nodes
// with fewer than k partners whose feature is known. Runs to fixpoint
// unless single_pass.
InteractionGraph filter_min_connections(const InteractionGraph& graph,
                                        std::uint32_t k,
                                        const AttributeTable* attrs,
                                        const std::string& feature,
                                        bool single_pass = false,
                                        FilterStats* stats = nullptr);

// |sample - population| / min(sample, population) * 100.
double census_difference(double sample_pct, double population_pct);

// Builds per-node contact profiles over `feature`. Nodes without a known
// feature value, or with no labeled counterparts, are skipped (the latter
// counted in *skipped when given).
std::vector<Individual> contact_profiles(const InteractionGraph& graph,
                                         const AttributeTable& attrs,
                                         const std::string& feature,
                                         const GroupSpace& gs,
                                         bool unique_ties = false,
                                         std::uint64_t* skipped = nullptr);

}  // namespace segmetrics
