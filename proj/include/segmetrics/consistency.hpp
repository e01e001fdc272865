#pragma once

#include <string>
#include <vector>

#include "segmetrics/core.hpp"

namespace segmetrics {

// Index-by-feature-value matrix: values[k][j] = index k on feature value j.
struct IndexTable {
    std::vector<std::string> index_names;
    std::vector<std::string> feature_values;
    std::vector<std::vector<double>> values;

    void validate() const;  // throws IncompleteTable
};

struct ConsistencyViolation {
    std::string feature_a;
    std::string feature_b;
    std::string index_a;
    std::string index_b;
    // Signed orderings feature_a vs feature_b under each index.
    double delta_a;
    double delta_b;
};

struct ConsistencyVerdict {
    bool consistent = true;
    std::vector<ConsistencyViolation> violations;
    // rankings[k] = feature values sorted descending by index k.
    std::vector<std::vector<std::string>> rankings;
};

// A violation is any (feature pair, index pair) where the two indexes
// order the pair strictly opposite ways; ties within tie_tolerance are
// compatible with either order.
ConsistencyVerdict check_consistency(const IndexTable& table,
                                     double tie_tolerance = 0.0);

}  // namespace segmetrics
