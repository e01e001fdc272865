#include "segmetrics/consistency.hpp"

#include <algorithm>
#include <numeric>

namespace segmetrics {

void IndexTable::validate() const {
    if (index_names.size() < 2)
        throw IncompleteTable("consistency compares at least 2 indexes");
    if (feature_values.size() < 2)
        throw IncompleteTable("consistency compares at least 2 feature values");
    if (values.size() != index_names.size())
        throw IncompleteTable("value matrix row count mismatch");
    for (const auto& row : values)
        if (row.size() != feature_values.size())
            throw IncompleteTable("value matrix has missing cells");
}

ConsistencyVerdict check_consistency(const IndexTable& table,
                                     double tie_tolerance) {
    table.validate();
    if (tie_tolerance < 0.0) throw Error("tie_tolerance must be >= 0");

    const std::size_t n = table.index_names.size();
    const std::size_t m = table.feature_values.size();

    ConsistencyVerdict verdict;
    for (std::size_t x = 0; x < m; ++x) {
        for (std::size_t y = x + 1; y < m; ++y) {
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = a + 1; b < n; ++b) {
                    const double da = table.values[a][x] - table.values[a][y];
                    const double db = table.values[b][x] - table.values[b][y];
                    const bool opposed =
                        (da > tie_tolerance && db < -tie_tolerance) ||
                        (da < -tie_tolerance && db > tie_tolerance);
                    if (opposed)
                        verdict.violations.push_back(
                            {table.feature_values[x], table.feature_values[y],
                             table.index_names[a], table.index_names[b], da,
                             db});
                }
            }
        }
    }
    verdict.consistent = verdict.violations.empty();

    verdict.rankings.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) {
                             return table.values[k][i] > table.values[k][j];
                         });
        for (std::size_t i : order)
            verdict.rankings[k].push_back(table.feature_values[i]);
    }
    return verdict;
}

}  // namespace segmetrics
