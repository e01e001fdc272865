#include "segmetrics/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace segmetrics {

GroupSpace::GroupSpace(std::vector<std::string> labels,
                       std::vector<double> alpha)
    : labels_(std::move(labels)), alpha_(std::move(alpha)) {
    if (labels_.size() < 2)
        throw DimensionMismatch("GroupSpace needs at least 2 groups");
    if (labels_.size() != alpha_.size())
        throw DimensionMismatch("labels/alpha size mismatch");
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size())
        throw Error("duplicate group label");
    double sum = 0.0;
    for (double a : alpha_) {
        if (!(a > 0.0))
            throw Error("population share must be positive");
        sum += a;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw Error("population shares must sum to 1");
    min_alpha_ = *std::min_element(alpha_.begin(), alpha_.end());
}

std::size_t GroupSpace::index_of(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw UnknownGroupValue("unknown group label: " + label);
}

std::optional<std::size_t> GroupSpace::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

std::uint64_t ContactProfile::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<double> proportions(const ContactProfile& profile) {
    const std::uint64_t total = profile.total();
    if (total == 0) throw ZeroContacts();
    std::vector<double> p(profile.counts.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = static_cast<double>(profile.counts[i]) /
               static_cast<double>(total);
    return p;
}

void MixingMatrix::validate() const {
    const std::size_t n = labels.size();
    if (group_sizes.size() != n || edge_fractions.size() != n)
        throw DimensionMismatch("mixing matrix shape mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (edge_fractions[i].size() != n)
            throw DimensionMismatch("mixing matrix row size mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            if (edge_fractions[i][j] < 0.0)
                throw Error("negative edge fraction");
            if (std::abs(edge_fractions[i][j] - edge_fractions[j][i]) >
                kSumTolerance)
                throw Error("mixing matrix not symmetric");
            if (j >= i) sum += edge_fractions[i][j];
        }
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw Error("edge fractions must sum to 1");
}

MixingMatrix MixingMatrix::one_vs_rest(const std::string& group) const {
    auto it = std::find(labels.begin(), labels.end(), group);
    if (it == labels.end())
        throw UnknownGroupValue("unknown group label: " + group);
    const std::size_t g = static_cast<std::size_t>(it - labels.begin());
    const std::size_t n = labels.size();

    MixingMatrix out;
    out.labels = {group, "rest"};
    out.total_edges = total_edges;
    std::uint64_t rest_nodes = 0;
    double p_ab = 0.0, p_bb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != g) rest_nodes += group_sizes[i];
        for (std::size_t j = i; j < n; ++j) {
            const double f = edge_fractions[i][j];
            if (i == g && j == g) continue;
            if (i == g || j == g)
                p_ab += f;
            else
                p_bb += f;
        }
    }
    out.group_sizes = {group_sizes[g], rest_nodes};
    out.edge_fractions = {{edge_fractions[g][g], p_ab}, {p_ab, p_bb}};
    return out;
}

}  // namespace segmetrics
