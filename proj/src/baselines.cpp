#include "segmetrics/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace segmetrics {

MixingMatrix build_mixing_matrix(const InteractionGraph& graph,
                                 const AttributeTable& attrs,
                                 const std::string& feature,
                                 bool unique_ties) {
    if (graph.edges.empty()) throw EmptyGraph();

    // Label every node, collecting labels in sorted order.
    std::map<std::string, std::size_t> label_index;
    std::vector<std::string> node_label(graph.node_count());
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        const auto v = attrs.value(graph.node_ids[i], feature);
        if (!v)
            throw UnlabeledEndpoint("node " + graph.node_ids[i] +
                                    " has no value for " + feature);
        node_label[i] = *v;
        label_index.emplace(*v, 0);
    }
    std::size_t next = 0;
    for (auto& [label, idx] : label_index) idx = next++;
    const std::size_t m = label_index.size();

    MixingMatrix out;
    out.labels.resize(m);
    for (const auto& [label, idx] : label_index) out.labels[idx] = label;
    out.group_sizes.assign(m, 0);
    for (const auto& label : node_label)
        ++out.group_sizes[label_index[label]];

    std::vector<std::vector<double>> weight(m, std::vector<double>(m, 0.0));
    double total = 0.0;
    for (const auto& e : graph.edges) {
        const std::size_t a = label_index[node_label[e.u]];
        const std::size_t b = label_index[node_label[e.v]];
        const double w = unique_ties ? 1.0 : static_cast<double>(e.weight);
        weight[a][b] += w;
        if (a != b) weight[b][a] += w;
        total += w;
    }
    out.total_edges = graph.edges.size();
    out.edge_fractions = std::move(weight);
    for (auto& row : out.edge_fractions)
        for (double& f : row) f /= total;
    out.validate();
    return out;
}

double freeman_index(const MixingMatrix& m, const std::string& group) {
    const MixingMatrix r = m.one_vs_rest(group);
    const double n_a = static_cast<double>(r.group_sizes[0]);
    const double n_b = static_cast<double>(r.group_sizes[1]);
    if (n_a == 0.0 || n_b == 0.0)
        throw DegenerateGroups("one-vs-rest split has an empty side");
    const double n = n_a + n_b;
    const double expected = 2.0 * n_a * n_b / (n * (n - 1.0));
    if (expected == 0.0)
        throw DegenerateGroups("expected cross-tie fraction is zero");
    const double x = r.edge_fractions[0][1];
    return 1.0 - x / expected;
}

double coleman_hi(const MixingMatrix& m, const std::string& group) {
    const MixingMatrix r = m.one_vs_rest(group);
    const double n_a = static_cast<double>(r.group_sizes[0]);
    const double n_b = static_cast<double>(r.group_sizes[1]);
    if (n_b == 0.0)
        throw DegenerateGroups("group covers all nodes; N_A must be < 1");
    const double p_aa = r.edge_fractions[0][0];
    const double p_ab = r.edge_fractions[0][1];
    const double denom = 2.0 * p_aa + p_ab;
    if (denom == 0.0)
        throw IsolatedGroup("group " + group + " has no edge endpoints");
    const double t_aa = 2.0 * p_aa / denom;
    const double rel = n_a / (n_a + n_b);
    return (t_aa - rel) / (1.0 - rel);
}

double dissimilarity_index(const UnitPopulations& units) {
    if (units.units.empty()) throw Error("no units");
    double total_g = 0.0, total_o = 0.0;
    for (const auto& u : units.units) {
        if (u.group < 0.0 || u.other < 0.0)
            throw Error("negative unit population");
        total_g += u.group;
        total_o += u.other;
    }
    if (total_g <= 0.0 || total_o <= 0.0)
        throw EmptyGroup("both group totals must be positive");
    double d = 0.0;
    for (const auto& u : units.units)
        d += std::abs(u.group / total_g - u.other / total_o);
    return d / 2.0;
}

}  // namespace segmetrics
