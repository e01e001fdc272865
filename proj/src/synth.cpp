#include "segmetrics/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <tuple>
#include <unordered_map>

namespace segmetrics {

namespace {

std::string node_id(std::uint64_t index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%08llu",
                  static_cast<unsigned long long>(index));
    return buf;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
    const std::size_t groups = config.group_sizes.size();
    if (groups < 2) throw Error("need at least 2 groups");
    if (config.within_prob.size() != groups)
        throw Error("within_prob size mismatch");
    for (double p : config.within_prob)
        if (p < 0.0 || p > 1.0) throw Error("within_prob outside [0,1]");
    for (std::uint64_t s : config.group_sizes)
        if (s < 1) throw Error("group sizes must be >= 1");
    if (!(config.mean_degree > 0.0)) throw Error("mean_degree must be > 0");

    std::uint64_t n = 0;
    std::vector<std::uint64_t> group_start(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        group_start[g] = n;
        n += config.group_sizes[g];
    }

    SynthOutput out;
    out.node_group.resize(n);
    out.graph.node_ids.resize(n);
    for (std::size_t g = 0; g < groups; ++g) {
        const std::string label = "g" + std::to_string(g + 1);
        for (std::uint64_t i = 0; i < config.group_sizes[g]; ++i) {
            const std::uint64_t idx = group_start[g] + i;
            out.node_group[idx] = label;
            out.graph.node_ids[idx] = node_id(idx);  // id order = index order
            AttributeRow row;
            row.gender = label;
            out.attributes.insert(out.graph.node_ids[idx], std::move(row));
        }
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> any_node(0, n - 1);

    const auto events = static_cast<std::uint64_t>(
        std::llround(config.mean_degree * static_cast<double>(n) / 2.0));
    std::unordered_map<std::uint64_t, std::uint32_t> weights;
    weights.reserve(events);
    out.ledger.within_ties.assign(groups, 0);

    auto group_of = [&](std::uint64_t node) {
        std::size_t g = groups - 1;
        while (group_start[g] > node) --g;
        return g;
    };

    for (std::uint64_t e = 0; e < events; ++e) {
        const std::uint64_t u = any_node(rng);
        const std::size_t gu = group_of(u);
        std::uint64_t v;
        const bool within = coin(rng) < config.within_prob[gu];
        if (within) {
            if (config.group_sizes[gu] < 2) continue;  // no in-group partner
            std::uniform_int_distribution<std::uint64_t> pick(
                0, config.group_sizes[gu] - 2);
            v = group_start[gu] + pick(rng);
            if (v >= u) ++v;  // skip self
        } else {
            std::uniform_int_distribution<std::uint64_t> pick(
                0, n - config.group_sizes[gu] - 1);
            std::uint64_t r = pick(rng);
            // Map [0, n - |gu|) onto nodes outside gu.
            v = r < group_start[gu] ? r : r + config.group_sizes[gu];
        }
        if (within)
            ++out.ledger.within_ties[gu];
        else
            ++out.ledger.cross_ties;
        ++out.ledger.call_events;
        std::uint64_t a = std::min(u, v), b = std::max(u, v);
        ++weights[(a << 32) | b];
    }

    out.graph.edges.reserve(weights.size());
    for (const auto& [key, w] : weights)
        out.graph.edges.push_back({static_cast<std::uint32_t>(key >> 32),
                                   static_cast<std::uint32_t>(key), w});
    std::sort(out.graph.edges.begin(), out.graph.edges.end(),
              [](const InteractionGraph::Edge& a,
                 const InteractionGraph::Edge& b) {
                  return std::tie(a.u, a.v) < std::tie(b.u, b.v);
              });
    out.ledger.distinct_pairs = out.graph.edges.size();
    const auto deg = out.graph.degrees();
    out.ledger.nodes_with_edges = static_cast<std::uint64_t>(
        std::count_if(deg.begin(), deg.end(),
                      [](std::uint32_t d) { return d > 0; }));
    return out;
}

void write_cdr_csv(const SynthOutput& out, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << "caller_id,callee_id,timestamp,cell\n";
    std::uint64_t ts = 1494201600;  // arbitrary epoch base
    for (const auto& e : out.graph.edges)
        for (std::uint32_t r = 0; r < e.weight; ++r)
            f << out.graph.node_ids[e.u] << ',' << out.graph.node_ids[e.v]
              << ',' << ts++ << ",c1\n";
}

void write_attributes_csv(const SynthOutput& out, const std::string& path,
                          const std::string& feature) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << "id,gender,birth_year,language,county\n";
    for (std::size_t i = 0; i < out.graph.node_ids.size(); ++i) {
        const std::string& label = out.node_group[i];
        f << out.graph.node_ids[i] << ',';
        if (feature == "gender")
            f << label << ",,,";
        else if (feature == "language")
            f << ',' << ',' << label << ',';
        else if (feature == "county")
            f << ",,," << label;
        else
            throw Error("unsupported synth feature: " + feature);
        f << '\n';
    }
}

Fig6Fixture fig6_fixture() {
    Fig6Fixture fx{.graph = {},
                   .attributes = {},
                   .group_space = GroupSpace({"female", "male"}, {0.6, 0.4}),
                   .expected = {}};
    fx.graph.node_ids = {"F1", "F2", "F3", "F4", "F5",
                         "F6", "M1", "M2", "M3", "M4"};
    // F1 and F6 each touch all other females plus one male; M1 and M4
    // each touch the other three males plus one female.
    fx.graph.edges = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1},
                      {0, 5, 1}, {0, 6, 1}, {1, 5, 1}, {2, 5, 1},
                      {3, 5, 1}, {4, 5, 1}, {5, 9, 1}, {6, 7, 1},
                      {6, 8, 1}, {6, 9, 1}, {7, 9, 1}, {8, 9, 1}};
    for (const auto& id : fx.graph.node_ids) {
        AttributeRow row;
        row.gender = id[0] == 'F' ? "female" : "male";
        fx.attributes.insert(id, std::move(row));
    }
    fx.expected = {
        {"F1", "female", 0.39, 0.58, 0.48},
        {"F2", "female", 0.67, 1.0, 0.83},
        {"F3", "female", 0.67, 1.0, 0.83},
        {"F4", "female", 0.67, 1.0, 0.83},
        {"F5", "female", 0.67, 1.0, 0.83},
        {"F6", "female", 0.39, 0.58, 0.48},
        {"M1", "male", 0.5, 0.58, 0.54},
        {"M2", "male", 1.0, 1.0, 1.0},
        {"M3", "male", 1.0, 1.0, 1.0},
        {"M4", "male", 0.5, 0.58, 0.54},
    };
    return fx;
}

}  // namespace segmetrics
