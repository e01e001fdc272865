#include "segmetrics/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <numeric>
#include <tuple>
#include <sstream>
#include <string_view>
#include <unordered_set>

namespace segmetrics {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

// Epoch seconds or a minimal ISO-8601 shape (YYYY-MM-DD...).
bool timestamp_parseable(std::string_view s) {
    if (all_digits(s)) return true;
    if (s.size() < 10) return false;
    auto digit = [&](std::size_t i) {
        return std::isdigit(static_cast<unsigned char>(s[i])) != 0;
    };
    return digit(0) && digit(1) && digit(2) && digit(3) && s[4] == '-' &&
           digit(5) && digit(6) && s[7] == '-' && digit(8) && digit(9);
}

constexpr std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

const std::array<std::string_view, 3> kLanguages = {"Estonian", "Russian",
                                                    "English"};
const std::array<std::string_view, 15> kCounties = {
    "Harju", "Hiiu",  "Ida-Viru", "Järva",    "Jõgeva",
    "Lääne", "Lääne-Viru", "Pärnu", "Põlva",  "Rapla",
    "Saare", "Tartu", "Valga",    "Viljandi", "Võru"};

// Relabels to lexicographic node order, merges duplicate pairs, and sorts
// edges; graphs built from any permutation of the same rows compare equal.
InteractionGraph canonicalize(std::vector<std::string>&& ids,
                              std::vector<std::uint64_t>& pairs) {
    InteractionGraph g;
    const std::uint32_t n = static_cast<std::uint32_t>(ids.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                  return ids[a] < ids[b];
              });
    std::vector<std::uint32_t> rank(n);
    g.node_ids.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        rank[order[i]] = i;
        g.node_ids[i] = std::move(ids[order[i]]);
    }
    for (auto& key : pairs) {
        std::uint32_t u = rank[static_cast<std::uint32_t>(key >> 32)];
        std::uint32_t v = rank[static_cast<std::uint32_t>(key)];
        if (u > v) std::swap(u, v);
        key = pack_pair(u, v);
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        g.edges.push_back({static_cast<std::uint32_t>(pairs[i] >> 32),
                           static_cast<std::uint32_t>(pairs[i]),
                           static_cast<std::uint32_t>(j - i)});
        i = j;
    }
    return g;
}

struct SvHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
        return std::hash<std::string_view>{}(s);
    }
};
struct SvEq {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const {
        return a == b;
    }
};

}  // namespace

std::vector<std::uint32_t> InteractionGraph::degrees() const {
    std::vector<std::uint32_t> deg(node_ids.size(), 0);
    for (const Edge& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

bool InteractionGraph::same_graph(const InteractionGraph& other) const {
    if (node_ids != other.node_ids) return false;
    if (edges.size() != other.edges.size()) return false;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& a = edges[i];
        const Edge& b = other.edges[i];
        if (a.u != b.u || a.v != b.v || a.weight != b.weight) return false;
    }
    return true;
}

InteractionGraph parse_cdr(std::istream& in, ParseStats* stats) {
    // Slurp the stream once and work on views; at CDR scale per-line
    // stream reads and per-lookup string copies dominate otherwise.
    std::string buffer(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>{});
    std::string_view rest(buffer);

    auto next_line = [&]() -> std::optional<std::string_view> {
        if (rest.empty()) return std::nullopt;
        const std::size_t nl = rest.find('\n');
        std::string_view line = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{}
                                            : rest.substr(nl + 1);
        if (line.ends_with('\r')) line.remove_suffix(1);
        return line;
    };

    const auto header = next_line();
    if (!header) throw EmptyInput();
    if (!header->starts_with("caller_id,callee_id,timestamp"))
        throw Error("unexpected CDR header: " + std::string(*header));

    std::unordered_map<std::string, std::uint32_t, SvHash, SvEq> index;
    std::vector<std::string> ids;
    std::vector<std::uint64_t> pairs;
    ParseStats local;

    auto intern = [&](std::string_view id) {
        auto it = index.find(id);
        if (it != index.end()) return it->second;
        const auto n = static_cast<std::uint32_t>(ids.size());
        ids.emplace_back(id);
        index.emplace(std::string(id), n);
        return n;
    };

    while (auto maybe = next_line()) {
        const std::string_view line = *maybe;
        if (line.empty()) continue;
        ++local.rows;
        const auto fields = split_csv(line);
        if (fields.size() != 4 || fields[0].empty() || fields[1].empty() ||
            !timestamp_parseable(fields[2])) {
            ++local.malformed;
            continue;
        }
        if (fields[0] == fields[1]) {
            ++local.malformed;
            ++local.self_loops;
            continue;
        }
        const std::uint32_t u = intern(fields[0]);
        const std::uint32_t v = intern(fields[1]);
        pairs.push_back(u < v ? pack_pair(u, v) : pack_pair(v, u));
    }
    if (local.rows == 0) throw EmptyInput();
    if (local.malformed * 100 > local.rows)
        throw TooManyMalformedRows(
            "malformed rows exceed 1% of input (" +
            std::to_string(local.malformed) + " of " +
            std::to_string(local.rows) + ")");
    if (stats) *stats = local;
    return canonicalize(std::move(ids), pairs);
}

InteractionGraph parse_cdr_file(const std::string& path, ParseStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return parse_cdr(in, stats);
}

void AttributeTable::insert(const std::string& id, AttributeRow row) {
    rows_[id] = std::move(row);
}

std::optional<std::string> AttributeTable::value(
    const std::string& id, const std::string& feature) const {
    auto it = rows_.find(id);
    if (it == rows_.end()) return std::nullopt;
    const AttributeRow& row = it->second;
    if (feature == "gender") return row.gender;
    if (feature == "language") return row.language;
    if (feature == "county") return row.county;
    if (feature == "age_group") {
        if (!row.birth_year) return std::nullopt;
        return encode_age(*row.birth_year, reference_year_);
    }
    throw Error("unknown feature: " + feature);
}

GroupSpace AttributeTable::sample_group_space(
    const std::string& feature) const {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& [id, row] : rows_) {
        std::optional<std::string> v;
        if (feature == "age_group" && row.birth_year) {
            const int age = reference_year_ - *row.birth_year;
            if (age <= 0 || age > 100) continue;  // out-of-range = unknown
            v = encode_age(*row.birth_year, reference_year_);
        } else if (feature != "age_group") {
            v = value(id, feature);
        }
        if (v) ++counts[*v];
    }
    if (counts.size() < 2)
        throw DegenerateGroups("feature " + feature +
                               " has fewer than 2 known values");
    std::uint64_t total = 0;
    for (const auto& [label, c] : counts) total += c;
    std::vector<std::string> labels;
    std::vector<double> alpha;
    for (const auto& [label, c] : counts) {
        labels.push_back(label);
        alpha.push_back(static_cast<double>(c) /
                        static_cast<double>(total));
    }
    return GroupSpace(std::move(labels), std::move(alpha));
}

AttributeTable parse_attributes(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput();
    strip_cr(line);
    if (!line.starts_with("id,gender,birth_year,language,county"))
        throw Error("unexpected attributes header: " + line);

    AttributeTable table;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5 || fields[0].empty())
            throw Error("malformed attribute row: " + line);
        AttributeRow row;
        if (!fields[1].empty()) row.gender = std::string(fields[1]);
        if (!fields[2].empty()) {
            int year = 0;
            auto [ptr, ec] = std::from_chars(
                fields[2].data(), fields[2].data() + fields[2].size(), year);
            if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size())
                throw Error("bad birth_year in row: " + line);
            row.birth_year = year;
        }
        if (!fields[3].empty()) {
            if (std::find(kLanguages.begin(), kLanguages.end(), fields[3]) ==
                kLanguages.end())
                throw Error("unknown language in row: " + line);
            row.language = std::string(fields[3]);
        }
        if (!fields[4].empty()) {
            if (std::find(kCounties.begin(), kCounties.end(), fields[4]) ==
                kCounties.end())
                throw Error("unknown county in row: " + line);
            row.county = std::string(fields[4]);
        }
        table.insert(std::string(fields[0]), std::move(row));
    }
    return table;
}

AttributeTable parse_attributes_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return parse_attributes(in);
}

GroupSpace census_group_space(const std::string& path,
                              const std::string& feature) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw EmptyInput();
    strip_cr(line);
    if (!line.starts_with("feature,value,share"))
        throw Error("unexpected census header: " + line);
    std::vector<std::string> labels;
    std::vector<double> alpha;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw Error("malformed census row: " + line);
        if (fields[0] != feature) continue;
        labels.emplace_back(fields[1]);
        alpha.push_back(std::stod(std::string(fields[2])));
    }
    if (labels.empty())
        throw Error("census file has no rows for feature " + feature);
    return GroupSpace(std::move(labels), std::move(alpha));
}

const std::vector<std::string>& age_group_labels() {
    static const std::vector<std::string> labels = {
        "(0,14]", "(14,24]", "(24,54]", "(54,64]", "(64,100]"};
    return labels;
}

std::string encode_age(int birth_year, int reference_year) {
    const int age = reference_year - birth_year;
    if (age <= 0 || age > 100)
        throw AgeOutOfRange("age " + std::to_string(age) +
                            " outside (0,100]");
    const auto& labels = age_group_labels();
    if (age <= 14) return labels[0];
    if (age <= 24) return labels[1];
    if (age <= 54) return labels[2];
    if (age <= 64) return labels[3];
    return labels[4];
}

double census_difference(double sample_pct, double population_pct) {
    if (!(sample_pct > 0.0) || !(population_pct > 0.0))
        throw ZeroPercentage();
    return std::abs(sample_pct - population_pct) /
           std::min(sample_pct, population_pct) * 100.0;
}

namespace {

struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> neighbors;
    std::vector<std::uint32_t> weights;
};

Csr build_csr(const InteractionGraph& g) {
    Csr csr;
    csr.offsets.assign(g.node_count() + 1, 0);
    for (const auto& e : g.edges) {
        ++csr.offsets[e.u + 1];
        ++csr.offsets[e.v + 1];
    }
    for (std::size_t i = 1; i < csr.offsets.size(); ++i)
        csr.offsets[i] += csr.offsets[i - 1];
    csr.neighbors.resize(csr.offsets.back());
    csr.weights.resize(csr.offsets.back());
    std::vector<std::size_t> cursor(csr.offsets.begin(),
                                    csr.offsets.end() - 1);
    for (const auto& e : g.edges) {
        csr.neighbors[cursor[e.u]] = e.v;
        csr.weights[cursor[e.u]++] = e.weight;
        csr.neighbors[cursor[e.v]] = e.u;
        csr.weights[cursor[e.v]++] = e.weight;
    }
    return csr;
}

}  // namespace

InteractionGraph filter_min_connections(const InteractionGraph& graph,
                                        std::uint32_t k,
                                        const AttributeTable* attrs,
                                        const std::string& feature,
                                        bool single_pass,
                                        FilterStats* stats) {
    if (k < 1) throw Error("k must be >= 1");
    const Csr csr = build_csr(graph);
    const std::size_t n = graph.node_count();

    std::vector<char> active(n, 1);
    std::vector<char> known(n, 0);
    if (attrs) {
        for (std::size_t i = 0; i < n; ++i)
            known[i] = attrs->value(graph.node_ids[i], feature).has_value();
    }

    FilterStats local;
    bool changed = true;
    while (changed) {
        changed = false;
        ++local.iterations;
        // Stage 1: distinct active partners.
        std::vector<char> next = active;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            std::uint32_t deg = 0;
            for (std::size_t e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e)
                if (active[csr.neighbors[e]]) ++deg;
            if (deg < k) {
                next[i] = 0;
                ++local.stage1_dropped;
                changed = true;
            }
        }
        active = next;
        // Stage 2: active partners with known feature.
        if (attrs) {
            next = active;
            for (std::size_t i = 0; i < n; ++i) {
                if (!active[i]) continue;
                std::uint32_t deg = 0;
                for (std::size_t e = csr.offsets[i]; e < csr.offsets[i + 1];
                     ++e) {
                    const std::uint32_t nb = csr.neighbors[e];
                    if (active[nb] && known[nb]) ++deg;
                }
                if (deg < k) {
                    next[i] = 0;
                    ++local.stage2_dropped;
                    changed = true;
                }
            }
            active = next;
        }
        if (single_pass) break;
    }
    if (stats) *stats = local;

    // Induced subgraph; node order is preserved, so output stays canonical.
    InteractionGraph out;
    std::vector<std::uint32_t> remap(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (active[i]) {
            remap[i] = static_cast<std::uint32_t>(out.node_ids.size());
            out.node_ids.push_back(graph.node_ids[i]);
        }
    }
    for (const auto& e : graph.edges)
        if (active[e.u] && active[e.v])
            out.edges.push_back({remap[e.u], remap[e.v], e.weight});
    return out;
}

std::vector<Individual> contact_profiles(const InteractionGraph& graph,
                                         const AttributeTable& attrs,
                                         const std::string& feature,
                                         const GroupSpace& gs,
                                         bool unique_ties,
                                         std::uint64_t* skipped) {
    const Csr csr = build_csr(graph);
    const std::size_t n = graph.node_count();

    // Group index per node, -1 = unknown.
    std::vector<std::int32_t> group(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = attrs.value(graph.node_ids[i], feature);
        if (!v) continue;
        const auto idx = gs.find(*v);
        if (!idx)
            throw UnknownGroupValue("feature value '" + *v +
                                    "' outside the group space");
        group[i] = static_cast<std::int32_t>(*idx);
    }

    std::vector<Individual> out;
    std::uint64_t local_skipped = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (group[i] < 0) continue;
        ContactProfile profile;
        profile.counts.assign(gs.size(), 0);
        for (std::size_t e = csr.offsets[i]; e < csr.offsets[i + 1]; ++e) {
            const std::int32_t g = group[csr.neighbors[e]];
            if (g < 0) continue;
            profile.counts[static_cast<std::size_t>(g)] +=
                unique_ties ? 1 : csr.weights[e];
        }
        if (profile.total() == 0) {
            ++local_skipped;  // no labeled counterparts
            continue;
        }
        Individual ind;
        ind.id = graph.node_ids[i];
        ind.own_group = gs.labels()[static_cast<std::size_t>(group[i])];
        ind.profile = std::move(profile);
        out.push_back(std::move(ind));
    }
    if (skipped) *skipped = local_skipped;
    return out;
}

}  // namespace segmetrics
