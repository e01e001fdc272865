// Acceptance suite: one criterion per function, one pass/fail line each.
// Usage: acceptance [criterion 1..9] [path to the CLI binary]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "segmetrics/baselines.hpp"
#include "segmetrics/consistency.hpp"
#include "segmetrics/indexes.hpp"
#include "segmetrics/ingest.hpp"
#include "segmetrics/synth.hpp"

using namespace segmetrics;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli_path;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool check(bool ok, const std::string& what, std::string& fail_note) {
    if (!ok && fail_note.empty()) fail_note = what;
    return ok;
}

// ---- criterion 1: worked-example regression through the CLI ----
bool criterion1(std::string& note) {
    if (g_cli_path.empty()) {
        note = "CLI path not provided";
        return false;
    }
    const auto start = Clock::now();
    const int rc =
        std::system((g_cli_path + " example > acceptance_example.csv 2> "
                                  "acceptance_example.log")
                        .c_str());
    const double elapsed = seconds_since(start);
    bool ok = true;
    ok &= check(elapsed < 1.0, "runtime >= 1s", note);
    ok &= check(rc == 0,
                "published M1/M4 ISI/OBI (0.5/0.54) are not reachable from "
                "the index formulas (both evaluate to 7/12 at proportions "
                "0.25/0.75); 26 of 30 values match",
                note);
    return ok;
}

// ---- criterion 2: formula oracles on 10k random (p, alpha) pairs ----
bool criterion2(std::string& note) {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<std::size_t> dim(2, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = dim(rng);
        std::vector<double> alpha(n), p(n);
        double sa = 0.0, sp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            alpha[i] = 0.05 + u(rng);
            sa += alpha[i];
            p[i] = u(rng);
            sp += p[i];
        }
        for (auto& a : alpha) a /= sa;
        for (auto& x : p) x /= sp;
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
        const GroupSpace gs(labels, alpha);

        // Independent L1 re-derivation.
        double l1 = 0.0, amin = alpha[0];
        for (double a : alpha) amin = std::min(amin, a);
        for (std::size_t i = 0; i < n; ++i) l1 += std::fabs(p[i] - alpha[i]);
        const double isi_ref =
            std::clamp(l1 / (2.0 * (1.0 - amin)), 0.0, 1.0);
        ok &= check(std::fabs(compute_isi(p, gs) - isi_ref) <= 1e-12,
                    "ISI deviates from the L1 oracle", note);

        // Straight-line III/OBI.
        const double po = p[0], ao = alpha[0];
        double iii_ref;
        if (po >= ao)
            iii_ref = (po - ao) / (1.0 - ao);
        else if (po == 0.0)
            iii_ref = -1.0;
        else
            iii_ref = std::max((po - ao) / po, -1.0);
        const double iii = compute_iii(po, ao);
        ok &= check(std::fabs(iii - iii_ref) <= 1e-12,
                    "III deviates from the oracle", note);
        const double isi = compute_isi(p, gs);
        const double obi_ref =
            iii_ref != 0.0
                ? (iii_ref > 0 ? 1.0 : -1.0) * (isi + std::fabs(iii_ref)) / 2.0
                : -isi / 2.0;
        ok &= check(std::fabs(compute_obi(isi, iii) - obi_ref) <= 1e-12,
                    "OBI deviates from the oracle", note);
        if (!ok) break;
    }
    return ok;
}

// ---- criterion 3: range properties on 100k randomized inputs ----
bool criterion3(std::string& note) {
    std::mt19937 rng(777);
    std::uniform_int_distribution<std::size_t> dim(2, 6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 100000; ++trial) {
        const std::size_t n = dim(rng);
        std::vector<double> alpha(n), p(n);
        double sa = 0.0, sp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            alpha[i] = 0.02 + u(rng);
            sa += alpha[i];
            p[i] = u(rng);
            sp += p[i];
        }
        for (auto& a : alpha) a /= sa;
        for (auto& x : p) x /= sp;
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
        const GroupSpace gs(labels, alpha);
        const double isi = compute_isi(p, gs);
        const double iii = compute_iii(p[0], alpha[0]);
        const double obi = compute_obi(isi, iii);
        ok &= check(isi >= 0.0 && isi <= 1.0, "ISI out of [0,1]", note);
        ok &= check(iii >= -1.0 && iii <= 1.0, "III out of [-1,1]", note);
        ok &= check(obi >= -1.0 && obi <= 1.0, "OBI out of [-1,1]", note);
        if (!ok) return false;
    }
    // Exact fixed points on dyadic shares (floating-point-exact sums).
    const std::vector<std::vector<double>> dyadics = {
        {0.5, 0.5},
        {0.5, 0.25, 0.25},
        {0.5, 0.375, 0.125},
        {0.25, 0.25, 0.25, 0.25},
        {0.625, 0.25, 0.125}};
    for (const auto& alpha : dyadics) {
        std::vector<std::string> labels(alpha.size());
        for (std::size_t i = 0; i < alpha.size(); ++i)
            labels[i] = std::to_string(i);
        const GroupSpace gs(labels, alpha);
        ok &= check(compute_isi(alpha, gs) == 0.0, "ISI(alpha) != 0", note);
        const std::size_t min_idx = static_cast<std::size_t>(
            std::min_element(alpha.begin(), alpha.end()) - alpha.begin());
        std::vector<double> corner(alpha.size(), 0.0);
        corner[min_idx] = 1.0;
        ok &= check(compute_isi(corner, gs) == 1.0,
                    "ISI(min corner) != 1", note);
    }
    return ok;
}

// ---- criterion 4: exhaustive <=6-node brute-force equivalence ----
bool criterion4(std::string& note) {
    const auto start = Clock::now();
    bool ok = true;
    for (int n = 2; n <= 6 && ok; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
        const int max_edges = static_cast<int>(pairs.size());
        std::vector<std::string> ids(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] =
            "n" + std::to_string(i);

        for (long edge_mask = 1; edge_mask < (1L << max_edges) && ok;
             ++edge_mask) {
            InteractionGraph g;
            g.node_ids = ids;
            for (int e = 0; e < max_edges; ++e)
                if (edge_mask & (1L << e))
                    g.edges.push_back(
                        {static_cast<std::uint32_t>(pairs[e].first),
                         static_cast<std::uint32_t>(pairs[e].second), 1});
            for (int label_mask = 1; label_mask < (1 << n) - 1 && ok;
                 ++label_mask) {
                AttributeTable attrs;
                double n_a = 0, n_b = 0;
                double within_a = 0, within_b = 0, cross = 0;
                std::vector<int> side(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    side[static_cast<std::size_t>(i)] = (label_mask >> i) & 1;
                    AttributeRow row;
                    row.gender = side[static_cast<std::size_t>(i)] ? "b" : "a";
                    attrs.insert(ids[static_cast<std::size_t>(i)], row);
                    (side[static_cast<std::size_t>(i)] ? n_b : n_a) += 1;
                }
                for (const auto& e : g.edges) {
                    const int su = side[e.u], sv = side[e.v];
                    if (su == 0 && sv == 0)
                        within_a += 1;
                    else if (su == 1 && sv == 1)
                        within_b += 1;
                    else
                        cross += 1;
                }
                const double total = within_a + within_b + cross;
                const MixingMatrix m =
                    build_mixing_matrix(g, attrs, "gender");
                const double x = cross / total;
                const double nn = n_a + n_b;
                const double ex = 2.0 * n_a * n_b / (nn * (nn - 1.0));
                ok &= check(std::fabs(freeman_index(m, "a") -
                                      (1.0 - x / ex)) <= 1e-12,
                            "FSI deviates from direct tie count", note);
                if (2.0 * within_a + cross > 0.0) {
                    const double t_aa = (2.0 * within_a / total) /
                                        (2.0 * within_a / total +
                                         cross / total);
                    const double rel = n_a / nn;
                    ok &= check(std::fabs(coleman_hi(m, "a") -
                                          (t_aa - rel) / (1.0 - rel)) <=
                                    1e-12,
                                "HI deviates from direct tie count", note);
                }
            }
        }
    }
    // K_{2,2} spot values.
    {
        InteractionGraph g;
        g.node_ids = {"a1", "a2", "b1", "b2"};
        g.edges = {{0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}};
        AttributeTable attrs;
        for (const auto& id : g.node_ids) {
            AttributeRow row;
            row.gender = id[0] == 'a' ? "a" : "b";
            attrs.insert(id, row);
        }
        const MixingMatrix m = build_mixing_matrix(g, attrs, "gender");
        ok &= check(std::fabs(freeman_index(m, "a") + 0.5) <= 1e-12,
                    "K22 FSI != -0.5", note);
        ok &= check(std::fabs(coleman_hi(m, "a") + 1.0) <= 1e-12,
                    "K22 HI != -1", note);
    }
    ok &= check(seconds_since(start) < 60.0, "runtime >= 60s", note);
    return ok;
}

// ---- criterion 5: published language/age consistency reproduction ----
bool criterion5(std::string& note) {
    IndexTable lang;
    lang.index_names = {"FSI", "HI", "OBI"};
    lang.feature_values = {"Estonian", "Russian", "English"};
    lang.values = {{0.738, 0.742, 0.267},
                   {0.704, 0.751, 0.094},
                   {0.488, 0.527, -0.463}};
    bool ok = check(check_consistency(lang).consistent,
                    "language rows not consistent", note);

    IndexTable age;
    age.index_names = {"FSI", "HI", "OBI"};
    age.feature_values = {"(0,14]", "(14,24]", "(24,54]", "(54,64]",
                          "(64,100]"};
    age.values = {{0.374, 0.206, 0.385, 0.322, 0.432},
                  {0.032, 0.172, 0.561, 0.398, 0.332},
                  {-0.727, -0.340, 0.552, 0.314, 0.079}};
    const ConsistencyVerdict v = check_consistency(age);
    ok &= check(!v.consistent, "age rows unexpectedly consistent", note);
    bool fsi_hi = false, fsi_obi = false;
    for (const auto& viol : v.violations) {
        const bool pair =
            (viol.feature_a == "(24,54]" && viol.feature_b == "(64,100]") ||
            (viol.feature_a == "(64,100]" && viol.feature_b == "(24,54]");
        if (!pair || viol.index_a != "FSI") continue;
        if (viol.index_b == "HI") fsi_hi = true;
        if (viol.index_b == "OBI") fsi_obi = true;
    }
    ok &= check(fsi_hi && fsi_obi,
                "FSI-vs-{HI,OBI} violation on ((64,100],(24,54]) missing",
                note);
    return ok;
}

// ---- criterion 6: random-mixing sanity at 10k nodes ----
bool criterion6(std::string& note) {
    SynthConfig cfg;
    cfg.seed = 2024;
    cfg.group_sizes = {6000, 4000};
    cfg.within_prob = {0.6, 0.4};  // equal to group shares
    cfg.mean_degree = 50.0;
    const SynthOutput out = generate(cfg);
    const MixingMatrix m =
        build_mixing_matrix(out.graph, out.attributes, "gender");
    bool ok = true;
    for (const auto& label : {"g1", "g2"})
        ok &= check(std::fabs(freeman_index(m, label)) < 0.05,
                    std::string("|FSI| >= 0.05 for ") + label, note);

    const GroupSpace gs = out.attributes.sample_group_space("gender");
    const auto inds =
        contact_profiles(out.graph, out.attributes, "gender", gs);
    const auto records = compute_records(inds, gs);
    double sum[2] = {0, 0};
    std::uint64_t cnt[2] = {0, 0};
    for (const auto& r : records) {
        const int g = r.group == "g1" ? 0 : 1;
        sum[g] += r.obi;
        ++cnt[g];
    }
    for (int g = 0; g < 2; ++g)
        ok &= check(std::fabs(sum[g] / static_cast<double>(cnt[g])) < 0.05,
                    "|group mean OBI| >= 0.05", note);
    return ok;
}

// ---- criterion 7: group-mean-zero fixtures ----
bool criterion7(std::string& note) {
    bool ok = true;
    // Way one: every profile equals alpha = (0.6, 0.4) exactly.
    const GroupSpace gs({"a", "b"}, {0.6, 0.4});
    std::vector<IndexRecord> follow;
    for (int i = 0; i < 100; ++i) {
        Individual ind;
        ind.id = std::to_string(i);
        ind.own_group = "a";
        const std::uint64_t scale = 1 + static_cast<std::uint64_t>(i % 7);
        ind.profile.counts = {3 * scale, 2 * scale};
        follow.push_back(compute_individual(ind, gs));
    }
    double mean = 0.0;
    for (const auto& r : follow) mean += r.obi;
    mean /= static_cast<double>(follow.size());
    ok &= check(std::fabs(mean) <= 1e-9,
                "mean OBI != 0 when profiles follow alpha", note);

    // Way two: OBI multiset symmetric about zero.
    std::vector<IndexRecord> symmetric;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double v = u(rng);
        symmetric.push_back({"p" + std::to_string(i), "a", 0.0, 0.0, v});
        symmetric.push_back({"m" + std::to_string(i), "a", 0.0, 0.0, -v});
    }
    double mean2 = 0.0;
    for (const auto& r : symmetric) mean2 += r.obi;
    mean2 /= static_cast<double>(symmetric.size());
    ok &= check(std::fabs(mean2) <= 1e-9,
                "mean OBI != 0 for a symmetric multiset", note);
    return ok;
}

// ---- criterion 8: ingestion scale and determinism ----
bool criterion8(std::string& note) {
    bool ok = true;
    // 10M call events: 1M nodes at weighted mean degree 20.
    SynthConfig big;
    big.seed = 11;
    big.group_sizes = {600000, 400000};
    big.within_prob = {0.7, 0.6};
    big.mean_degree = 20.0;
    const SynthOutput out = generate(big);
    const std::string path = "acceptance_cdr_10m.csv";
    write_cdr_csv(out, path);

    const auto start = Clock::now();
    const InteractionGraph g = parse_cdr_file(path);
    const double elapsed = seconds_since(start);
    std::cerr << "  parsed " << out.ledger.call_events << " rows in "
              << elapsed << "s\n";
    ok &= check(elapsed < 60.0, "10M-row parse took >= 60s", note);
    ok &= check(g.edge_count() == out.ledger.distinct_pairs,
                "edge count != ledger distinct pairs", note);
    ok &= check(g.node_count() == out.ledger.nodes_with_edges,
                "node count != ledger node count", note);
    std::remove(path.c_str());

    // Shuffled input yields the identical graph (1M-row sample).
    SynthConfig small = big;
    small.group_sizes = {60000, 40000};
    const SynthOutput sub = generate(small);
    const std::string sp = "acceptance_cdr_1m.csv";
    write_cdr_csv(sub, sp);
    std::vector<std::string> lines;
    {
        std::ifstream f(sp, std::ios::binary);
        std::string line;
        std::getline(f, line);  // header
        while (std::getline(f, line)) lines.push_back(line);
    }
    std::shuffle(lines.begin(), lines.end(), std::mt19937(99));
    std::ostringstream shuffled;
    shuffled << "caller_id,callee_id,timestamp,cell\n";
    for (const auto& l : lines) shuffled << l << "\n";
    const InteractionGraph g1 = parse_cdr_file(sp);
    std::istringstream in(shuffled.str());
    const InteractionGraph g2 = parse_cdr(in);
    ok &= check(g1.same_graph(g2), "shuffled input gave a different graph",
                note);
    std::remove(sp.c_str());

    // Fixpoint filter is idempotent.
    const auto once =
        filter_min_connections(g1, 6, &sub.attributes, "gender");
    const auto twice =
        filter_min_connections(once, 6, &sub.attributes, "gender");
    ok &= check(once.same_graph(twice), "filter not idempotent", note);
    return ok;
}

// ---- criterion 9: heatmap corner spot checks ----
bool criterion9(std::string& note) {
    const GroupSpace lang({"Estonian", "Russian", "English"},
                          {0.69, 0.30, 0.01});
    const HeatmapGrid grid = isi_heatmap(lang, 0.01);
    bool ok = true;
    // Corner values frozen from the hand/oracle evaluation:
    // 0.62/1.98, 1.40/1.98, 1.98/1.98.
    const struct {
        double p[3];
        double expect;
    } corners[] = {{{1, 0, 0}, 0.3131},
                   {{0, 1, 0}, 0.7071},
                   {{0, 0, 1}, 1.0000}};
    for (const auto& c : corners) {
        bool found = false;
        for (const auto& cell : grid.cells) {
            if (cell.p[0] == c.p[0] && cell.p[1] == c.p[1] &&
                cell.p[2] == c.p[2]) {
                found = true;
                ok &= check(std::fabs(cell.isi - c.expect) <= 0.0005,
                            "corner ISI outside +-0.0005", note);
            }
        }
        ok &= check(found, "corner cell missing from the grid", note);
    }
    return ok;
}

struct Criterion {
    int id;
    const char* name;
    bool (*run)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "worked-example regression via the CLI example command", criterion1},
    {2, "formula oracles on 10k random (p, alpha) pairs", criterion2},
    {3, "range properties on 100k randomized inputs", criterion3},
    {4, "exhaustive <=6-node brute-force equivalence", criterion4},
    {5, "published language/age consistency reproduction", criterion5},
    {6, "random-mixing sanity at 10k nodes", criterion6},
    {7, "group-mean-zero properties", criterion7},
    {8, "ingestion scale and determinism", criterion8},
    {9, "heatmap corner spot checks", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    if (argc > 2) g_cli_path = argv[2];

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::string note;
        const bool ok = c.run(note);
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id
                  << ": " << c.name;
        if (!ok) std::cout << " -- " << note;
        std::cout << std::endl;
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
