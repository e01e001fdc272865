#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "segmetrics/baselines.hpp"
#include "segmetrics/consistency.hpp"
#include "segmetrics/core.hpp"
#include "segmetrics/indexes.hpp"
#include "segmetrics/ingest.hpp"
#include "segmetrics/report.hpp"
#include "segmetrics/synth.hpp"

namespace {

using namespace segmetrics;

constexpr int kExitBadArgs = 2;
constexpr int kExitParseFailure = 3;
constexpr int kExitEmptyAfterFilter = 4;

struct ComputeOptions {
    std::string cdr_path;
    std::string attrs_path;
    std::string feature = "gender";
    std::uint32_t min_connections = 6;
    bool unique_ties = false;
    std::string alpha_source = "sample";
    std::string census_path;
    bool single_pass = false;
    std::size_t bins = 40;
    int reference_year = 2017;
    std::string out_report;
    std::string out_records;
    std::string out_histogram;
};

std::string format4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Subgraph induced on nodes with a known feature value.
InteractionGraph labeled_subgraph(const InteractionGraph& g,
                                  const AttributeTable& attrs,
                                  const std::string& feature) {
    std::vector<char> keep(g.node_count(), 0);
    for (std::size_t i = 0; i < g.node_count(); ++i)
        keep[i] = attrs.value(g.node_ids[i], feature).has_value();
    InteractionGraph out;
    std::vector<std::uint32_t> remap(g.node_count(), 0);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (keep[i]) {
            remap[i] = static_cast<std::uint32_t>(out.node_ids.size());
            out.node_ids.push_back(g.node_ids[i]);
        }
    }
    for (const auto& e : g.edges)
        if (keep[e.u] && keep[e.v])
            out.edges.push_back({remap[e.u], remap[e.v], e.weight});
    return out;
}

std::map<std::string, std::vector<IndexRecord>> group_records(
    const std::vector<IndexRecord>& records) {
    std::map<std::string, std::vector<IndexRecord>> by_group;
    for (const auto& r : records) by_group[r.group].push_back(r);
    return by_group;
}

int run_compute(const ComputeOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();

    InteractionGraph graph;
    AttributeTable attrs;
    ParseStats pstats;
    try {
        graph = parse_cdr_file(opt.cdr_path, &pstats);
        attrs = parse_attributes_file(opt.attrs_path);
    } catch (const Error& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    }
    attrs.set_reference_year(opt.reference_year);
    std::cerr << "parsed " << pstats.rows << " rows (" << pstats.malformed
              << " malformed), " << graph.node_count() << " nodes, "
              << graph.edge_count() << " edges\n";

    FilterStats fstats;
    graph = filter_min_connections(graph, opt.min_connections, &attrs,
                                   opt.feature, opt.single_pass, &fstats);
    std::cerr << "filter: stage1 dropped " << fstats.stage1_dropped
              << ", stage2 dropped " << fstats.stage2_dropped << ", "
              << fstats.iterations << " iteration(s)\n";
    if (graph.edge_count() == 0) {
        std::cerr << "graph is empty after filtering\n";
        return kExitEmptyAfterFilter;
    }

    GroupSpace gs = opt.alpha_source == "census"
                        ? census_group_space(opt.census_path, opt.feature)
                        : attrs.sample_group_space(opt.feature);

    std::uint64_t skipped = 0;
    const auto individuals = contact_profiles(graph, attrs, opt.feature, gs,
                                              opt.unique_ties, &skipped);
    if (individuals.empty()) {
        std::cerr << "no individuals with labeled counterparts remain\n";
        return kExitEmptyAfterFilter;
    }
    if (skipped > 0)
        std::cerr << skipped << " node(s) had no labeled counterparts\n";

    const auto records = compute_records(individuals, gs);

    RunReport report;
    report.feature = opt.feature;
    report.meta["cdr"] = opt.cdr_path;
    report.meta["attrs"] = opt.attrs_path;
    report.meta["min_connections"] = std::to_string(opt.min_connections);
    report.meta["unique_ties"] = opt.unique_ties ? "true" : "false";
    report.meta["alpha_source"] = opt.alpha_source;
    report.meta["single_pass"] = opt.single_pass ? "true" : "false";
    report.meta["bins"] = std::to_string(opt.bins);
    report.meta["reference_year"] = std::to_string(opt.reference_year);
    report.filters = fstats;

    const InteractionGraph labeled =
        labeled_subgraph(graph, attrs, opt.feature);
    const MixingMatrix mixing =
        build_mixing_matrix(labeled, attrs, opt.feature, opt.unique_ties);

    for (auto& [label, recs] : group_records(records)) {
        GroupReport g = aggregate_group(recs, opt.bins);
        g.group = label;
        try {
            g.fsi = freeman_index(mixing, label);
            g.hi = coleman_hi(mixing, label);
        } catch (const Error& e) {
            std::cerr << "baseline skipped for " << label << ": " << e.what()
                      << "\n";
        }
        report.groups.push_back(std::move(g));
    }

    if (report.groups.size() >= 2) {
        bool complete = true;
        for (const auto& g : report.groups)
            complete = complete && g.fsi && g.hi && g.mean_obi;
        if (complete)
            report.consistency =
                check_consistency(report_index_table(report));
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    const std::string json = to_json(report);
    if (opt.out_report.empty()) {
        std::cout << json << "\n";
    } else {
        std::ofstream f(opt.out_report, std::ios::binary);
        f << json << "\n";
    }
    if (!opt.out_records.empty()) write_records_csv(records, opt.out_records);
    if (!opt.out_histogram.empty())
        write_histogram_csv(report.groups, opt.out_histogram);
    return 0;
}

int run_baselines(const ComputeOptions& opt, const std::string& units_path) {
    InteractionGraph graph;
    AttributeTable attrs;
    try {
        graph = parse_cdr_file(opt.cdr_path);
        attrs = parse_attributes_file(opt.attrs_path);
    } catch (const Error& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    }
    attrs.set_reference_year(opt.reference_year);
    const InteractionGraph labeled =
        labeled_subgraph(graph, attrs, opt.feature);
    if (labeled.edge_count() == 0) {
        std::cerr << "no labeled edges\n";
        return kExitEmptyAfterFilter;
    }
    const MixingMatrix mixing =
        build_mixing_matrix(labeled, attrs, opt.feature, opt.unique_ties);

    std::cout << "group,fsi,hi\n";
    for (const auto& label : mixing.labels)
        std::cout << label << ',' << format4(freeman_index(mixing, label))
                  << ',' << format4(coleman_hi(mixing, label)) << "\n";

    if (!units_path.empty()) {
        std::ifstream f(units_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open " << units_path << "\n";
            return kExitParseFailure;
        }
        std::string line;
        std::getline(f, line);
        UnitPopulations units;
        while (std::getline(f, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string unit, a, b;
            std::getline(row, unit, ',');
            std::getline(row, a, ',');
            std::getline(row, b, ',');
            units.units.push_back({std::stod(a), std::stod(b)});
        }
        std::cout << "dissimilarity," << format4(dissimilarity_index(units))
                  << "\n";
    }
    return 0;
}

IndexTable table_from_matrix_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw EmptyInput();
    IndexTable table;
    {
        std::istringstream header(line);
        std::string cell;
        std::getline(header, cell, ',');  // "index" corner cell
        while (std::getline(header, cell, ','))
            table.feature_values.push_back(cell);
    }
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        table.index_names.push_back(cell);
        std::vector<double> values;
        while (std::getline(row, cell, ','))
            values.push_back(std::stod(cell));
        table.values.push_back(std::move(values));
    }
    return table;
}

int run_consistency(const std::vector<std::string>& report_paths,
                    const std::string& matrix_path, double tie_tolerance) {
    std::vector<std::pair<std::string, ConsistencyVerdict>> verdicts;
    if (!matrix_path.empty()) {
        verdicts.emplace_back(
            matrix_path,
            check_consistency(table_from_matrix_csv(matrix_path),
                              tie_tolerance));
    }
    for (const auto& path : report_paths) {
        std::ifstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open " << path << "\n";
            return kExitParseFailure;
        }
        std::stringstream buf;
        buf << f.rdbuf();
        const RunReport report = report_from_json(buf.str());
        verdicts.emplace_back(
            path, check_consistency(report_index_table(report),
                                    tie_tolerance));
    }
    if (verdicts.empty()) {
        std::cerr << "need --matrix or at least one --report\n";
        return kExitBadArgs;
    }
    for (const auto& [source, verdict] : verdicts) {
        std::cerr << source << ": "
                  << (verdict.consistent ? "consistent" : "inconsistent");
        if (!verdict.consistent)
            std::cerr << " (" << verdict.violations.size()
                      << " violating pair(s))";
        std::cerr << "\n";
        std::cout << to_json(verdict) << "\n";
    }
    const bool all_ok =
        std::all_of(verdicts.begin(), verdicts.end(),
                    [](const auto& v) { return v.second.consistent; });
    return all_ok ? 0 : 1;
}

int run_validate(const std::string& attrs_path, const std::string& census,
                 const std::string& feature, int reference_year) {
    AttributeTable attrs;
    try {
        attrs = parse_attributes_file(attrs_path);
    } catch (const Error& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    }
    attrs.set_reference_year(reference_year);
    GroupSpace census_gs = census_group_space(census, feature);
    GroupSpace sample_gs = attrs.sample_group_space(feature);

    std::cout << "value,sample_pct,census_pct,difference,flagged\n";
    for (std::size_t i = 0; i < census_gs.size(); ++i) {
        const std::string& label = census_gs.labels()[i];
        const auto s = sample_gs.find(label);
        if (!s) {
            std::cerr << "value " << label << " absent from sample\n";
            continue;
        }
        const double sample_pct = sample_gs.alpha()[*s] * 100.0;
        const double census_pct = census_gs.alpha()[i] * 100.0;
        const double diff = census_difference(sample_pct, census_pct);
        std::cout << label << ',' << format4(sample_pct) << ','
                  << format4(census_pct) << ',' << format4(diff) << ','
                  << (diff > 20.0 ? "yes" : "no") << "\n";
    }
    return 0;
}

int run_heatmap(const std::vector<double>& alpha, double step) {
    GroupSpace gs({"a", "b", "c"}, alpha);
    const HeatmapGrid grid = isi_heatmap(gs, step);
    std::cout << "p1,p2,p3,isi\n";
    for (const auto& cell : grid.cells)
        std::cout << format4(cell.p[0]) << ',' << format4(cell.p[1]) << ','
                  << format4(cell.p[2]) << ',' << format4(cell.isi) << "\n";
    return 0;
}

int run_synth(const SynthConfig& config, const std::string& out_cdr,
              const std::string& out_attrs, const std::string& out_ledger) {
    const SynthOutput out = generate(config);
    write_cdr_csv(out, out_cdr);
    write_attributes_csv(out, out_attrs, config.feature);
    std::ofstream f(out_ledger, std::ios::binary);
    f << "key,value\n";
    f << "call_events," << out.ledger.call_events << "\n";
    f << "distinct_pairs," << out.ledger.distinct_pairs << "\n";
    f << "nodes_with_edges," << out.ledger.nodes_with_edges << "\n";
    f << "cross_ties," << out.ledger.cross_ties << "\n";
    for (std::size_t g = 0; g < out.ledger.within_ties.size(); ++g)
        f << "within_ties_g" << g + 1 << ',' << out.ledger.within_ties[g]
          << "\n";
    std::cerr << "wrote " << out.ledger.call_events << " call events, "
              << out.ledger.distinct_pairs << " distinct pairs\n";
    return 0;
}

int run_example() {
    const Fig6Fixture fx = fig6_fixture();
    const auto individuals = contact_profiles(fx.graph, fx.attributes,
                                              "gender", fx.group_space);
    const auto records = compute_records(individuals, fx.group_space);

    std::map<std::string, IndexRecord> by_id;
    for (const auto& r : records) by_id[r.id] = r;

    int mismatches = 0;
    std::cout << "id,isi,iii,obi,expected_isi,expected_iii,expected_obi,ok\n";
    for (const auto& exp : fx.expected) {
        const IndexRecord& got = by_id.at(exp.id);
        const bool ok = std::abs(got.isi - exp.isi) <= 0.005 &&
                        std::abs(got.iii - exp.iii) <= 0.005 &&
                        std::abs(got.obi - exp.obi) <= 0.005;
        if (!ok) ++mismatches;
        std::cout << exp.id << ',' << format4(got.isi) << ','
                  << format4(got.iii) << ',' << format4(got.obi) << ','
                  << format4(exp.isi) << ',' << format4(exp.iii) << ','
                  << format4(exp.obi) << ',' << (ok ? "yes" : "no") << "\n";
    }
    for (auto& [label, recs] : group_records(records)) {
        const GroupReport g = aggregate_group(recs);
        std::cerr << label << " mean obi " << format4(*g.mean_obi) << "\n";
    }
    if (mismatches > 0)
        std::cerr << mismatches << " row(s) diverge from the published "
                  << "values\n";
    return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Segregation metrics over interaction graphs"};
    app.require_subcommand(1);

    ComputeOptions opt;
    auto add_common = [&](CLI::App* cmd, bool need_inputs) {
        if (need_inputs) {
            cmd->add_option("--cdr", opt.cdr_path, "CDR CSV path")
                ->required();
            cmd->add_option("--attrs", opt.attrs_path, "attributes CSV path")
                ->required();
        }
        cmd->add_option("--feature", opt.feature,
                        "gender|age_group|language|county");
        cmd->add_flag("--unique-ties", opt.unique_ties,
                      "count distinct partners instead of call events");
        cmd->add_option("--reference-year", opt.reference_year,
                        "reference year for age encoding");
    };

    auto* compute = app.add_subcommand(
        "compute", "per-individual indexes, group reports, baselines");
    add_common(compute, true);
    compute->add_option("--min-connections", opt.min_connections,
                        "minimum connections filter");
    compute->add_option("--alpha-source", opt.alpha_source,
                        "census|sample")
        ->check(CLI::IsMember({"census", "sample"}));
    compute->add_option("--census", opt.census_path,
                        "census CSV (required with --alpha-source census)");
    compute->add_flag("--single-pass", opt.single_pass,
                      "do not iterate filters to fixpoint");
    compute->add_option("--bins", opt.bins, "OBI histogram bins");
    compute->add_option("--out-report", opt.out_report,
                        "report JSON path (default stdout)");
    compute->add_option("--out-records", opt.out_records,
                        "per-individual records CSV path");
    compute->add_option("--out-histogram", opt.out_histogram,
                        "per-group histogram CSV path");

    std::string units_path;
    auto* baselines =
        app.add_subcommand("baselines", "FSI and HI per group (+D)");
    add_common(baselines, true);
    baselines->add_option("--units", units_path,
                          "unit populations CSV for the dissimilarity index");

    std::vector<std::string> report_paths;
    std::string matrix_path;
    double tie_tolerance = 0.0;
    auto* consistency =
        app.add_subcommand("consistency", "cross-index order agreement");
    consistency->add_option("--report", report_paths,
                            "report JSON(s) from compute");
    consistency->add_option("--matrix", matrix_path,
                            "inline CSV matrix (index,<value>,...)");
    consistency->add_option("--tie-tolerance", tie_tolerance,
                            "treat |delta| <= tol as a tie");

    std::string census_path;
    auto* validate =
        app.add_subcommand("validate", "sample vs census differences");
    validate->add_option("--attrs", opt.attrs_path, "attributes CSV path")
        ->required();
    validate->add_option("--census", census_path, "census CSV path")
        ->required();
    validate->add_option("--feature", opt.feature, "feature to validate");
    validate->add_option("--reference-year", opt.reference_year,
                         "reference year for age encoding");

    std::vector<double> alpha{0.69, 0.30, 0.01};
    double step = 0.01;
    auto* heatmap =
        app.add_subcommand("heatmap", "ISI over a 3-group simplex grid");
    heatmap->add_option("--alpha", alpha, "three population shares")
        ->delimiter(',')
        ->expected(3);
    heatmap->add_option("--step", step, "grid step (1/step integral)");

    SynthConfig config;
    std::vector<std::uint64_t> sizes{600, 400};
    std::vector<double> within{0.6, 0.4};
    std::string out_cdr = "synth_cdr.csv";
    std::string out_attrs = "synth_attrs.csv";
    std::string out_ledger = "synth_ledger.csv";
    auto* synth = app.add_subcommand("synth", "synthetic CDR generator");
    synth->add_option("--seed", config.seed, "RNG seed");
    synth->add_option("--sizes", sizes, "nodes per group")
        ->delimiter(',');
    synth->add_option("--within", within,
                      "per-group probability a tie stays in-group")
        ->delimiter(',');
    synth->add_option("--mean-degree", config.mean_degree,
                      "mean weighted degree");
    synth->add_option("--out-cdr", out_cdr, "CDR CSV output");
    synth->add_option("--out-attrs", out_attrs, "attributes CSV output");
    synth->add_option("--out-ledger", out_ledger, "ledger CSV output");

    auto* example = app.add_subcommand(
        "example", "worked ten-node fixture vs published index values");
    (void)example;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadArgs;
    }

    try {
        if (compute->parsed()) {
            if (opt.alpha_source == "census" && opt.census_path.empty()) {
                std::cerr << "--alpha-source census requires --census\n";
                return kExitBadArgs;
            }
            return run_compute(opt);
        }
        if (baselines->parsed()) return run_baselines(opt, units_path);
        if (consistency->parsed())
            return run_consistency(report_paths, matrix_path, tie_tolerance);
        if (validate->parsed())
            return run_validate(opt.attrs_path, census_path, opt.feature,
                                opt.reference_year);
        if (heatmap->parsed()) return run_heatmap(alpha, step);
        if (synth->parsed()) {
            config.group_sizes = sizes;
            config.within_prob = within;
            return run_synth(config, out_cdr, out_attrs, out_ledger);
        }
        if (example->parsed()) return run_example();
    } catch (const TooManyMalformedRows& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    } catch (const EmptyInput& e) {
        std::cerr << "parse failure: " << e.what() << "\n";
        return kExitParseFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadArgs;
    }
    return kExitBadArgs;
}
