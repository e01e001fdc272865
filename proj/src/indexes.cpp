#include "segmetrics/indexes.hpp"

#include <algorithm>
#include <cmath>

namespace segmetrics {

double compute_isi(std::span<const double> p, const GroupSpace& gs) {
    if (p.size() != gs.size())
        throw DimensionMismatch("proportion vector does not match groups");
    double l1 = 0.0;
    const auto& alpha = gs.alpha();
    for (std::size_t i = 0; i < p.size(); ++i)
        l1 += std::abs(p[i] - alpha[i]);
    const double isi = l1 / (2.0 * (1.0 - gs.min_alpha()));
    return std::clamp(isi, 0.0, 1.0);
}

double compute_iii(double p_own, double alpha_own) {
    if (p_own < 0.0 || p_own > 1.0)
        throw Error("own-group proportion outside [0,1]");
    if (!(alpha_own > 0.0) || !(alpha_own < 1.0))
        throw DegenerateGroups("own-group share must lie in (0,1)");
    if (p_own >= alpha_own)
        return (p_own - alpha_own) / (1.0 - alpha_own);
    if (p_own == 0.0) return -1.0;
    // Lower branch exceeds -1 only in magnitude; clamp keeps the stated
    // range with -1 meaning complete inclination to other groups.
    return std::clamp((p_own - alpha_own) / p_own, -1.0, 0.0);
}

double compute_obi(double isi, double iii) {
    if (iii == 0.0) return -isi / 2.0;
    const double sign = iii > 0.0 ? 1.0 : -1.0;
    return sign * (isi + std::abs(iii)) / 2.0;
}

IndexRecord compute_individual(const Individual& ind, const GroupSpace& gs) {
    if (!ind.own_group) throw MissingOwnGroup();
    const std::size_t own = gs.index_of(*ind.own_group);
    const std::vector<double> p = proportions(ind.profile);

    IndexRecord rec;
    rec.id = ind.id;
    rec.group = *ind.own_group;
    rec.isi = compute_isi(p, gs);
    rec.iii = compute_iii(p[own], gs.alpha()[own]);
    rec.obi = compute_obi(rec.isi, rec.iii);
    return rec;
}

std::vector<IndexRecord> compute_records_serial(
    const std::vector<Individual>& inds, const GroupSpace& gs) {
    std::vector<IndexRecord> out(inds.size());
    for (std::size_t i = 0; i < inds.size(); ++i)
        out[i] = compute_individual(inds[i], gs);
    return out;
}

std::vector<IndexRecord> compute_records(const std::vector<Individual>& inds,
                                         const GroupSpace& gs) {
    std::vector<IndexRecord> out(inds.size());
    const std::int64_t n = static_cast<std::int64_t>(inds.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            compute_individual(inds[static_cast<std::size_t>(i)], gs);
    return out;
}

GroupReport aggregate_group(const std::vector<IndexRecord>& records,
                            std::size_t bins) {
    if (bins < 2) throw Error("histogram needs at least 2 bins");
    GroupReport report;
    report.member_count = records.size();
    if (records.empty()) return report;

    report.group = records.front().group;
    double sum_isi = 0.0, sum_iii = 0.0, sum_obi = 0.0;
    std::vector<double> hist(bins, 0.0);
    const double width = 2.0 / static_cast<double>(bins);
    for (const auto& rec : records) {
        if (rec.group != report.group)
            throw MixedGroups("records span groups " + report.group +
                              " and " + rec.group);
        sum_isi += rec.isi;
        sum_iii += rec.iii;
        sum_obi += rec.obi;
        auto bin = static_cast<std::size_t>((rec.obi + 1.0) / width);
        if (bin >= bins) bin = bins - 1;  // obi == 1 lands in the last bin
        hist[bin] += 1.0;
    }
    const double n = static_cast<double>(records.size());
    for (double& h : hist) h /= n;
    report.mean_isi = sum_isi / n;
    report.mean_iii = sum_iii / n;
    report.mean_obi = sum_obi / n;
    report.obi_histogram = std::move(hist);
    return report;
}

HeatmapGrid isi_heatmap(const GroupSpace& gs, double step) {
    if (gs.size() != 3)
        throw UnsupportedDimension("heatmap requires exactly 3 groups");
    if (!(step > 0.0) || step > 0.5)
        throw Error("step must lie in (0, 0.5]");
    const double inv = 1.0 / step;
    const auto m = static_cast<std::int64_t>(std::llround(inv));
    if (std::abs(inv - static_cast<double>(m)) > kSumTolerance)
        throw Error("1/step must be integral");

    HeatmapGrid grid;
    grid.step = step;
    // Row-major lattice; cell count is (m+1)(m+2)/2.
    grid.cells.resize(
        static_cast<std::size_t>((m + 1) * (m + 2) / 2));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i <= m; ++i) {
        // Offset of row i: sum of row lengths (m+1), m, ...
        std::int64_t offset = i * (m + 1) - i * (i - 1) / 2;
        for (std::int64_t j = 0; j + i <= m; ++j) {
            HeatmapCell& cell = grid.cells[static_cast<std::size_t>(
                offset + j)];
            cell.p = {static_cast<double>(i) / static_cast<double>(m),
                      static_cast<double>(j) / static_cast<double>(m),
                      static_cast<double>(m - i - j) /
                          static_cast<double>(m)};
            cell.isi = compute_isi(cell.p, gs);
        }
    }
    return grid;
}

}  // namespace segmetrics
