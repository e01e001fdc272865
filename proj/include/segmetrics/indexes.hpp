#pragma once

#include <span>
#include <vector>

#include "segmetrics/core.hpp"

namespace segmetrics {

// ISI: normalized L1 distance between an individual's contact proportions
// and the population distribution. Result clamped to [0,1].
double compute_isi(std::span<const double> p, const GroupSpace& gs);

// III: signed own-group inclination. Upper branch (p >= alpha) divides by
// 1-alpha; lower branch divides by p and is clamped to [-1, 0], with
// III(0) = -1. alpha must lie in (0,1).
double compute_iii(double p_own, double alpha_own);

// OBI: sign(III) * (ISI + |III|)/2 when III != 0, otherwise -ISI/2.
double compute_obi(double isi, double iii);

IndexRecord compute_individual(const Individual& ind, const GroupSpace& gs);

// Batch kernels. The OpenMP version is the production path; the serial
// one is the reference kept for tests and the benchmark.
std::vector<IndexRecord> compute_records(const std::vector<Individual>& inds,
                                         const GroupSpace& gs);
std::vector<IndexRecord> compute_records_serial(
    const std::vector<Individual>& inds, const GroupSpace& gs);

// Per-group aggregate: unweighted means plus an OBI histogram over [-1,1]
// with `bins` equal-width bins. All records must share one group.
GroupReport aggregate_group(const std::vector<IndexRecord>& records,
                            std::size_t bins = 40);

struct HeatmapCell {
    std::vector<double> p;
    double isi;
};

struct HeatmapGrid {
    double step;
    std::vector<HeatmapCell> cells;
};

// ISI over the lattice of a 3-group probability simplex; 1/step must be
// integral.
HeatmapGrid isi_heatmap(const GroupSpace& gs, double step);

}  // namespace segmetrics
