// Compares the OpenMP batch kernel against the serial reference.
// Usage: bench_indexes [individuals] [groups] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "segmetrics/indexes.hpp"

using namespace segmetrics;
using Clock = std::chrono::steady_clock;

namespace {

std::vector<Individual> make_population(std::size_t n,
                                        const GroupSpace& gs,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> count(0, 200);
    std::uniform_int_distribution<std::size_t> pick(0, gs.size() - 1);
    std::vector<Individual> inds(n);
    for (std::size_t i = 0; i < n; ++i) {
        inds[i].id = "n" + std::to_string(i);
        inds[i].own_group = gs.labels()[pick(rng)];
        inds[i].profile.counts.resize(gs.size());
        bool any = false;
        for (auto& c : inds[i].profile.counts) {
            c = count(rng);
            any |= c > 0;
        }
        if (!any) inds[i].profile.counts[0] = 1;
    }
    return inds;
}

template <typename F>
double time_best_of(int repeats, F&& f) {
    double best = 1e100;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        f();
        best = std::min(
            best, std::chrono::duration<double>(Clock::now() - start)
                      .count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n =
        argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000000;
    const std::size_t k = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 5;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 5;

    std::vector<std::string> labels(k);
    std::vector<double> alpha(k, 1.0 / static_cast<double>(k));
    for (std::size_t i = 0; i < k; ++i) labels[i] = "g" + std::to_string(i);
    const GroupSpace gs(labels, alpha);
    const auto inds = make_population(n, gs, 42);

    std::vector<IndexRecord> parallel, serial;
    const double t_par =
        time_best_of(repeats, [&] { parallel = compute_records(inds, gs); });
    const double t_ser = time_best_of(
        repeats, [&] { serial = compute_records_serial(inds, gs); });

    double max_diff = 0.0;
    for (std::size_t i = 0; i < parallel.size(); ++i) {
        max_diff = std::max(max_diff,
                            std::fabs(parallel[i].obi - serial[i].obi));
        max_diff = std::max(max_diff,
                            std::fabs(parallel[i].isi - serial[i].isi));
    }

    std::printf("individuals        %zu\n", n);
    std::printf("groups             %zu\n", k);
    std::printf("serial   best      %.4f s  (%.1f M rec/s)\n", t_ser,
                static_cast<double>(n) / t_ser / 1e6);
    std::printf("parallel best      %.4f s  (%.1f M rec/s)\n", t_par,
                static_cast<double>(n) / t_par / 1e6);
    std::printf("speedup            %.2fx\n", t_ser / t_par);
    std::printf("max |diff|         %.3g\n", max_diff);
    return max_diff == 0.0 ? 0 : 1;
}
