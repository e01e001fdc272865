#pragma once

#include <string>
#include <vector>

#include "segmetrics/core.hpp"
#include "segmetrics/ingest.hpp"

namespace segmetrics {

// Per-unit populations of two groups for the dissimilarity index.
struct UnitPopulations {
    struct Unit {
        double group = 0.0;  // p_{i,g}
        double other = 0.0;  // p_{i,g-bar}
    };
    std::vector<Unit> units;
};

// Edge-fraction mixing matrix over the nodes of `graph` labeled by
// `feature`. Throws UnlabeledEndpoint if any endpoint lacks a label.
// With unique_ties, every distinct pair contributes weight 1.
MixingMatrix build_mixing_matrix(const InteractionGraph& graph,
                                 const AttributeTable& attrs,
                                 const std::string& feature,
                                 bool unique_ties = false);

// Freeman Segregation Index, one-vs-rest on `group`: 1 - X/E(X) with
// X the cross-tie edge fraction and E(X) = 2 nA nB / ((nA+nB)(nA+nB-1))
// over node counts. Unclamped; negative means more cross ties than chance.
double freeman_index(const MixingMatrix& m, const std::string& group);

// Coleman Homophily Index, one-vs-rest: T = 2 P_AA / (2 P_AA + P_AB),
// HI = (T - N_A) / (1 - N_A) with N_A the group's relative node share.
double coleman_hi(const MixingMatrix& m, const std::string& group);

// D = 1/2 sum_i |p_{i,g}/p_g - p_{i,g-bar}/p_g-bar|.
double dissimilarity_index(const UnitPopulations& units);

}  // namespace segmetrics
