#pragma once

#include <limits>
#include <span>
#include <vector>

#include "opfimb/dataset.hpp"
#include "opfimb/distance.hpp"

namespace opfimb {

inline constexpr Index kNoNode = std::numeric_limits<Index>::max();

/// Optimum-path forest over the complete graph of a training set.
///
/// Node references are row indices into `nodes`. Prototypes have cost 0 and
/// no predecessor; every other node carries the minimax path cost from its
/// root prototype and that prototype's true label.
struct TrainedOpf {
    Dataset nodes;
    std::vector<Index> prototypes;
    std::vector<Index> predecessor;
    std::vector<double> cost;
    std::vector<int> out_label;
    /// All node indices sorted by (cost, index).
    std::vector<Index> ordered;
};

/// Endpoints of minimum-spanning-tree edges joining differently labelled
/// samples. Prim's algorithm from node 0; equal-weight candidate edges are
/// ordered by (min endpoint, max endpoint). Result sorted ascending.
std::vector<Index> elect_prototypes(const Dataset& train, const DistanceFn& d = {});

/// Best-first conquest from the prototypes with f_max path costs. Among
/// equal queue costs the smaller index leaves first.
TrainedOpf train(const Dataset& train, std::span<const Index> prototypes,
                 const DistanceFn& d = {});

/// elect_prototypes followed by train.
TrainedOpf fit(const Dataset& train, const DistanceFn& d = {});

struct Classification {
    int label;
    Index conqueror;
    /// max(C(conqueror), d(conqueror, sample))
    double offered_cost;
};

/// Training node offering the sample the cheapest path. Scans nodes in cost
/// order and stops once a node's own cost reaches the best offer; ties go to
/// the smaller node cost, then the smaller index.
Classification classify(const TrainedOpf& model, std::span<const double> sample,
                        const DistanceFn& d = {});

std::vector<int> predict(const TrainedOpf& model, const Dataset& samples,
                         const DistanceFn& d = {});

}  // namespace opfimb
