#pragma once

#include <vector>

#include "leafsep/geometry.hpp"
#include "leafsep/point_cloud.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

/// Parameters of one round of 3D joint filtering: a radius-based outlier
/// pass followed by nIter surface-boundary erosion passes.
struct JointFilterParams {
    double r = 0.0;                    // neighbor-count radius (m)
    int nThreshold = 1;                // minimum neighbor count
    int k = 20;                        // PCA neighborhood size
    double thetaThresholdDeg = 90.0;   // boundary angle-gap threshold
    int nIter = 3;                     // erosion passes per round

    void validate() const;
};

/// Parameter suggestion derived from the cloud's average spacing:
/// r = 4.5x spacing, nThreshold = half the mean neighbor count at r,
/// d_l = 3x spacing for the segmentation stage.
struct SuggestedParams {
    JointFilterParams filter;
    double averageSpacing = 0.0;
    double meanNeighborCount = 0.0;
    double dL = 0.0;
};

/// Two-way split of a cloud with index maps back into the input.
struct Split {
    PointCloud kept;
    std::vector<int> keptIndex;
    PointCloud removed;
    std::vector<int> removedIndex;
};

/// The ordered record of multi-round filtering: the surviving core plus
/// the boundary layer removed in each round (layers[0] = round 1,
/// outermost). All index maps refer to the original input cloud, and
/// core + layers partition it exactly.
struct LayerStack {
    PointCloud core;
    std::vector<int> coreIndex;
    std::vector<PointCloud> layers;
    std::vector<std::vector<int>> layerIndex;

    int roundCount() const { return static_cast<int>(layers.size()); }
};

/// Radius-based outlier filter: removes points with fewer than
/// nThreshold neighbors within r, all counts taken against the full
/// input cloud.
Split rbof(const PointCloud& cloud, double r, int nThreshold);

/// Largest circular gap (radians) of the k neighbors of point q,
/// projected on the local tangent plane. Degenerate neighborhoods throw
/// DegenerateNeighborhood.
double boundaryAngleGap(const SpatialIndex& index, int q, int k);

/// Surface boundary filter: nIter erosion passes. Each pass evaluates
/// every current survivor against an index rebuilt from survivors only
/// and removes all offenders as one batch, so results do not depend on
/// visitation order. Points whose neighborhood cannot define a tangent
/// plane are treated as boundary.
Split sbf(const PointCloud& cloud, int k, double thetaThresholdDeg, int nIter);

/// One round of 3D joint filtering: rbof then sbf. boundary is the union
/// of both removal sets; core + boundary partition the input. The core
/// may legitimately come out empty.
Split jointFilter(const PointCloud& cloud, const JointFilterParams& params);

/// Applies jointFilter `rounds` times, each round on the previous core.
/// Stops early (recording fewer layers) once the core empties.
LayerStack multiRoundFilter(const PointCloud& cloud, const JointFilterParams& params,
                            int rounds);

/// Heuristic parameters from the cloud's density statistics.
SuggestedParams suggestParams(const PointCloud& cloud, std::uint64_t seed = 0x5eedULL);

}  // namespace leafsep
