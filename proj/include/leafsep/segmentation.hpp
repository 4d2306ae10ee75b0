#pragma once

#include <limits>
#include <vector>

#include "leafsep/joint_filter.hpp"
#include "leafsep/point_cloud.hpp"

namespace leafsep {

/// Labels over the filtered core cloud, one label per leaf center.
using LeafSet = LabelMap;

/// A small, locally flat cluster of one boundary layer: the atomic unit
/// of label growth.
struct Facet {
    std::vector<int> members;  // indices into the layer cloud
    Vec3 centroid = Vec3::Zero();
    Vec3 meanNormal = Vec3::UnitZ();
};

using FacetSet = std::vector<Facet>;

struct SegParams {
    double dL = 0.0;    // region-growing hop distance (m)
    double dAdj = 0.0;  // facet/region adjacency distance; 0 means dL
    double seedCurvatureMax = std::numeric_limits<double>::infinity();
    double normalAngleMaxDeg = 20.0;
    int maxFacetPoints = 0;  // 0 means max(30, ceil(layerSize/50))
    int kmeansIters = 5;
    int pcaK = 20;

    double adjacency() const { return dAdj > 0.0 ? dAdj : dL; }
    void validate() const;
};

/// Breadth-first flood fill over the <= d_l proximity graph of the core;
/// every connected component becomes one leaf center. The lowest
/// unvisited index seeds the next component, so labels are deterministic.
LeafSet preSegmentCenters(const PointCloud& core, double dL);

/// Over-segments one boundary layer into facets: per-point PCA features,
/// curvature-seeded coarse growth capped at maxFacetPoints, then a few
/// rounds of locality-restricted K-means over (centroid, normal) centers.
/// The facets partition the layer.
FacetSet overSegmentFacets(const PointCloud& layer, const SegParams& params);

/// One boundary layer prepared for growth: its points' indices in the
/// original cloud plus its facet partition.
struct GrowLayer {
    std::vector<int> sourceIndex;
    FacetSet facets;
};

/// Grows leaf-center labels outward through the layer facets,
/// innermost layer first. Within a layer, sweeps attach every unlabeled
/// facet adjacent (min inter-point distance <= dAdj) to a labeled region
/// until nothing changes; leftover facets seed new leaves and flood
/// breadth-first through facet adjacency. Returns a label per original
/// point.
Segmentation growFacets(const PointCloud& original, const LeafSet& coreLabels,
                        const std::vector<int>& coreIndex,
                        const std::vector<GrowLayer>& layersInnermostFirst, double dAdj);

/// The full pipeline on a preprocessed canopy cloud: multi-round joint
/// filtering, leaf center pre-segmentation, per-layer facet
/// over-segmentation, and inside-out growth.
Segmentation segmentLeaves(const PointCloud& cloud, const JointFilterParams& jointParams,
                           int rounds, const SegParams& segParams);

/// Deterministic label -> RGB palette for viewers and PLY export.
Rgb labelColor(std::int32_t label);

}  // namespace leafsep
