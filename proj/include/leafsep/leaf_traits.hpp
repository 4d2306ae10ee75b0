#pragma once

#include <array>
#include <vector>

#include "leafsep/point_cloud.hpp"

namespace leafsep {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

/// Phenotypic traits of one leaf. Lengths in cm, area in cm^2;
/// length >= width by axis ordering.
struct LeafTraits {
    double areaCm2 = 0.0;
    double lengthCm = 0.0;
    double widthCm = 0.0;
};

struct SmoothParams {
    double voxelSize = 0.0;  // downsampling voxel edge (m)
    int smoothIters = 3;
    int k = 10;              // neighborhood of the relaxation step
    double lambda = 0.5;     // step toward the neighborhood centroid
};

struct TriangulateParams {
    double searchRadius = 0.0;      // max edge length (m)
    int maxNeighbors = 40;
    double maxFanAngleDeg = 110.0;  // widest gap a fan may close
    double maxSurfaceAngleDeg = 45.0;
};

/// Voxel downsampling followed by smoothIters passes of neighborhood-mean
/// relaxation. Throws TooSparse below 10 points.
PointCloud smoothAndDownsample(const PointCloud& leaf, const SmoothParams& params);

/// Greedy front-advancing triangulation: points are fanned to their
/// radius neighbors in tangent-plane angular order, so triangles incident
/// to one vertex occupy disjoint sectors. Throws DegenerateSurface for
/// collinear input.
TriangleMesh triangulate(const PointCloud& leaf, const TriangulateParams& params);

/// Sum of triangle areas, in cm^2 (positions in meters).
double meshArea(const TriangleMesh& mesh);

/// Extents of the cloud projected on its mean-normal plane; length along
/// the in-plane direction of largest spread.
std::pair<double, double> leafLengthWidth(const PointCloud& leaf);

/// Full trait pipeline for one leaf: smooth/downsample, triangulate for
/// area, project for length and width.
LeafTraits estimateTraits(const PointCloud& leaf, const SmoothParams& smoothParams,
                          const TriangulateParams& triParams);

}  // namespace leafsep
