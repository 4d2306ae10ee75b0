#pragma once

#include <optional>
#include <span>
#include <vector>

#include "leafsep/point_cloud.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

/// Orthonormal frame from a local eigen-decomposition, eigenvalues in
/// descending order: u spans the largest variance direction, n is the
/// surface normal (smallest variance), v = n x u completes the frame.
struct LocalFrame {
    Vec3 u;
    Vec3 v;
    Vec3 n;
    double lambdaU = 0.0;
    double lambdaV = 0.0;
    double lambdaN = 0.0;

    /// lambdaN / (lambdaU + lambdaV + lambdaN); 0 for perfect planes.
    double curvature() const {
        const double s = lambdaU + lambdaV + lambdaN;
        return s > 0.0 ? lambdaN / s : 0.0;
    }
};

/// PCA frame of an explicit point set (used by the trait estimators and
/// by tests that need frames at arbitrary positions).
/// Throws DegenerateNeighborhood if all points coincide.
LocalFrame pcaFrame(std::span<const Vec3> points);

/// PCA frame at cloud point q over {q} plus its k nearest neighbors.
/// Requires k >= 3 and at least k+1 points in the cloud.
LocalFrame localPCA(const SpatialIndex& index, int q, int k);

/// Mean nearest-neighbor distance over a random sample of at most
/// sampleSize points (all points when the cloud is small). Deterministic
/// for a fixed seed. Throws EmptyCloud for clouds with < 2 points.
double averageSpacing(const PointCloud& cloud, int sampleSize = 1000,
                      std::uint64_t seed = 0x5eedULL);

/// Largest circular gap (radians) of a set of planar angles, including
/// the wrap-around gap across +-pi. Angles need not be sorted.
double maxCircularGap(std::vector<double>& angles);

/// Angles of the projections of (points[i] - origin) onto span{u, v},
/// measured from u, in (-pi, pi]. Projections shorter than eps are
/// skipped (directionless).
std::vector<double> projectedAngles(std::span<const Vec3> points, const Vec3& origin,
                                    const Vec3& u, const Vec3& v, double eps = 1e-12);

/// Connected components of the <= linkDistance proximity graph.
/// Labels are assigned in breadth-first order from the lowest unvisited
/// index; returns a finalized LabelMap.
LabelMap connectedComponents(const PointCloud& cloud, double linkDistance);

}  // namespace leafsep
