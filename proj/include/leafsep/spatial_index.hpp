#pragma once

#include <vector>

#include "leafsep/point_cloud.hpp"

namespace leafsep {

/// Exact k-d tree over one immutable PointCloud.
///
/// Queries are exact (no approximation): radiusSearch returns every point
/// with ||p - q|| <= r, knnSearch returns the k nearest points with ties
/// broken by lower index. The structure is read-only after construction
/// and safe to share across threads.
class SpatialIndex {
public:
    /// Builds the tree. Throws EmptyCloud for an empty input.
    explicit SpatialIndex(const PointCloud& cloud);

    const PointCloud& cloud() const { return *cloud_; }
    int size() const { return cloud_->size(); }

    /// All indices i with ||p_i - q|| <= r, ascending by index.
    std::vector<int> radiusSearch(const Vec3& q, double r) const;

    /// The k nearest points to q (fewer if the cloud is smaller), sorted
    /// by (distance, index). A cloud point at q's exact position counts.
    std::vector<int> knnSearch(const Vec3& q, int k) const;

    /// The k nearest neighbors of cloud point q, excluding q itself.
    std::vector<int> neighborsOf(int q, int k) const;

    /// Number of OTHER points within distance r of cloud point q.
    int radiusCount(int q, double r) const;

    /// Distance from point q to its nearest other point.
    double nearestNeighborDistance(int q) const;

private:
    struct Node {
        // leaf: [begin,end) into order_; split: axis + plane position
        int begin = 0;
        int end = 0;
        int axis = -1;
        double split = 0.0;
        int left = -1;
        int right = -1;
        Vec3 boxMin;
        Vec3 boxMax;
        bool isLeaf() const { return axis < 0; }
    };

    int buildNode(int begin, int end);
    void radiusRecurse(int node, const Vec3& q, double r2, std::vector<int>& out) const;

    const PointCloud* cloud_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    static constexpr int kLeafSize = 16;
};

}  // namespace leafsep
