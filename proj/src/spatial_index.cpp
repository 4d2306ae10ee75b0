#include "leafsep/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace leafsep {

namespace {

// Squared distance from q to the node's bounding box.
double boxDistance2(const Vec3& q, const Vec3& lo, const Vec3& hi) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        double d = 0.0;
        if (q[a] < lo[a]) d = lo[a] - q[a];
        else if (q[a] > hi[a]) d = q[a] - hi[a];
        d2 += d * d;
    }
    return d2;
}

}  // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) : cloud_(&cloud) {
    if (cloud.empty()) throw EmptyCloud("SpatialIndex: cannot index an empty cloud");
    order_.resize(cloud.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * cloud.size() / kLeafSize + 8);
    buildNode(0, cloud.size());
}

int SpatialIndex::buildNode(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Node node;
    node.begin = begin;
    node.end = end;

    Vec3 lo = cloud_->positions[order_[begin]];
    Vec3 hi = lo;
    for (int i = begin + 1; i < end; ++i) {
        const Vec3& p = cloud_->positions[order_[i]];
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    node.boxMin = lo;
    node.boxMax = hi;

    const Vec3 extent = hi - lo;
    int axis = 0;
    if (extent.y() > extent.x()) axis = 1;
    if (extent.z() > extent[axis]) axis = 2;

    if (end - begin <= kLeafSize || extent[axis] <= 0.0) {
        nodes_[id] = node;  // leaf
        return id;
    }

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         double pa = cloud_->positions[a][axis];
                         double pb = cloud_->positions[b][axis];
                         return pa < pb || (pa == pb && a < b);
                     });
    node.axis = axis;
    node.split = cloud_->positions[order_[mid]][axis];
    node.left = buildNode(begin, mid);
    node.right = buildNode(mid, end);
    nodes_[id] = node;
    return id;
}

void SpatialIndex::radiusRecurse(int id, const Vec3& q, double r2, std::vector<int>& out) const {
    const Node& node = nodes_[id];
    if (boxDistance2(q, node.boxMin, node.boxMax) > r2) return;
    if (node.isLeaf()) {
        for (int i = node.begin; i < node.end; ++i) {
            const int idx = order_[i];
            if ((cloud_->positions[idx] - q).squaredNorm() <= r2) out.push_back(idx);
        }
        return;
    }
    radiusRecurse(node.left, q, r2, out);
    radiusRecurse(node.right, q, r2, out);
}

std::vector<int> SpatialIndex::radiusSearch(const Vec3& q, double r) const {
    std::vector<int> out;
    radiusRecurse(0, q, r * r, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> SpatialIndex::knnSearch(const Vec3& q, int k) const {
    if (k <= 0) return {};
    k = std::min(k, size());

    using Entry = std::pair<double, int>;  // (squared distance, index)
    // Max-heap on (d2, index): the root is the current worst candidate.
    std::priority_queue<Entry> heap;

    // Iterative best-first traversal.
    std::vector<std::pair<double, int>> stack;
    stack.emplace_back(0.0, 0);
    while (!stack.empty()) {
        auto [d2, id] = stack.back();
        stack.pop_back();
        if (static_cast<int>(heap.size()) == k && d2 > heap.top().first) continue;
        const Node& node = nodes_[id];
        if (node.isLeaf()) {
            for (int i = node.begin; i < node.end; ++i) {
                const int idx = order_[i];
                const double dist2 = (cloud_->positions[idx] - q).squaredNorm();
                Entry e{dist2, idx};
                if (static_cast<int>(heap.size()) < k) {
                    heap.push(e);
                } else if (e < heap.top()) {
                    heap.pop();
                    heap.push(e);
                }
            }
            continue;
        }
        const double dl = boxDistance2(q, nodes_[node.left].boxMin, nodes_[node.left].boxMax);
        const double dr = boxDistance2(q, nodes_[node.right].boxMin, nodes_[node.right].boxMax);
        // Push the farther child first so the nearer one is explored next.
        if (dl <= dr) {
            stack.emplace_back(dr, node.right);
            stack.emplace_back(dl, node.left);
        } else {
            stack.emplace_back(dl, node.left);
            stack.emplace_back(dr, node.right);
        }
    }

    std::vector<int> out(heap.size());
    std::vector<Entry> entries;
    entries.reserve(heap.size());
    while (!heap.empty()) {
        entries.push_back(heap.top());
        heap.pop();
    }
    std::sort(entries.begin(), entries.end());
    for (std::size_t i = 0; i < entries.size(); ++i) out[i] = entries[i].second;
    return out;
}

std::vector<int> SpatialIndex::neighborsOf(int q, int k) const {
    std::vector<int> found = knnSearch(cloud_->positions[q], k + 1);
    std::vector<int> out;
    out.reserve(k);
    for (int idx : found) {
        if (idx != q) out.push_back(idx);
        if (static_cast<int>(out.size()) == k) break;
    }
    return out;
}

int SpatialIndex::radiusCount(int q, double r) const {
    std::vector<int> hits;
    radiusRecurse(0, cloud_->positions[q], r * r, hits);
    int n = static_cast<int>(hits.size());
    for (int idx : hits) {
        if (idx == q) {
            --n;
            break;
        }
    }
    return n;
}

double SpatialIndex::nearestNeighborDistance(int q) const {
    std::vector<int> nn = neighborsOf(q, 1);
    if (nn.empty()) return std::numeric_limits<double>::infinity();
    return (cloud_->positions[nn[0]] - cloud_->positions[q]).norm();
}

PointCloud selectPoints(const PointCloud& cloud, const std::vector<int>& indices) {
    PointCloud out;
    out.positions.reserve(indices.size());
    if (cloud.hasColors()) out.colors.reserve(indices.size());
    for (int idx : indices) {
        out.positions.push_back(cloud.positions[idx]);
        if (cloud.hasColors()) out.colors.push_back(cloud.colors[idx]);
    }
    return out;
}

}  // namespace leafsep
