#include "leafsep/geometry.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "leafsep/rng.hpp"

namespace leafsep {

namespace {

// Lexicographic sign fix: flips v so its first nonzero component along
// (z, x, y) is positive. Keeps eigenvector orientation deterministic.
Vec3 orientDeterministic(Vec3 v) {
    if (v.z() < 0.0) return -v;
    if (v.z() > 0.0) return v;
    if (v.x() < 0.0) return -v;
    if (v.x() > 0.0) return v;
    if (v.y() < 0.0) return -v;
    return v;
}

LocalFrame frameFromCovariance(const Eigen::Matrix3d& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Eigen::Vector3d evals = solver.eigenvalues();  // ascending
    const Eigen::Matrix3d evecs = solver.eigenvectors();

    LocalFrame frame;
    frame.lambdaU = std::max(0.0, evals(2));
    frame.lambdaV = std::max(0.0, evals(1));
    frame.lambdaN = std::max(0.0, evals(0));
    frame.u = orientDeterministic(evecs.col(2));
    frame.n = orientDeterministic(evecs.col(0));
    frame.v = frame.n.cross(frame.u);
    return frame;
}

}  // namespace

LocalFrame pcaFrame(std::span<const Vec3> points) {
    if (points.size() < 2) throw DegenerateNeighborhood("pcaFrame: fewer than 2 points");

    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : points) mean += p;
    mean /= static_cast<double>(points.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Vec3& p : points) {
        const Vec3 d = p - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(points.size());

    LocalFrame frame = frameFromCovariance(cov);
    if (frame.lambdaU <= 0.0)
        throw DegenerateNeighborhood("pcaFrame: all points coincide");
    return frame;
}

LocalFrame localPCA(const SpatialIndex& index, int q, int k) {
    if (k < 3) throw ConfigError("localPCA: k must be >= 3");
    const PointCloud& cloud = index.cloud();
    if (cloud.size() < k + 1)
        throw ConfigError("localPCA: cloud smaller than k+1 points");

    const std::vector<int> nbrs = index.neighborsOf(q, k);
    std::vector<Vec3> pts;
    pts.reserve(nbrs.size() + 1);
    pts.push_back(cloud.positions[q]);
    for (int idx : nbrs) pts.push_back(cloud.positions[idx]);
    return pcaFrame(pts);
}

double averageSpacing(const PointCloud& cloud, int sampleSize, std::uint64_t seed) {
    const int n = cloud.size();
    if (n < 2) throw EmptyCloud("averageSpacing: need at least 2 points");

    SpatialIndex index(cloud);
    std::vector<int> sample;
    if (n <= sampleSize) {
        sample.resize(n);
        std::iota(sample.begin(), sample.end(), 0);
    } else {
        // partial Fisher-Yates over the index range
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng rng(seed);
        sample.reserve(sampleSize);
        for (int i = 0; i < sampleSize; ++i) {
            const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(all[i], all[j]);
            sample.push_back(all[i]);
        }
    }

    double sum = 0.0;
    for (int idx : sample) sum += index.nearestNeighborDistance(idx);
    return sum / static_cast<double>(sample.size());
}

std::vector<double> projectedAngles(std::span<const Vec3> points, const Vec3& origin,
                                    const Vec3& u, const Vec3& v, double eps) {
    std::vector<double> angles;
    angles.reserve(points.size());
    for (const Vec3& p : points) {
        const Vec3 d = p - origin;
        const double a = d.dot(u);
        const double b = d.dot(v);
        if (a * a + b * b < eps * eps) continue;
        angles.push_back(std::atan2(b, a));
    }
    return angles;
}

double maxCircularGap(std::vector<double>& angles) {
    if (angles.empty()) return 2.0 * M_PI;
    if (angles.size() == 1) return 2.0 * M_PI;
    std::sort(angles.begin(), angles.end());
    double gap = 2.0 * M_PI - (angles.back() - angles.front());  // wrap-around
    for (std::size_t j = 1; j < angles.size(); ++j)
        gap = std::max(gap, angles[j] - angles[j - 1]);
    return gap;
}

LabelMap connectedComponents(const PointCloud& cloud, double linkDistance) {
    LabelMap labels;
    labels.values.assign(cloud.size(), LabelMap::kNone);
    labels.labelCount = 0;
    if (cloud.empty()) return labels;

    SpatialIndex index(cloud);
    std::deque<int> queue;
    for (int seed = 0; seed < cloud.size(); ++seed) {
        if (labels.values[seed] != LabelMap::kNone) continue;
        const std::int32_t label = labels.labelCount++;
        labels.values[seed] = label;
        queue.clear();
        queue.push_back(seed);
        while (!queue.empty()) {
            const int cur = queue.front();
            queue.pop_front();
            for (int nbr : index.radiusSearch(cloud.positions[cur], linkDistance)) {
                if (labels.values[nbr] == LabelMap::kNone) {
                    labels.values[nbr] = label;
                    queue.push_back(nbr);
                }
            }
        }
    }
    return labels;
}

}  // namespace leafsep
