#include "leafsep/joint_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "leafsep/parallel.hpp"
#include "leafsep/rng.hpp"

namespace leafsep {

namespace {

Split splitByFlag(const PointCloud& cloud, const std::vector<char>& removeFlag) {
    Split split;
    for (int i = 0; i < cloud.size(); ++i) {
        if (removeFlag[i]) {
            split.removedIndex.push_back(i);
            split.removed.positions.push_back(cloud.positions[i]);
            if (cloud.hasColors()) split.removed.colors.push_back(cloud.colors[i]);
        } else {
            split.keptIndex.push_back(i);
            split.kept.positions.push_back(cloud.positions[i]);
            if (cloud.hasColors()) split.kept.colors.push_back(cloud.colors[i]);
        }
    }
    return split;
}

}  // namespace

void JointFilterParams::validate() const {
    if (r <= 0.0) throw ConfigError("joint filter: r must be > 0");
    if (nThreshold < 1) throw ConfigError("joint filter: n_threshold must be >= 1");
    if (k < 3) throw ConfigError("joint filter: k must be >= 3");
    if (thetaThresholdDeg <= 0.0 || thetaThresholdDeg >= 360.0)
        throw ConfigError("joint filter: theta_threshold must lie in (0, 360) degrees");
    if (nIter < 1) throw ConfigError("joint filter: n_iter must be >= 1");
}

Split rbof(const PointCloud& cloud, double r, int nThreshold) {
    if (r <= 0.0) throw ConfigError("rbof: r must be > 0");
    std::vector<char> remove(cloud.size(), 0);
    if (!cloud.empty() && nThreshold > 0) {
        SpatialIndex index(cloud);
        parallelFor(cloud.size(),
                    [&](int i) { remove[i] = index.radiusCount(i, r) < nThreshold; });
    }
    return splitByFlag(cloud, remove);
}

double boundaryAngleGap(const SpatialIndex& index, int q, int k) {
    const PointCloud& cloud = index.cloud();
    const std::vector<int> nbrs = index.neighborsOf(q, k);
    if (nbrs.size() < 2)
        throw DegenerateNeighborhood("boundaryAngleGap: too few neighbors");

    std::vector<Vec3> pts;
    pts.reserve(nbrs.size() + 1);
    pts.push_back(cloud.positions[q]);
    for (int idx : nbrs) pts.push_back(cloud.positions[idx]);
    const LocalFrame frame = pcaFrame(pts);  // throws if coincident

    std::vector<Vec3> nbrPts(pts.begin() + 1, pts.end());
    std::vector<double> angles =
        projectedAngles(nbrPts, cloud.positions[q], frame.u, frame.v);
    if (angles.empty())
        throw DegenerateNeighborhood("boundaryAngleGap: no projectable neighbors");
    return maxCircularGap(angles);
}

Split sbf(const PointCloud& cloud, int k, double thetaThresholdDeg, int nIter) {
    if (k < 3) throw ConfigError("sbf: k must be >= 3");
    if (nIter < 0) throw ConfigError("sbf: n_iter must be >= 0");
    const double threshold = thetaThresholdDeg * M_PI / 180.0;

    std::vector<int> survivors(cloud.size());
    std::iota(survivors.begin(), survivors.end(), 0);
    std::vector<char> removedFlag(cloud.size(), 0);

    for (int iter = 0; iter < nIter && !survivors.empty(); ++iter) {
        const PointCloud sub = selectPoints(cloud, survivors);
        const int n = sub.size();
        const int kEff = std::min(k, n - 1);

        std::vector<char> offender(n, 0);
        if (kEff < 2) {
            // Too few points to define any tangent plane: all boundary.
            std::fill(offender.begin(), offender.end(), 1);
        } else {
            const SpatialIndex index(sub);
            parallelFor(n, [&](int i) {
                try {
                    offender[i] = boundaryAngleGap(index, i, kEff) > threshold;
                } catch (const DegenerateNeighborhood&) {
                    offender[i] = 1;
                }
            });
        }

        std::vector<int> next;
        next.reserve(survivors.size());
        bool any = false;
        for (int i = 0; i < n; ++i) {
            if (offender[i]) {
                removedFlag[survivors[i]] = 1;
                any = true;
            } else {
                next.push_back(survivors[i]);
            }
        }
        survivors.swap(next);
        if (!any) break;  // fixed point, later passes are no-ops
    }
    return splitByFlag(cloud, removedFlag);
}

Split jointFilter(const PointCloud& cloud, const JointFilterParams& params) {
    params.validate();
    if (cloud.empty()) return {};

    Split stage1 = rbof(cloud, params.r, params.nThreshold);
    Split stage2 = sbf(stage1.kept, params.k, params.thetaThresholdDeg, params.nIter);

    Split out;
    out.kept = std::move(stage2.kept);
    out.keptIndex.reserve(stage2.keptIndex.size());
    for (int local : stage2.keptIndex) out.keptIndex.push_back(stage1.keptIndex[local]);

    // boundary = rbof removals followed by sbf removals, re-sorted into
    // input order so the partition is an orderly re-indexing
    std::vector<int> removedIdx = stage1.removedIndex;
    for (int local : stage2.removedIndex) removedIdx.push_back(stage1.keptIndex[local]);
    std::sort(removedIdx.begin(), removedIdx.end());
    out.removedIndex = std::move(removedIdx);
    out.removed = selectPoints(cloud, out.removedIndex);
    return out;
}

LayerStack multiRoundFilter(const PointCloud& cloud, const JointFilterParams& params,
                            int rounds) {
    if (rounds < 1) throw ConfigError("multiRoundFilter: rounds must be >= 1");

    LayerStack stack;
    stack.core = cloud;
    stack.coreIndex.resize(cloud.size());
    std::iota(stack.coreIndex.begin(), stack.coreIndex.end(), 0);

    for (int round = 0; round < rounds && !stack.core.empty(); ++round) {
        Split split = jointFilter(stack.core, params);

        std::vector<int> layerIdx;
        layerIdx.reserve(split.removedIndex.size());
        for (int local : split.removedIndex) layerIdx.push_back(stack.coreIndex[local]);
        stack.layers.push_back(std::move(split.removed));
        stack.layerIndex.push_back(std::move(layerIdx));

        std::vector<int> coreIdx;
        coreIdx.reserve(split.keptIndex.size());
        for (int local : split.keptIndex) coreIdx.push_back(stack.coreIndex[local]);
        stack.core = std::move(split.kept);
        stack.coreIndex = std::move(coreIdx);
    }
    return stack;
}

SuggestedParams suggestParams(const PointCloud& cloud, std::uint64_t seed) {
    if (cloud.size() < 2) throw EmptyCloud("suggestParams: need at least 2 points");

    SuggestedParams out;
    out.averageSpacing = averageSpacing(cloud, 1000, seed);
    out.filter.r = 4.5 * out.averageSpacing;
    out.filter.k = 20;
    out.filter.thetaThresholdDeg = 90.0;
    out.filter.nIter = 3;
    out.dL = 3.0 * out.averageSpacing;

    // Mean neighbor count at r over a sample, reusing the spacing sample
    // strategy. nThreshold sits at half the mean, comfortably below the
    // over-filtering limit.
    SpatialIndex index(cloud);
    const int n = cloud.size();
    const int sampleSize = 1000;
    std::vector<int> sample;
    if (n <= sampleSize) {
        sample.resize(n);
        std::iota(sample.begin(), sample.end(), 0);
    } else {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        Rng rng(seed);
        for (int i = 0; i < sampleSize; ++i) {
            const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(all[i], all[j]);
            sample.push_back(all[i]);
        }
    }
    double sum = 0.0;
    for (int idx : sample) sum += index.radiusCount(idx, out.filter.r);
    out.meanNeighborCount = sum / static_cast<double>(sample.size());
    out.filter.nThreshold = std::max(1, static_cast<int>(std::llround(0.5 * out.meanNeighborCount)));
    return out;
}

}  // namespace leafsep
