#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "leafsep/point_cloud.hpp"

#include "json.hpp"

namespace leafsep {

struct RegionFilterParams {
    Vec3 boxMin{-std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()};
    Vec3 boxMax{std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity(),
                std::numeric_limits<double>::infinity()};
};

struct RadiusOutlierParams {
    double r = 0.0;
    int nThreshold = 1;
};

struct StatisticalKnnParams {
    int k = 8;
    double stdMul = 1.0;
};

struct ColorFilterParams {
    double minGreenness = 0.0;
};

struct VoxelDownsampleParams {
    double voxelSize = 0.0;
};

/// One preprocessing stage: a filter kind plus its parameters.
struct FilterSpec {
    std::variant<RegionFilterParams, RadiusOutlierParams, StatisticalKnnParams,
                 ColorFilterParams, VoxelDownsampleParams>
        params;

    std::string kindName() const;

    /// Parses {"kind": ..., ...} entries; unknown kinds or keys raise
    /// ConfigError.
    static FilterSpec fromJson(const nlohmann::json& j);
};

/// Ordered sequence of filters, applied strictly front to back.
using FilterChain = std::vector<FilterSpec>;

FilterChain chainFromJson(const nlohmann::json& j);

/// Named per-species chains mirroring the shipped presets
/// (epipremnum, monstera, calathea, hedera). Region-box and greenness
/// values are placeholders that users tune per scene.
FilterChain presetChain(const std::string& name);

/// Keeps the points inside the closed axis-aligned box.
Filtered regionFilter(const PointCloud& cloud, const Vec3& boxMin, const Vec3& boxMax);

/// Keeps point q iff at least nThreshold other points lie within r of it.
Filtered radiusOutlierFilter(const PointCloud& cloud, double r, int nThreshold);

/// Removes points whose mean k-NN distance exceeds
/// mean + stdMul * stddev of that statistic over the cloud.
Filtered statisticalKnnFilter(const PointCloud& cloud, int k, double stdMul);

/// Keeps points with excess-green index 2g - r - b >= minGreenness
/// (channels normalized to [0,1]). Throws MissingColor on colorless clouds.
Filtered colorFilter(const PointCloud& cloud, double minGreenness);

/// One output point per non-empty voxel: the centroid of its points
/// (mean color if present). The grid is anchored at the cloud's min
/// corner; output is ordered by voxel coordinate.
PointCloud voxelDownsample(const PointCloud& cloud, double voxelSize);

struct StageCount {
    std::string kind;
    int inCount = 0;
    int outCount = 0;
};

struct ChainResult {
    PointCloud cloud;
    std::vector<StageCount> stages;
};

/// Applies the chain in order, recording per-stage point counts.
ChainResult runChain(const PointCloud& cloud, const FilterChain& chain);

}  // namespace leafsep
