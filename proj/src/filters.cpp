#include "leafsep/filters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "leafsep/parallel.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

namespace {

Filtered keepWhere(const PointCloud& cloud, const std::vector<char>& keep) {
    Filtered out;
    for (int i = 0; i < cloud.size(); ++i) {
        if (!keep[i]) continue;
        out.sourceIndex.push_back(i);
        out.cloud.positions.push_back(cloud.positions[i]);
        if (cloud.hasColors()) out.cloud.colors.push_back(cloud.colors[i]);
    }
    return out;
}

void requireKeys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known)
            throw ConfigError("filter spec: unknown key '" + item.key() + "'");
    }
}

Vec3 vec3FromJson(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string("filter spec: ") + what + " must be a 3-element array");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

std::string FilterSpec::kindName() const {
    struct Visitor {
        std::string operator()(const RegionFilterParams&) const { return "region"; }
        std::string operator()(const RadiusOutlierParams&) const { return "radius_outlier"; }
        std::string operator()(const StatisticalKnnParams&) const { return "statistical_knn"; }
        std::string operator()(const ColorFilterParams&) const { return "color"; }
        std::string operator()(const VoxelDownsampleParams&) const { return "voxel_downsample"; }
    };
    return std::visit(Visitor{}, params);
}

FilterSpec FilterSpec::fromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("filter spec: expected an object with a 'kind' key");
    const std::string kind = j.at("kind").get<std::string>();

    FilterSpec spec;
    if (kind == "region") {
        requireKeys(j, {"kind", "min", "max"});
        RegionFilterParams p;
        if (j.contains("min")) p.boxMin = vec3FromJson(j.at("min"), "min");
        if (j.contains("max")) p.boxMax = vec3FromJson(j.at("max"), "max");
        spec.params = p;
    } else if (kind == "radius_outlier") {
        requireKeys(j, {"kind", "r", "n_threshold"});
        RadiusOutlierParams p;
        p.r = j.at("r").get<double>();
        p.nThreshold = j.at("n_threshold").get<int>();
        if (p.r <= 0.0) throw ConfigError("radius_outlier: r must be > 0");
        if (p.nThreshold < 0) throw ConfigError("radius_outlier: n_threshold must be >= 0");
        spec.params = p;
    } else if (kind == "statistical_knn") {
        requireKeys(j, {"kind", "k", "std_mul"});
        StatisticalKnnParams p;
        p.k = j.at("k").get<int>();
        p.stdMul = j.at("std_mul").get<double>();
        if (p.k < 1) throw ConfigError("statistical_knn: k must be >= 1");
        if (p.stdMul <= 0.0) throw ConfigError("statistical_knn: std_mul must be > 0");
        spec.params = p;
    } else if (kind == "color") {
        requireKeys(j, {"kind", "min_greenness"});
        ColorFilterParams p;
        p.minGreenness = j.at("min_greenness").get<double>();
        if (p.minGreenness < 0.0) throw ConfigError("color: min_greenness must be >= 0");
        spec.params = p;
    } else if (kind == "voxel_downsample") {
        requireKeys(j, {"kind", "voxel_size"});
        VoxelDownsampleParams p;
        p.voxelSize = j.at("voxel_size").get<double>();
        if (p.voxelSize <= 0.0) throw ConfigError("voxel_downsample: voxel_size must be > 0");
        spec.params = p;
    } else {
        throw ConfigError("filter spec: unknown kind '" + kind + "'");
    }
    return spec;
}

FilterChain chainFromJson(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("filter chain: expected an array of filter specs");
    FilterChain chain;
    chain.reserve(j.size());
    for (const auto& entry : j) chain.push_back(FilterSpec::fromJson(entry));
    return chain;
}

FilterChain presetChain(const std::string& name) {
    // Placeholder region boxes and thresholds; scenes differ too much for
    // universal values, so these are starting points to tune.
    const RegionFilterParams region{Vec3(-1.0, -1.0, 0.02), Vec3(1.0, 1.0, 2.0)};

    if (name == "epipremnum") {
        return {FilterSpec{region}, FilterSpec{RadiusOutlierParams{0.01, 10}},
                FilterSpec{StatisticalKnnParams{16, 1.0}}};
    }
    if (name == "monstera") {
        return {FilterSpec{region}, FilterSpec{StatisticalKnnParams{16, 1.0}}};
    }
    if (name == "calathea") {
        return {FilterSpec{region}, FilterSpec{ColorFilterParams{0.1}},
                FilterSpec{RadiusOutlierParams{0.005, 8}},
                FilterSpec{VoxelDownsampleParams{0.002}}};
    }
    if (name == "hedera") {
        return {FilterSpec{region}, FilterSpec{RadiusOutlierParams{0.004, 6}},
                FilterSpec{VoxelDownsampleParams{0.002}}};
    }
    throw ConfigError("unknown preset chain '" + name + "'");
}

Filtered regionFilter(const PointCloud& cloud, const Vec3& boxMin, const Vec3& boxMax) {
    for (int a = 0; a < 3; ++a)
        if (boxMin[a] > boxMax[a]) throw ConfigError("regionFilter: inverted box");

    std::vector<char> keep(cloud.size(), 0);
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.positions[i];
        keep[i] = (p.x() >= boxMin.x() && p.x() <= boxMax.x() && p.y() >= boxMin.y() &&
                   p.y() <= boxMax.y() && p.z() >= boxMin.z() && p.z() <= boxMax.z());
    }
    return keepWhere(cloud, keep);
}

Filtered radiusOutlierFilter(const PointCloud& cloud, double r, int nThreshold) {
    if (r <= 0.0) throw ConfigError("radiusOutlierFilter: r must be > 0");
    if (cloud.empty() || nThreshold <= 0) {
        std::vector<char> keep(cloud.size(), 1);
        return keepWhere(cloud, keep);
    }
    SpatialIndex index(cloud);
    std::vector<char> keep(cloud.size(), 0);
    parallelFor(cloud.size(),
                [&](int i) { keep[i] = index.radiusCount(i, r) >= nThreshold; });
    return keepWhere(cloud, keep);
}

Filtered statisticalKnnFilter(const PointCloud& cloud, int k, double stdMul) {
    if (k < 1) throw ConfigError("statisticalKnnFilter: k must be >= 1");
    if (stdMul <= 0.0) throw ConfigError("statisticalKnnFilter: std_mul must be > 0");
    if (cloud.size() <= k)
        throw ConfigError("statisticalKnnFilter: cloud must have more than k points");

    SpatialIndex index(cloud);
    std::vector<double> meanDist(cloud.size());
    parallelFor(cloud.size(), [&](int i) {
        double sum = 0.0;
        for (int nbr : index.neighborsOf(i, k))
            sum += (cloud.positions[nbr] - cloud.positions[i]).norm();
        meanDist[i] = sum / k;
    });

    double mean = 0.0;
    for (double d : meanDist) mean += d;
    mean /= cloud.size();
    double var = 0.0;
    for (double d : meanDist) var += (d - mean) * (d - mean);
    var /= cloud.size();
    const double cutoff = mean + stdMul * std::sqrt(var);

    std::vector<char> keep(cloud.size(), 0);
    for (int i = 0; i < cloud.size(); ++i) keep[i] = meanDist[i] <= cutoff;
    return keepWhere(cloud, keep);
}

Filtered colorFilter(const PointCloud& cloud, double minGreenness) {
    if (!cloud.hasColors() && !cloud.empty())
        throw MissingColor("colorFilter: cloud has no colors");
    std::vector<char> keep(cloud.size(), 0);
    for (int i = 0; i < cloud.size(); ++i) {
        const Rgb& c = cloud.colors[i];
        const double r = c[0] / 255.0, g = c[1] / 255.0, b = c[2] / 255.0;
        keep[i] = (2.0 * g - r - b) >= minGreenness;
    }
    return keepWhere(cloud, keep);
}

PointCloud voxelDownsample(const PointCloud& cloud, double voxelSize) {
    if (voxelSize <= 0.0) throw ConfigError("voxelDownsample: voxel_size must be > 0");
    if (cloud.empty()) return {};

    Vec3 minCorner = cloud.positions[0];
    for (const Vec3& p : cloud.positions) minCorner = minCorner.cwiseMin(p);

    struct Acc {
        Vec3 posSum = Vec3::Zero();
        double r = 0.0, g = 0.0, b = 0.0;
        int count = 0;
    };
    // Ordered map keys the output deterministically by voxel coordinate.
    std::map<std::tuple<long long, long long, long long>, Acc> voxels;
    for (int i = 0; i < cloud.size(); ++i) {
        const Vec3 rel = (cloud.positions[i] - minCorner) / voxelSize;
        const auto key = std::make_tuple(static_cast<long long>(std::floor(rel.x())),
                                         static_cast<long long>(std::floor(rel.y())),
                                         static_cast<long long>(std::floor(rel.z())));
        Acc& acc = voxels[key];
        acc.posSum += cloud.positions[i];
        if (cloud.hasColors()) {
            acc.r += cloud.colors[i][0];
            acc.g += cloud.colors[i][1];
            acc.b += cloud.colors[i][2];
        }
        acc.count += 1;
    }

    PointCloud out;
    out.positions.reserve(voxels.size());
    if (cloud.hasColors()) out.colors.reserve(voxels.size());
    for (const auto& [key, acc] : voxels) {
        out.positions.push_back(acc.posSum / acc.count);
        if (cloud.hasColors()) {
            auto channel = [&](double sum) {
                return static_cast<std::uint8_t>(std::lround(sum / acc.count));
            };
            out.colors.push_back(Rgb{channel(acc.r), channel(acc.g), channel(acc.b)});
        }
    }
    return out;
}

ChainResult runChain(const PointCloud& cloud, const FilterChain& chain) {
    ChainResult result;
    result.cloud = cloud;
    for (const FilterSpec& spec : chain) {
        StageCount stage;
        stage.kind = spec.kindName();
        stage.inCount = result.cloud.size();

        struct Apply {
            const PointCloud& in;
            PointCloud operator()(const RegionFilterParams& p) const {
                return regionFilter(in, p.boxMin, p.boxMax).cloud;
            }
            PointCloud operator()(const RadiusOutlierParams& p) const {
                return radiusOutlierFilter(in, p.r, p.nThreshold).cloud;
            }
            PointCloud operator()(const StatisticalKnnParams& p) const {
                return statisticalKnnFilter(in, p.k, p.stdMul).cloud;
            }
            PointCloud operator()(const ColorFilterParams& p) const {
                return colorFilter(in, p.minGreenness).cloud;
            }
            PointCloud operator()(const VoxelDownsampleParams& p) const {
                return voxelDownsample(in, p.voxelSize);
            }
        };
        result.cloud = std::visit(Apply{result.cloud}, spec.params);
        stage.outCount = result.cloud.size();
        result.stages.push_back(stage);
    }
    return result;
}

}  // namespace leafsep
