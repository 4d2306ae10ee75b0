#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "leafsep/errors.hpp"

namespace leafsep {

using Vec3 = Eigen::Vector3d;
using Rgb = std::array<std::uint8_t, 3>;

/// A cloud of 3D points with optional per-point RGB color.
///
/// Points are addressed by their dense index 0..size()-1. Read-only
/// operations never reorder points; filtering operations build a new
/// cloud plus an index map back into the source.
struct PointCloud {
    std::vector<Vec3> positions;
    std::vector<Rgb> colors;  // empty, or one entry per point

    int size() const { return static_cast<int>(positions.size()); }
    bool empty() const { return positions.empty(); }
    bool hasColors() const { return !colors.empty(); }

    void append(const Vec3& p) { positions.push_back(p); }
    void append(const Vec3& p, const Rgb& c) {
        positions.push_back(p);
        colors.push_back(c);
    }
};

/// Per-point integer labels. kNone marks unlabeled points; finalized
/// maps use the contiguous range 0..labelCount-1.
struct LabelMap {
    static constexpr std::int32_t kNone = -1;

    std::vector<std::int32_t> values;
    std::int32_t labelCount = 0;

    int size() const { return static_cast<int>(values.size()); }
};

using Segmentation = LabelMap;

/// Result of a subset filter: the surviving points plus, per output
/// point, its index in the source cloud.
struct Filtered {
    PointCloud cloud;
    std::vector<int> sourceIndex;
};

/// Gathers cloud[indices[i]] into a new cloud (colors follow if present).
PointCloud selectPoints(const PointCloud& cloud, const std::vector<int>& indices);

inline bool isFinite(const Vec3& p) {
    return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

}  // namespace leafsep
