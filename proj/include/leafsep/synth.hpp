#pragma once

#include <Eigen/Geometry>
#include <cstdint>
#include <string>
#include <vector>

#include "leafsep/point_cloud.hpp"

#include "json.hpp"

namespace leafsep {

enum class LeafShape { Disc, Ellipse, Funnel, Strip };

struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Vec3 translation = Vec3::Zero();
};

/// One parametric leaf surface.
///
/// Local frames: discs/ellipses lie in z=0; a funnel is the paraboloid
/// cap z = curvature * (x^2 + y^2) over a disc of radius sizeA (optionally
/// an angular sector); a strip is z = curvature * x^2 over the rectangle
/// [-sizeA/2, sizeA/2] x [-sizeB/2, sizeB/2].
struct LeafSpec {
    LeafShape shape = LeafShape::Disc;
    double sizeACm = 5.0;      // disc/funnel: radius; ellipse: semi-major; strip: length
    double sizeBCm = 0.0;      // ellipse: semi-minor; strip: width
    double curvature = 0.0;    // 1/m, funnel and strip only
    double sectorDeg = 360.0;  // funnel only
    Pose pose;
    double spacingM = 0.001;
    double noiseSigmaM = 0.0;
};

/// A slab of halved sampling density imitating the low point density of
/// occluded contact zones: points p with |normal . (p - origin)| <=
/// halfThickness and in-plane distance to origin <= radius. Thinning
/// extends `feather` beyond the declared strip (shadowing fades
/// gradually); ground-truth membership uses the strict bounds.
struct ContactStrip {
    Vec3 origin = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    double halfThickness = 0.0;
    double radius = 0.0;
    double feather = 0.0;

    bool contains(const Vec3& p) const { return within(p, 0.0); }
    bool thins(const Vec3& p) const { return within(p, feather); }

private:
    bool within(const Vec3& p, double margin) const;
};

enum class OverlapLayout { None, CoplanarTouching, CrossOverlap, Mixed };

struct SceneSpec {
    std::vector<LeafSpec> leaves;
    std::vector<ContactStrip> contactStrips;
    OverlapLayout layout = OverlapLayout::None;
    std::uint64_t seed = 0;

    static SceneSpec fromJson(const nlohmann::json& j);
};

struct AnalyticTraits {
    double areaCm2 = 0.0;
    double lengthCm = 0.0;
    double widthCm = 0.0;
};

struct Scene {
    PointCloud cloud;
    Segmentation groundTruth;
    std::vector<AnalyticTraits> traits;     // one per leaf
    std::vector<char> inContactStrip;       // one per point
};

/// Samples every leaf on a jittered grid plus an exact boundary ring,
/// applies pose and normal-direction noise, thins contact strips to half
/// density, and labels points by generating leaf. Deterministic:
/// identical spec and seed give a bit-identical scene.
Scene generateScene(const SceneSpec& spec);

/// Surface-level truth for one leaf: exact surface area, and the extents
/// of the continuous surface projected on its own mean-normal plane.
/// Closed forms where available, fine quadrature otherwise.
AnalyticTraits analyticTraits(const LeafSpec& leaf);

/// Rotation by XYZ Euler angles in degrees.
Eigen::Matrix3d rotationXyzDeg(double rxDeg, double ryDeg, double rzDeg);

/// Named scenes used by tests and the CLI.
///   single_disc       one flat disc, radius 5 cm
///   coplanar_pair     two coplanar ellipses joined by a tangent neck
///   crossed_funnels   two curved caps crossing through a half-density strip
///   cross_4           four funnels chained by crossing contacts
///   mixed_9           nine leaves with mixed coplanar/cross contacts
///   eroded_disc       a large disc plus a small one that filtering consumes
///   perf_50k          about fifty thousand points across ten leaves
SceneSpec namedScene(const std::string& name, std::uint64_t seed);

std::vector<std::string> namedSceneList();

}  // namespace leafsep
