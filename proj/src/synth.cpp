#include "leafsep/synth.hpp"

#include <algorithm>
#include <cmath>

#include "leafsep/rng.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

namespace {

constexpr double kCm = 0.01;  // meters per centimeter

struct Surface {
    const LeafSpec& leaf;
    double R;   // meters: disc/funnel radius, ellipse semi-major, strip half-length
    double B;   // meters: ellipse semi-minor, strip half-width
    double c;   // curvature 1/m
    double sectorRad;

    explicit Surface(const LeafSpec& l)
        : leaf(l),
          R(l.shape == LeafShape::Strip ? 0.5 * l.sizeACm * kCm : l.sizeACm * kCm),
          B(l.shape == LeafShape::Strip ? 0.5 * l.sizeBCm * kCm : l.sizeBCm * kCm),
          c(l.curvature),
          sectorRad(l.sectorDeg * M_PI / 180.0) {}

    double height(double x, double y) const {
        switch (leaf.shape) {
            case LeafShape::Funnel: return c * (x * x + y * y);
            case LeafShape::Strip: return c * x * x;
            default: return 0.0;
        }
    }

    Vec3 unitNormal(double x, double y) const {
        double fx = 0.0, fy = 0.0;
        if (leaf.shape == LeafShape::Funnel) {
            fx = 2.0 * c * x;
            fy = 2.0 * c * y;
        } else if (leaf.shape == LeafShape::Strip) {
            fx = 2.0 * c * x;
        }
        Vec3 n(-fx, -fy, 1.0);
        return n.normalized();
    }

    bool inside(double x, double y) const {
        switch (leaf.shape) {
            case LeafShape::Disc:
                return x * x + y * y <= R * R;
            case LeafShape::Ellipse:
                return (x * x) / (R * R) + (y * y) / (B * B) <= 1.0;
            case LeafShape::Funnel: {
                if (x * x + y * y > R * R) return false;
                if (sectorRad >= 2.0 * M_PI - 1e-12) return true;
                double theta = std::atan2(y, x);
                if (theta < 0.0) theta += 2.0 * M_PI;
                return theta <= sectorRad;
            }
            case LeafShape::Strip:
                return std::abs(x) <= R && std::abs(y) <= B;
        }
        return false;
    }

    void boundingBox(double& xMin, double& xMax, double& yMin, double& yMax) const {
        switch (leaf.shape) {
            case LeafShape::Ellipse:
                xMin = -R; xMax = R; yMin = -B; yMax = B;
                return;
            case LeafShape::Strip:
                xMin = -R; xMax = R; yMin = -B; yMax = B;
                return;
            default:
                xMin = -R; xMax = R; yMin = -R; yMax = R;
                return;
        }
    }

    // Boundary curves sampled at roughly `spacing` steps of arclength.
    // Steps are jittered along the curve (points stay exactly on it), so
    // synthetic rims are as ragged as scanned ones.
    std::vector<Vec3> boundaryRing(double spacing, Rng& rng) const {
        std::vector<Vec3> ring;
        auto jit = [&]() { return rng.uniform(-0.35, 0.35); };
        auto emitArc = [&](double radius, double t0, double t1) {
            const double len = radius * (t1 - t0);
            const int n = std::max(8, static_cast<int>(std::llround(len / spacing)));
            const bool closed = t1 - t0 >= 2.0 * M_PI - 1e-12;
            for (int i = 0; i < n + (closed ? 0 : 1); ++i) {
                const bool endpoint = !closed && (i == 0 || i == n);
                const double t = t0 + (t1 - t0) * (i + (endpoint ? 0.0 : jit())) / n;
                const double x = radius * std::cos(t), y = radius * std::sin(t);
                ring.emplace_back(x, y, height(x, y));
            }
        };
        switch (leaf.shape) {
            case LeafShape::Disc:
                emitArc(R, 0.0, 2.0 * M_PI);
                break;
            case LeafShape::Ellipse: {
                const double perim =
                    M_PI * (3.0 * (R + B) - std::sqrt((3.0 * R + B) * (R + 3.0 * B)));
                const int n = std::max(12, static_cast<int>(std::llround(perim / spacing)));
                for (int i = 0; i < n; ++i) {
                    const double t = 2.0 * M_PI * (i + jit()) / n;
                    ring.emplace_back(R * std::cos(t), B * std::sin(t), 0.0);
                }
                break;
            }
            case LeafShape::Funnel: {
                const bool full = sectorRad >= 2.0 * M_PI - 1e-12;
                emitArc(R, 0.0, full ? 2.0 * M_PI : sectorRad);
                if (!full) {
                    // radial edges at theta = 0 and theta = sector; skip the
                    // rim ends (already on the arc) and emit the apex once
                    const double edgeLen =
                        c > 0.0 ? (R * std::sqrt(1.0 + 4.0 * c * c * R * R) +
                                   std::asinh(2.0 * c * R) / (2.0 * c)) * 0.5
                                : R;
                    const int n = std::max(4, static_cast<int>(std::llround(edgeLen / spacing)));
                    for (double theta : {0.0, sectorRad}) {
                        const int first = theta == 0.0 ? 0 : 1;
                        for (int i = first; i < n; ++i) {
                            const double t = R * (i + (i == 0 ? 0.0 : jit())) / n;
                            const double x = t * std::cos(theta), y = t * std::sin(theta);
                            ring.emplace_back(x, y, height(x, y));
                        }
                    }
                }
                break;
            }
            case LeafShape::Strip: {
                const double edgeLen =
                    c > 0.0 ? R * std::sqrt(1.0 + 4.0 * c * c * R * R) +
                                  std::asinh(2.0 * c * R) / (2.0 * c)
                            : 2.0 * R;
                const int nx = std::max(4, static_cast<int>(std::llround(edgeLen / spacing)));
                for (double y : {-B, B})
                    for (int i = 0; i <= nx; ++i) {
                        const bool corner = i == 0 || i == nx;
                        const double x = -R + 2.0 * R * (i + (corner ? 0.0 : jit())) / nx;
                        ring.emplace_back(x, y, height(x, 0.0));
                    }
                const int ny = std::max(2, static_cast<int>(std::llround(2.0 * B / spacing)));
                for (double x : {-R, R})
                    for (int i = 1; i < ny; ++i) {
                        const double y = -B + 2.0 * B * (i + jit()) / ny;
                        ring.emplace_back(x, y, height(x, 0.0));
                    }
                break;
            }
        }
        return ring;
    }
};

void validateLeaf(const LeafSpec& leaf, std::size_t idx) {
    auto fail = [&](const std::string& why) {
        throw ConfigError("scene leaf " + std::to_string(idx) + ": " + why);
    };
    if (leaf.spacingM <= 0.0) fail("spacing must be > 0");
    if (leaf.noiseSigmaM < 0.0) fail("noise sigma must be >= 0");
    if (leaf.sizeACm <= 0.0) fail("size_a must be > 0");
    if (leaf.shape == LeafShape::Ellipse || leaf.shape == LeafShape::Strip) {
        if (leaf.sizeBCm <= 0.0) fail("size_b must be > 0");
        if (leaf.shape == LeafShape::Ellipse && leaf.sizeBCm > leaf.sizeACm)
            fail("ellipse semi-minor exceeds semi-major");
    }
    if (leaf.curvature < 0.0) fail("curvature must be >= 0");
    if (leaf.shape == LeafShape::Funnel &&
        (leaf.sectorDeg <= 0.0 || leaf.sectorDeg > 360.0))
        fail("sector must lie in (0, 360] degrees");
    // Reject self-intersecting configurations: cap the surface slope.
    const double halfSpan =
        (leaf.shape == LeafShape::Strip ? 0.5 * leaf.sizeACm : leaf.sizeACm) * kCm;
    if (leaf.curvature > 0.0 && 2.0 * leaf.curvature * halfSpan > 10.0)
        fail("curvature too steep for the leaf extent");
}

}  // namespace

bool ContactStrip::within(const Vec3& p, double margin) const {
    const Vec3 d = p - origin;
    const double along = d.dot(normal);
    if (std::abs(along) > halfThickness + margin) return false;
    const double r = radius + margin;
    return (d - along * normal).squaredNorm() <= r * r;
}

Eigen::Matrix3d rotationXyzDeg(double rxDeg, double ryDeg, double rzDeg) {
    const double rx = rxDeg * M_PI / 180.0;
    const double ry = ryDeg * M_PI / 180.0;
    const double rz = rzDeg * M_PI / 180.0;
    return (Eigen::AngleAxisd(rz, Vec3::UnitZ()) * Eigen::AngleAxisd(ry, Vec3::UnitY()) *
            Eigen::AngleAxisd(rx, Vec3::UnitX()))
        .toRotationMatrix();
}

Scene generateScene(const SceneSpec& spec) {
    if (spec.leaves.empty()) throw ConfigError("scene: no leaves");
    for (std::size_t i = 0; i < spec.leaves.size(); ++i) validateLeaf(spec.leaves[i], i);

    Scene scene;
    scene.groundTruth.labelCount = static_cast<std::int32_t>(spec.leaves.size());
    scene.traits.reserve(spec.leaves.size());

    for (std::size_t li = 0; li < spec.leaves.size(); ++li) {
        const LeafSpec& leaf = spec.leaves[li];
        const Surface surf(leaf);
        Rng rng = Rng::stream(spec.seed, li);
        // Thinning draws live on their own stream so adding a contact
        // strip never perturbs the sampled geometry.
        Rng thinRng = Rng::stream(spec.seed, li + 0x10000);

        std::vector<Vec3> local;
        double xMin, xMax, yMin, yMax;
        surf.boundingBox(xMin, xMax, yMin, yMax);
        const double s = leaf.spacingM;
        const int nx = static_cast<int>(std::floor((xMax - xMin) / s)) + 1;
        const int ny = static_cast<int>(std::floor((yMax - yMin) / s)) + 1;
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                const double jx = rng.uniform(-0.35, 0.35) * s;
                const double jy = rng.uniform(-0.35, 0.35) * s;
                const double x = xMin + ix * s + jx;
                const double y = yMin + iy * s + jy;
                if (!surf.inside(x, y)) continue;
                local.emplace_back(x, y, surf.height(x, y));
            }
        }
        for (const Vec3& p : surf.boundaryRing(s, rng)) local.push_back(p);

        for (Vec3 p : local) {
            if (leaf.noiseSigmaM > 0.0)
                p += surf.unitNormal(p.x(), p.y()) * rng.gaussian(0.0, leaf.noiseSigmaM);
            const Vec3 world = leaf.pose.rotation * p + leaf.pose.translation;

            bool inStrip = false;
            bool thinned = false;
            for (const ContactStrip& strip : spec.contactStrips) {
                inStrip = inStrip || strip.contains(world);
                thinned = thinned || strip.thins(world);
            }
            if (thinned && !thinRng.bernoulli(0.5)) continue;

            scene.cloud.append(world);
            scene.groundTruth.values.push_back(static_cast<std::int32_t>(li));
            scene.inContactStrip.push_back(inStrip ? 1 : 0);
        }
        scene.traits.push_back(analyticTraits(leaf));
    }
    return scene;
}

AnalyticTraits analyticTraits(const LeafSpec& leaf) {
    const Surface surf(leaf);
    const double R = surf.R, B = surf.B, c = surf.c;
    AnalyticTraits t;

    switch (leaf.shape) {
        case LeafShape::Disc:
            t.areaCm2 = M_PI * R * R * 1e4;
            t.lengthCm = 2.0 * R * 100.0;
            t.widthCm = 2.0 * R * 100.0;
            return t;
        case LeafShape::Ellipse:
            t.areaCm2 = M_PI * R * B * 1e4;
            t.lengthCm = 2.0 * R * 100.0;
            t.widthCm = 2.0 * B * 100.0;
            return t;
        case LeafShape::Strip: {
            const double area =
                c > 0.0 ? 2.0 * B * (R * std::sqrt(1.0 + 4.0 * c * c * R * R) +
                                     std::asinh(2.0 * c * R) / (2.0 * c))
                        : 4.0 * R * B;
            t.areaCm2 = area * 1e4;
            t.lengthCm = 2.0 * R * 100.0;
            t.widthCm = 2.0 * B * 100.0;
            if (t.widthCm > t.lengthCm) std::swap(t.lengthCm, t.widthCm);
            return t;
        }
        case LeafShape::Funnel: {
            const double phi = surf.sectorRad;
            const double ringIntegral =
                c > 0.0 ? (std::pow(1.0 + 4.0 * c * c * R * R, 1.5) - 1.0) / (12.0 * c * c)
                        : 0.5 * R * R;
            t.areaCm2 = phi * ringIntegral * 1e4;
            if (phi >= 2.0 * M_PI - 1e-12) {
                t.lengthCm = 2.0 * R * 100.0;
                t.widthCm = 2.0 * R * 100.0;
                return t;
            }
            // Sector: project the continuous surface on its mean-normal
            // plane and take the spread-ordered extents (fine quadrature).
            const Vec3 meanNormal =
                Vec3(-(2.0 * c * R * R * R / 3.0) * std::sin(phi),
                     -(2.0 * c * R * R * R / 3.0) * (1.0 - std::cos(phi)),
                     phi * R * R / 2.0)
                    .normalized();
            Vec3 axisSeed = std::abs(meanNormal.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
            const Vec3 u = axisSeed.cross(meanNormal).normalized();
            const Vec3 v = meanNormal.cross(u);

            const int nr = 400, na = 720;
            double m0 = 0.0, mu = 0.0, mv = 0.0;
            double cuu = 0.0, cuv = 0.0, cvv = 0.0;
            std::vector<Eigen::Vector2d> samples;
            samples.reserve(static_cast<std::size_t>(nr) * na);
            for (int ir = 1; ir <= nr; ++ir) {
                const double rho = R * (ir - 0.5) / nr;
                const double w = rho * std::sqrt(1.0 + 4.0 * c * c * rho * rho);
                for (int ia = 0; ia < na; ++ia) {
                    const double th = phi * (ia + 0.5) / na;
                    const Vec3 p(rho * std::cos(th), rho * std::sin(th),
                                 c * rho * rho);
                    const double pu = p.dot(u), pv = p.dot(v);
                    m0 += w;
                    mu += w * pu;
                    mv += w * pv;
                    cuu += w * pu * pu;
                    cuv += w * pu * pv;
                    cvv += w * pv * pv;
                    samples.emplace_back(pu, pv);
                }
            }
            mu /= m0;
            mv /= m0;
            cuu = cuu / m0 - mu * mu;
            cuv = cuv / m0 - mu * mv;
            cvv = cvv / m0 - mv * mv;
            // 2x2 eigenvector of the larger eigenvalue
            const double tr = cuu + cvv, det = cuu * cvv - cuv * cuv;
            const double l1 = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
            Eigen::Vector2d major(cuv, l1 - cuu);
            if (major.norm() < 1e-30) major = Eigen::Vector2d(1.0, 0.0);
            major.normalize();
            const Eigen::Vector2d minor(-major.y(), major.x());
            double loA = 1e300, hiA = -1e300, loB = 1e300, hiB = -1e300;
            for (const auto& q : samples) {
                const double a = q.dot(major), b = q.dot(minor);
                loA = std::min(loA, a);
                hiA = std::max(hiA, a);
                loB = std::min(loB, b);
                hiB = std::max(hiB, b);
            }
            t.lengthCm = (hiA - loA) * 100.0;
            t.widthCm = (hiB - loB) * 100.0;
            if (t.widthCm > t.lengthCm) std::swap(t.lengthCm, t.widthCm);
            return t;
        }
    }
    return t;
}

SceneSpec SceneSpec::fromJson(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("scene spec: expected an object");
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        if (k != "seed" && k != "layout" && k != "leaves" && k != "contact_strips")
            throw ConfigError("scene spec: unknown key '" + k + "'");
    }
    SceneSpec spec;
    spec.seed = j.value("seed", 0ULL);
    const std::string layout = j.value("layout", "none");
    if (layout == "none") spec.layout = OverlapLayout::None;
    else if (layout == "coplanar") spec.layout = OverlapLayout::CoplanarTouching;
    else if (layout == "cross") spec.layout = OverlapLayout::CrossOverlap;
    else if (layout == "mixed") spec.layout = OverlapLayout::Mixed;
    else throw ConfigError("scene spec: unknown layout '" + layout + "'");

    if (!j.contains("leaves") || !j.at("leaves").is_array())
        throw ConfigError("scene spec: 'leaves' array required");
    for (const auto& lj : j.at("leaves")) {
        for (const auto& item : lj.items()) {
            const std::string& k = item.key();
            if (k != "shape" && k != "size_a_cm" && k != "size_b_cm" && k != "curvature" &&
                k != "sector_deg" && k != "spacing_m" && k != "noise_sigma_m" &&
                k != "rotation_deg" && k != "translation_m")
                throw ConfigError("leaf spec: unknown key '" + k + "'");
        }
        LeafSpec leaf;
        const std::string shape = lj.value("shape", "disc");
        if (shape == "disc") leaf.shape = LeafShape::Disc;
        else if (shape == "ellipse") leaf.shape = LeafShape::Ellipse;
        else if (shape == "funnel") leaf.shape = LeafShape::Funnel;
        else if (shape == "strip") leaf.shape = LeafShape::Strip;
        else throw ConfigError("leaf spec: unknown shape '" + shape + "'");
        leaf.sizeACm = lj.value("size_a_cm", 5.0);
        leaf.sizeBCm = lj.value("size_b_cm", 0.0);
        leaf.curvature = lj.value("curvature", 0.0);
        leaf.sectorDeg = lj.value("sector_deg", 360.0);
        leaf.spacingM = lj.value("spacing_m", 0.001);
        leaf.noiseSigmaM = lj.value("noise_sigma_m", 0.0);
        if (lj.contains("rotation_deg")) {
            const auto& r = lj.at("rotation_deg");
            leaf.pose.rotation = rotationXyzDeg(r.at(0).get<double>(), r.at(1).get<double>(),
                                                r.at(2).get<double>());
        }
        if (lj.contains("translation_m")) {
            const auto& tr = lj.at("translation_m");
            leaf.pose.translation =
                Vec3(tr.at(0).get<double>(), tr.at(1).get<double>(), tr.at(2).get<double>());
        }
        spec.leaves.push_back(leaf);
    }
    if (j.contains("contact_strips")) {
        for (const auto& sj : j.at("contact_strips")) {
            ContactStrip strip;
            const auto& o = sj.at("origin");
            strip.origin = Vec3(o.at(0).get<double>(), o.at(1).get<double>(), o.at(2).get<double>());
            const auto& n = sj.at("normal");
            strip.normal =
                Vec3(n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>())
                    .normalized();
            strip.halfThickness = sj.at("half_thickness_m").get<double>();
            strip.radius = sj.at("radius_m").get<double>();
            strip.feather = sj.value("feather_m", 0.0);
            spec.contactStrips.push_back(strip);
        }
    }
    return spec;
}

namespace {

LeafSpec makeLeaf(LeafShape shape, double aCm, double bCm, double curvature, double spacing,
                  const Eigen::Matrix3d& rot, const Vec3& trans, double noise = 0.0) {
    LeafSpec leaf;
    leaf.shape = shape;
    leaf.sizeACm = aCm;
    leaf.sizeBCm = bCm;
    leaf.curvature = curvature;
    leaf.spacingM = spacing;
    leaf.noiseSigmaM = noise;
    leaf.pose.rotation = rot;
    leaf.pose.translation = trans;
    return leaf;
}

const Eigen::Matrix3d kIdent = Eigen::Matrix3d::Identity();

// Half-density strip over the contact band of two leaves, placed from a
// strip-free dry run of the spec.
ContactStrip stripBetween(const SceneSpec& spec, int leafA, int leafB, double reach,
                          const Vec3& slabNormal) {
    SceneSpec dry = spec;
    dry.contactStrips.clear();
    const Scene scene = generateScene(dry);
    PointCloud cloudB;
    for (int i = 0; i < scene.cloud.size(); ++i)
        if (scene.groundTruth.values[i] == leafB) cloudB.append(scene.cloud.positions[i]);

    ContactStrip strip;
    strip.normal = slabNormal;
    strip.feather = 0.004;
    if (cloudB.empty()) {
        strip.halfThickness = 0.006;
        strip.radius = 0.02;
        return strip;
    }
    SpatialIndex indexB(cloudB);
    Vec3 lo = Vec3::Constant(1e300), hi = Vec3::Constant(-1e300);
    int contacts = 0;
    for (int i = 0; i < scene.cloud.size(); ++i) {
        if (scene.groundTruth.values[i] != leafA) continue;
        const Vec3& p = scene.cloud.positions[i];
        const std::vector<int> near = indexB.radiusSearch(p, reach);
        if (near.empty()) continue;
        const Vec3 mid = 0.5 * (p + cloudB.positions[near.front()]);
        lo = lo.cwiseMin(mid);
        hi = hi.cwiseMax(mid);
        ++contacts;
    }
    if (contacts == 0) {
        strip.halfThickness = 0.006;
        strip.radius = 0.02;
        return strip;
    }
    strip.origin = 0.5 * (lo + hi);
    const Vec3 extent = hi - lo;
    strip.halfThickness = 0.5 * std::abs(extent.dot(slabNormal)) + 0.0035;
    const Vec3 inPlane = extent - extent.dot(slabNormal) * slabNormal;
    strip.radius = 0.5 * inPlane.norm() + 0.004;
    return strip;
}

}  // namespace

SceneSpec namedScene(const std::string& name, std::uint64_t seed) {
    SceneSpec spec;
    spec.seed = seed;

    if (name == "single_disc") {
        spec.layout = OverlapLayout::None;
        spec.leaves.push_back(makeLeaf(LeafShape::Disc, 5.0, 0.0, 0.0, 0.001, kIdent,
                                       Vec3::Zero()));
        return spec;
    }
    if (name == "coplanar_pair") {
        spec.layout = OverlapLayout::CoplanarTouching;
        // Two ellipses joined by a thin tangent neck. The neck is sampled
        // at half density: scanners shadow contact zones, and that sparsity
        // is what the joint filter exploits to cut the seam.
        spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 3.0, 2.0, 0.0, 0.001, kIdent,
                                       Vec3(-0.0298, 0.0, 0.0), 0.00015));
        spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 3.0, 2.0, 0.0, 0.001, kIdent,
                                       Vec3(0.0298, 0.0, 0.0), 0.00015));
        ContactStrip neck;
        neck.origin = Vec3::Zero();
        neck.normal = Vec3::UnitZ();
        neck.halfThickness = 0.002;
        neck.radius = 0.009;
        neck.feather = 0.003;
        spec.contactStrips.push_back(neck);
        return spec;
    }
    if (name == "crossed_funnels") {
        spec.layout = OverlapLayout::CrossOverlap;
        // Two funnel caps from different canopy layers leaning toward each
        // other; their facing rim bands pass within ~2 mm. The contact
        // curtain is sampled at half density.
        spec.leaves.push_back(makeLeaf(LeafShape::Funnel, 3.0, 0.0, 6.0, 0.001,
                                       rotationXyzDeg(0.0, 25.0, 0.0),
                                       Vec3(-0.0235, 0.0, 0.0)));
        spec.leaves.push_back(makeLeaf(LeafShape::Funnel, 3.0, 0.0, 6.0, 0.001,
                                       rotationXyzDeg(0.0, -25.0, 0.0),
                                       Vec3(0.0235, 0.0, 0.0045)));
        spec.contactStrips.push_back(stripBetween(spec, 0, 1, 0.0035, Vec3::UnitX()));
        return spec;
    }
    if (name == "cross_4") {
        spec.layout = OverlapLayout::CrossOverlap;
        // Four funnels in a row, alternating lean, each consecutive pair
        // crossing through a half-density contact curtain.
        for (int i = 0; i < 4; ++i) {
            const double tilt = (i % 2 == 0) ? 25.0 : -25.0;
            const double z = (i % 2 == 0) ? 0.0 : 0.0045;
            spec.leaves.push_back(makeLeaf(LeafShape::Funnel, 3.0, 0.0, 6.0, 0.001,
                                           rotationXyzDeg(0.0, tilt, 0.0),
                                           Vec3(-0.0705 + 0.047 * i, 0.0, z)));
        }
        for (int i = 0; i < 3; ++i)
            spec.contactStrips.push_back(stripBetween(spec, i, i + 1, 0.0035, Vec3::UnitX()));
        return spec;
    }
    if (name == "mixed_9") {
        spec.layout = OverlapLayout::Mixed;
        const double s = 0.001;
        const double gap = 0.052;
        const double noise = 0.0001;
        // Row 0: a coplanar-touching ellipse pair joined by a shadowed
        // tangent neck, plus a free disc.
        spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 3.0, 2.0, 0, s, kIdent,
                                       Vec3(-gap - 0.0098, gap, 0.0), noise));
        spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 3.0, 2.0, 0, s, kIdent,
                                       Vec3(-gap + 0.0498, gap, 0.0), noise));
        ContactStrip neck;
        neck.origin = Vec3(-gap + 0.02, gap, 0.0);
        neck.normal = Vec3::UnitZ();
        neck.halfThickness = 0.002;
        neck.radius = 0.009;
        neck.feather = 0.003;
        spec.contactStrips.push_back(neck);
        spec.leaves.push_back(makeLeaf(LeafShape::Disc, 2.5, 0, 0, s, kIdent,
                                       Vec3(gap + 0.01, gap, 0.0), noise));
        // Row 1: two upright funnels crossed from above by a flat disc of
        // a higher canopy layer.
        spec.leaves.push_back(makeLeaf(LeafShape::Funnel, 2.5, 0, 6.0, s, kIdent,
                                       Vec3(-gap, 0.0, 0.0), noise));
        spec.leaves.push_back(makeLeaf(LeafShape::Funnel, 2.5, 0, 6.0, s, kIdent,
                                       Vec3(gap, 0.0, 0.0), noise));
        spec.leaves.push_back(makeLeaf(LeafShape::Disc, 3.0, 0, 0, s, kIdent,
                                       Vec3(0.0, 0.0, 0.0075), noise));
        // Row 2: strip-ellipse-strip adjacency with 2.5 mm rim clearances.
        spec.leaves.push_back(makeLeaf(LeafShape::Strip, 5.0, 3.0, 2.0, s, kIdent,
                                       Vec3(-gap - 0.0015, -gap, 0.0), noise));
        spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 2.7, 2.1, 0, s, kIdent,
                                       Vec3(0.0, -gap, 0.0), noise));
        spec.leaves.push_back(makeLeaf(LeafShape::Strip, 5.0, 3.0, 2.0, s, kIdent,
                                       Vec3(gap + 0.0015, -gap, 0.0), noise));
        return spec;
    }
    if (name == "eroded_disc") {
        spec.layout = OverlapLayout::None;
        spec.leaves.push_back(makeLeaf(LeafShape::Disc, 4.0, 0, 0, 0.001, kIdent,
                                       Vec3::Zero()));
        spec.leaves.push_back(makeLeaf(LeafShape::Disc, 0.45, 0, 0, 0.001, kIdent,
                                       Vec3(0.10, 0.0, 0.0)));
        return spec;
    }
    if (name == "perf_50k") {
        spec.layout = OverlapLayout::None;
        for (int i = 0; i < 10; ++i) {
            const double x = (i % 5) * 0.095 - 0.19;
            const double y = (i / 5) * 0.075 - 0.0375;
            spec.leaves.push_back(makeLeaf(LeafShape::Ellipse, 4.5, 3.5, 0.0, 0.001,
                                           rotationXyzDeg(0, 0, 36.0 * i), Vec3(x, y, 0.0)));
        }
        return spec;
    }
    throw ConfigError("unknown scene '" + name + "'");
}

std::vector<std::string> namedSceneList() {
    return {"single_disc", "coplanar_pair", "crossed_funnels", "cross_4",
            "mixed_9",     "eroded_disc",   "perf_50k"};
}

}  // namespace leafsep
