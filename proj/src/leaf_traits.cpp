#include "leafsep/leaf_traits.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "leafsep/filters.hpp"
#include "leafsep/geometry.hpp"
#include "leafsep/parallel.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

namespace {

// ---------------------------------------------------------------------
// 2D Delaunay (Bowyer-Watson) for the small per-point patches.

struct Tri2 {
    int a, b, c;
};

bool inCircumcircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c, const Eigen::Vector2d& p) {
    const double ax = a.x() - p.x(), ay = a.y() - p.y();
    const double bx = b.x() - p.x(), by = b.y() - p.y();
    const double cx = c.x() - p.x(), cy = c.y() - p.y();
    const double det = (ax * ax + ay * ay) * (bx * cy - cx * by) -
                       (bx * bx + by * by) * (ax * cy - cx * ay) +
                       (cx * cx + cy * cy) * (ax * by - bx * ay);
    const double orient =
        (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    return orient > 0.0 ? det > 0.0 : det < 0.0;
}

std::vector<Tri2> delaunay2d(const std::vector<Eigen::Vector2d>& pts) {
    const int m = static_cast<int>(pts.size());
    if (m < 3) return {};

    Eigen::Vector2d lo = pts[0], hi = pts[0];
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Eigen::Vector2d center = 0.5 * (lo + hi);
    const double span = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-12});

    std::vector<Eigen::Vector2d> verts = pts;
    verts.push_back(center + Eigen::Vector2d(0.0, 64.0 * span));
    verts.push_back(center + Eigen::Vector2d(-64.0 * span, -48.0 * span));
    verts.push_back(center + Eigen::Vector2d(64.0 * span, -48.0 * span));

    std::vector<Tri2> tris{{m, m + 1, m + 2}};
    std::vector<char> bad;
    for (int i = 0; i < m; ++i) {
        bad.assign(tris.size(), 0);
        // boundary edges of the bad region, with multiplicity
        std::map<std::pair<int, int>, int> edgeUse;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const Tri2& tri = tris[t];
            if (!inCircumcircle(verts[tri.a], verts[tri.b], verts[tri.c], verts[i]))
                continue;
            bad[t] = 1;
            const int e[3][2] = {{tri.a, tri.b}, {tri.b, tri.c}, {tri.c, tri.a}};
            for (const auto& edge : e) {
                const auto key = std::minmax(edge[0], edge[1]);
                edgeUse[{key.first, key.second}] += 1;
            }
        }
        std::vector<Tri2> next;
        next.reserve(tris.size() + 2);
        for (std::size_t t = 0; t < tris.size(); ++t)
            if (!bad[t]) next.push_back(tris[t]);
        for (const auto& [edge, uses] : edgeUse)
            if (uses == 1) next.push_back({edge.first, edge.second, i});
        tris.swap(next);
    }

    std::vector<Tri2> out;
    for (const Tri2& tri : tris)
        if (tri.a < m && tri.b < m && tri.c < m) out.push_back(tri);
    return out;
}

// Deterministic jitter per global point index, applied only to the
// projected coordinates that drive the Delaunay decisions (vertices keep
// their true positions). Keyed on the global index so every vertex's
// patch resolves cocircular ties the same way, and sized to dominate the
// per-patch projection distortion of curved surfaces, which would
// otherwise flip near-tie diagonals differently in neighboring stars.
Eigen::Vector2d tieJitter(int globalIndex, double scale) {
    std::uint64_t z = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(globalIndex) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    const double jx = static_cast<double>((z >> 11) & 0x3ffffff) / double(1 << 26) - 0.5;
    const double jy = static_cast<double>((z >> 37) & 0x3ffffff) / double(1 << 26) - 0.5;
    return Eigen::Vector2d(jx, jy) * (0.03 * scale);
}

std::uint64_t tripleKey(int a, int b, int c, int n) {
    int v[3] = {a, b, c};
    std::sort(v, v + 3);
    return (static_cast<std::uint64_t>(v[0]) * n + v[1]) * n + v[2];
}

std::vector<Vec3> pointNormals(const PointCloud& cloud, const SpatialIndex& index, int k) {
    std::vector<Vec3> normals(cloud.size(), Vec3::UnitZ());
    const int kEff = std::min(k, cloud.size() - 1);
    if (kEff < 2) return normals;
    parallelFor(cloud.size(), [&](int i) {
        std::vector<int> nbrs = index.neighborsOf(i, kEff);
        std::vector<Vec3> pts;
        pts.reserve(nbrs.size() + 1);
        pts.push_back(cloud.positions[i]);
        for (int idx : nbrs) pts.push_back(cloud.positions[idx]);
        try {
            normals[i] = pcaFrame(pts).n;
        } catch (const DegenerateNeighborhood&) {
        }
    });
    return normals;
}

}  // namespace

PointCloud smoothAndDownsample(const PointCloud& leaf, const SmoothParams& params) {
    if (leaf.size() < 10) throw TooSparse("smoothAndDownsample: need at least 10 points");
    if (params.voxelSize <= 0.0) throw ConfigError("smoothAndDownsample: voxel size must be > 0");
    if (params.smoothIters < 0 || params.k < 1)
        throw ConfigError("smoothAndDownsample: bad smoothing parameters");

    PointCloud cloud = voxelDownsample(leaf, params.voxelSize);
    for (int iter = 0; iter < params.smoothIters; ++iter) {
        if (cloud.size() < 2) break;
        const SpatialIndex index(cloud);
        const int k = std::min(params.k, cloud.size() - 1);
        std::vector<Vec3> next(cloud.size());
        parallelFor(cloud.size(), [&](int i) {
            Vec3 centroid = Vec3::Zero();
            const std::vector<int> nbrs = index.neighborsOf(i, k);
            for (int idx : nbrs) centroid += cloud.positions[idx];
            centroid /= static_cast<double>(nbrs.size());
            next[i] = cloud.positions[i] + params.lambda * (centroid - cloud.positions[i]);
        });
        cloud.positions.swap(next);
    }
    return cloud;
}

TriangleMesh triangulate(const PointCloud& leaf, const TriangulateParams& params) {
    const int n = leaf.size();
    if (n < 3) throw DegenerateSurface("triangulate: need at least 3 points");
    if (params.searchRadius <= 0.0)
        throw ConfigError("triangulate: search radius must be > 0");

    {
        const LocalFrame global = pcaFrame(leaf.positions);
        if (std::sqrt(global.lambdaV) < 1e-9 * std::sqrt(global.lambdaU))
            throw DegenerateSurface("triangulate: points are collinear");
    }

    TriangleMesh mesh;
    mesh.vertices = leaf.positions;
    if (n == 3) {
        mesh.triangles.push_back({0, 1, 2});
        return mesh;
    }

    const SpatialIndex index(leaf);
    const std::vector<Vec3> normals = pointNormals(leaf, index, 12);
    const double cosSurfaceMax = std::cos(params.maxSurfaceAngleDeg * M_PI / 180.0);
    const double r = params.searchRadius;

    // Per-point star: Delaunay of the neighborhood projected on the local
    // tangent plane. A triangle survives only when the stars of all three
    // of its vertices propose it, which keeps stars overlap-free and
    // consistent across the surface.
    std::vector<std::vector<std::uint64_t>> proposals(n);
    parallelFor(n, [&](int p) {
        std::vector<int> nbrs = index.radiusSearch(leaf.positions[p], r);
        std::vector<std::pair<double, int>> byDist;
        byDist.reserve(nbrs.size());
        for (int idx : nbrs) {
            if (idx == p) continue;
            if (std::abs(normals[idx].dot(normals[p])) < cosSurfaceMax) continue;
            byDist.emplace_back((leaf.positions[idx] - leaf.positions[p]).squaredNorm(), idx);
        }
        std::sort(byDist.begin(), byDist.end());
        if (static_cast<int>(byDist.size()) > params.maxNeighbors)
            byDist.resize(params.maxNeighbors);
        if (byDist.size() < 2) return;

        const Vec3& nrm = normals[p];
        const Vec3 seed = std::abs(nrm.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
        const Vec3 u = seed.cross(nrm).normalized();
        const Vec3 v = nrm.cross(u);

        std::vector<int> local{p};
        for (const auto& [d2, idx] : byDist) local.push_back(idx);
        std::sort(local.begin() + 1, local.end());  // deterministic insertion order

        std::vector<Eigen::Vector2d> proj;
        proj.reserve(local.size());
        for (int idx : local) {
            const Vec3 d = leaf.positions[idx] - leaf.positions[p];
            proj.push_back(Eigen::Vector2d(d.dot(u), d.dot(v)) + tieJitter(idx, r));
        }

        for (const Tri2& tri : delaunay2d(proj)) {
            const int ga = local[tri.a], gb = local[tri.b], gc = local[tri.c];
            if (ga != p && gb != p && gc != p) continue;  // keep the star only
            // enforce the global edge cap (patch-internal edges can reach 2r)
            const double ab = (leaf.positions[ga] - leaf.positions[gb]).squaredNorm();
            const double bc = (leaf.positions[gb] - leaf.positions[gc]).squaredNorm();
            const double ca = (leaf.positions[gc] - leaf.positions[ga]).squaredNorm();
            if (ab > r * r || bc > r * r || ca > r * r) continue;
            proposals[p].push_back(tripleKey(ga, gb, gc, n));
        }
        std::sort(proposals[p].begin(), proposals[p].end());
    });

    std::unordered_map<std::uint64_t, int> votes;
    for (int p = 0; p < n; ++p)
        for (std::uint64_t key : proposals[p]) votes[key] += 1;

    std::vector<std::uint64_t> accepted;
    for (const auto& [key, count] : votes)
        if (count == 3) accepted.push_back(key);
    std::sort(accepted.begin(), accepted.end());

    for (std::uint64_t key : accepted) {
        const int c = static_cast<int>(key % n);
        const int b = static_cast<int>((key / n) % n);
        const int a = static_cast<int>(key / n / n);
        const Vec3 cross =
            (leaf.positions[b] - leaf.positions[a]).cross(leaf.positions[c] - leaf.positions[a]);
        if (cross.norm() <= 1e-14 * r * r) continue;  // degenerate sliver
        mesh.triangles.push_back({a, b, c});
    }
    return mesh;
}

double meshArea(const TriangleMesh& mesh) {
    double area = 0.0;
    for (const auto& tri : mesh.triangles) {
        const Vec3& a = mesh.vertices[tri[0]];
        area += 0.5 * (mesh.vertices[tri[1]] - a).cross(mesh.vertices[tri[2]] - a).norm();
    }
    return area * 1e4;  // m^2 -> cm^2
}

std::pair<double, double> leafLengthWidth(const PointCloud& leaf) {
    const int n = leaf.size();
    if (n < 3) throw DegenerateSurface("leafLengthWidth: need at least 3 points");

    const SpatialIndex index(leaf);
    const std::vector<Vec3> normals = pointNormals(leaf, index, 20);
    Vec3 meanNormal = Vec3::Zero();
    for (const Vec3& nrm : normals) meanNormal += nrm;
    if (meanNormal.norm() < 0.5 * n) {
        // mixed orientations: fall back to the global PCA normal
        meanNormal = pcaFrame(leaf.positions).n;
    }
    meanNormal.normalize();

    const Vec3 seed = std::abs(meanNormal.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    const Vec3 u = seed.cross(meanNormal).normalized();
    const Vec3 v = meanNormal.cross(u);

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : leaf.positions) centroid += p;
    centroid /= n;

    double cuu = 0.0, cuv = 0.0, cvv = 0.0;
    std::vector<Eigen::Vector2d> proj(n);
    for (int i = 0; i < n; ++i) {
        const Vec3 d = leaf.positions[i] - centroid;
        proj[i] = Eigen::Vector2d(d.dot(u), d.dot(v));
        cuu += proj[i].x() * proj[i].x();
        cuv += proj[i].x() * proj[i].y();
        cvv += proj[i].y() * proj[i].y();
    }
    if (cuu + cvv <= 0.0) throw DegenerateSurface("leafLengthWidth: degenerate projection");

    const double tr = cuu + cvv, det = cuu * cvv - cuv * cuv;
    const double l1 = 0.5 * tr + std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    Eigen::Vector2d major(cuv, l1 - cuu);
    if (major.norm() < 1e-12 * tr) major = Eigen::Vector2d(1.0, 0.0);
    major.normalize();
    const Eigen::Vector2d minor(-major.y(), major.x());

    double loA = 1e300, hiA = -1e300, loB = 1e300, hiB = -1e300;
    for (const auto& q : proj) {
        const double a = q.dot(major), b = q.dot(minor);
        loA = std::min(loA, a);
        hiA = std::max(hiA, a);
        loB = std::min(loB, b);
        hiB = std::max(hiB, b);
    }
    double length = (hiA - loA) * 100.0;
    double width = (hiB - loB) * 100.0;
    if (width > length) std::swap(length, width);  // axis ordering by extent
    return {length, width};
}

LeafTraits estimateTraits(const PointCloud& leaf, const SmoothParams& smoothParams,
                          const TriangulateParams& triParams) {
    const PointCloud smooth = smoothAndDownsample(leaf, smoothParams);

    TriangulateParams tri = triParams;
    if (tri.searchRadius <= 0.0) tri.searchRadius = 3.0 * averageSpacing(smooth);

    LeafTraits traits;
    traits.areaCm2 = meshArea(triangulate(smooth, tri));
    const auto [length, width] = leafLengthWidth(smooth);
    traits.lengthCm = length;
    traits.widthCm = width;
    return traits;
}

}  // namespace leafsep
