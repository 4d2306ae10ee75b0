#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "leafsep/geometry.hpp"
#include "leafsep/spatial_index.hpp"
#include "oracles.hpp"

using namespace leafsep;

TEST_CASE("buildIndex rejects empty clouds") {
    PointCloud empty;
    CHECK_THROWS_AS(SpatialIndex{empty}, EmptyCloud);
}

TEST_CASE("radius query on a single point returns the point itself") {
    PointCloud cloud;
    cloud.append(Vec3(0.3, -0.2, 1.0));
    SpatialIndex index(cloud);
    CHECK(index.radiusSearch(cloud.positions[0], 1.0) == std::vector<int>{0});
}

TEST_CASE("grid radius and knn queries match the distance-scan oracle") {
    const PointCloud grid = oracle::grid2d(10, 10, 1.0);
    SpatialIndex index(grid);

    // corner point, r = 1: itself plus the two axis neighbors
    const auto corner = index.radiusSearch(grid.positions[0], 1.0);
    CHECK(corner == oracle::radiusScan(grid, grid.positions[0], 1.0));
    CHECK(corner.size() == 3);

    // interior point, k = 4 nearest neighbors: the axis-adjacent points
    const int interior = 5 * 10 + 5;
    const auto knn = index.neighborsOf(interior, 4);
    CHECK(knn.size() == 4);
    for (int idx : knn)
        CHECK((grid.positions[idx] - grid.positions[interior]).norm() == doctest::Approx(1.0));
    // and the oracle agrees once the query point itself is stripped
    auto expected = oracle::knnScan(grid, grid.positions[interior], 5);
    expected.erase(std::find(expected.begin(), expected.end(), interior));
    std::sort(expected.begin(), expected.end());
    auto got = knn;
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
}

TEST_CASE("randomized clouds: exact agreement with brute-force scans") {
    Rng rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 20 + static_cast<int>(rng.below(600));
        const PointCloud cloud = oracle::randomCloud(rng, n, 1.0);
        SpatialIndex index(cloud);
        for (int q = 0; q < 12; ++q) {
            const Vec3 pos(rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0));
            const double r = rng.uniform(0.02, 0.4);
            CHECK(index.radiusSearch(pos, r) == oracle::radiusScan(cloud, pos, r));
            const int k = 1 + static_cast<int>(rng.below(12));
            CHECK(index.knnSearch(pos, k) == oracle::knnScan(cloud, pos, k));
            const int qi = static_cast<int>(rng.below(n));
            CHECK(index.radiusCount(qi, r) == oracle::radiusCountScan(cloud, qi, r));
        }
    }
}

TEST_CASE("knn ties break toward the lower index") {
    PointCloud cloud;
    cloud.append(Vec3(0, 0, 0));
    cloud.append(Vec3(1, 0, 0));
    cloud.append(Vec3(-1, 0, 0));
    cloud.append(Vec3(0, 1, 0));
    SpatialIndex index(cloud);
    CHECK(index.knnSearch(Vec3(0, 0, 0), 2) == std::vector<int>{0, 1});
}

TEST_CASE("radiusCount excludes the query point") {
    PointCloud lonely;
    lonely.append(Vec3(0, 0, 0));
    lonely.append(Vec3(10, 0, 0));
    SpatialIndex lonelyIndex(lonely);
    CHECK(lonelyIndex.radiusCount(0, 1.0) == 0);

    const PointCloud grid = oracle::grid2d(10, 10, 1.0);
    SpatialIndex gridIndex(grid);
    const int interior = 4 * 10 + 4;
    CHECK(gridIndex.radiusCount(interior, 1.5) == 8);
    CHECK(gridIndex.radiusCount(interior, 1.5) == oracle::radiusCountScan(grid, interior, 1.5));

    PointCloud dup;
    dup.append(Vec3(0.5, 0.5, 0.5));
    dup.append(Vec3(0.5, 0.5, 0.5));
    SpatialIndex dupIndex(dup);
    CHECK(dupIndex.radiusCount(0, 1e-9) == 1);
    CHECK(dupIndex.radiusCount(1, 1e-9) == 1);
}

TEST_CASE("localPCA on a plane returns the +Z normal with zero residual") {
    const PointCloud grid = oracle::grid2d(8, 8, 0.01);
    SpatialIndex index(grid);
    const LocalFrame frame = localPCA(index, 3 * 8 + 3, 8);
    CHECK(frame.n.z() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frame.lambdaN == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("localPCA on a line has rank one") {
    PointCloud line;
    for (int i = 0; i < 30; ++i) line.append(Vec3(0.002 * i, 0, 0));
    SpatialIndex index(line);
    const LocalFrame frame = localPCA(index, 15, 6);
    CHECK(std::abs(frame.u.x()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frame.lambdaV == doctest::Approx(0.0).epsilon(1e-18));
    CHECK(frame.lambdaN == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("localPCA at a hemisphere pole recovers the surface normal") {
    // spherical cap of radius 1 around the +Z pole, ~15 degrees wide
    PointCloud cap;
    cap.append(Vec3(0, 0, 1));
    for (int ring = 1; ring <= 5; ++ring) {
        const double polar = ring * 0.05;
        const int m = 6 * ring;
        for (int i = 0; i < m; ++i) {
            const double az = 2.0 * M_PI * i / m;
            cap.append(Vec3(std::sin(polar) * std::cos(az), std::sin(polar) * std::sin(az),
                            std::cos(polar)));
        }
    }
    SpatialIndex index(cap);
    const LocalFrame frame = localPCA(index, 0, 20);
    const double angle = std::acos(std::min(1.0, std::abs(frame.n.z())));
    CHECK(angle < 5.0 * M_PI / 180.0);
}

TEST_CASE("localPCA frames are orthonormal and reconstruct the covariance") {
    Rng rng(77);
    const PointCloud cloud = oracle::randomCloud(rng, 200, 0.05);
    SpatialIndex index(cloud);
    for (int q = 0; q < 30; ++q) {
        const int k = 10;
        const LocalFrame f = localPCA(index, q, k);
        CHECK(std::abs(f.u.dot(f.v)) < 1e-9);
        CHECK(std::abs(f.u.dot(f.n)) < 1e-9);
        CHECK(std::abs(f.v.dot(f.n)) < 1e-9);
        CHECK(std::abs(f.u.norm() - 1.0) < 1e-9);
        CHECK(std::abs(f.v.norm() - 1.0) < 1e-9);
        CHECK(std::abs(f.n.norm() - 1.0) < 1e-9);
        CHECK(f.lambdaU >= f.lambdaV);
        CHECK(f.lambdaV >= f.lambdaN);
        CHECK(f.lambdaN >= 0.0);

        // covariance of the same neighborhood, computed directly
        std::vector<int> nbrs = index.neighborsOf(q, k);
        nbrs.push_back(q);
        Vec3 mean = Vec3::Zero();
        for (int idx : nbrs) mean += cloud.positions[idx];
        mean /= static_cast<double>(nbrs.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (int idx : nbrs) {
            const Vec3 d = cloud.positions[idx] - mean;
            cov += d * d.transpose();
        }
        cov /= static_cast<double>(nbrs.size());
        const Eigen::Matrix3d rebuilt = f.lambdaU * f.u * f.u.transpose() +
                                        f.lambdaV * f.v * f.v.transpose() +
                                        f.lambdaN * f.n * f.n.transpose();
        CHECK((rebuilt - cov).norm() <= 1e-6 * cov.norm());
    }
}

TEST_CASE("localPCA rejects coincident neighborhoods") {
    PointCloud dup;
    for (int i = 0; i < 8; ++i) dup.append(Vec3(1, 2, 3));
    SpatialIndex index(dup);
    CHECK_THROWS_AS(localPCA(index, 0, 4), DegenerateNeighborhood);
}

TEST_CASE("averageSpacing of regular grids equals the spacing") {
    CHECK(averageSpacing(oracle::grid2d(12, 12, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(averageSpacing(oracle::grid2d(14, 14, 0.002)) ==
          doctest::Approx(0.002).epsilon(1e-9));

    PointCloud tiny;
    tiny.append(Vec3(0, 0, 0));
    CHECK_THROWS_AS(averageSpacing(tiny), EmptyCloud);
}

TEST_CASE("averageSpacing respects a Poisson-disc lower bound and the seed") {
    // rejection-sample a min-distance-d point set
    Rng rng(5);
    const double d = 0.01;
    PointCloud cloud;
    while (cloud.size() < 300) {
        const Vec3 p(rng.uniform(0.0, 0.2), rng.uniform(0.0, 0.2), 0.0);
        bool ok = true;
        for (const Vec3& q : cloud.positions)
            if ((p - q).squaredNorm() < d * d) {
                ok = false;
                break;
            }
        if (ok) cloud.append(p);
    }
    const double spacing = averageSpacing(cloud, 128, 42);
    CHECK(spacing >= d);
    // exhaustive oracle over the same sample is bounded the same way
    for (int i = 0; i < cloud.size(); ++i) CHECK(oracle::nearestScan(cloud, i) >= d);
    CHECK(averageSpacing(cloud, 128, 42) == spacing);  // deterministic
}

TEST_CASE("connectedComponents matches the union-find oracle") {
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const PointCloud cloud = oracle::randomCloud(rng, 150, 1.0);
        const double link = rng.uniform(0.05, 0.25);
        const LabelMap got = connectedComponents(cloud, link);
        const std::vector<int> expected = oracle::unionFindComponents(cloud, link);
        CHECK(oracle::canonical(got.values) == expected);
        std::int32_t maxLabel = -1;
        for (std::int32_t v : got.values) maxLabel = std::max(maxLabel, v);
        CHECK(maxLabel + 1 == got.labelCount);
    }
}
