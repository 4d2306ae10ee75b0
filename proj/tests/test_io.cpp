#include <cstdio>
#include <filesystem>
#include <set>
#include <fstream>
#include <unistd.h>

#include "doctest.h"
#include "leafsep/cloud_io.hpp"
#include "leafsep/segmentation.hpp"
#include "leafsep/synth.hpp"
#include "oracles.hpp"

using namespace leafsep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("leafsep_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

PointCloud threePoints() {
    PointCloud cloud;
    cloud.append(Vec3(0.001, 0.002, 0.003), Rgb{10, 200, 30});
    cloud.append(Vec3(-0.5, 0.25, 0.125), Rgb{0, 255, 0});
    cloud.append(Vec3(1.0, -2.0, 3.5), Rgb{128, 128, 128});
    return cloud;
}

}  // namespace

TEST_CASE("ascii PLY round-trips bit-exact through writeCloud") {
    TempDir dir;
    const std::string a = dir.file("a.ply"), b = dir.file("b.ply");
    writeCloud(a, CloudFormat::PlyAscii, threePoints());
    const CloudFile loaded = readCloud(a, CloudFormat::PlyAscii);
    REQUIRE(loaded.cloud.size() == 3);
    CHECK(loaded.cloud.hasColors());
    writeCloud(b, CloudFormat::PlyAscii, loaded.cloud);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("binary little-endian PLY round-trips") {
    TempDir dir;
    const std::string a = dir.file("a.ply"), b = dir.file("b.ply");
    writeCloud(a, CloudFormat::PlyBinaryLE, threePoints());
    const CloudFile loaded = readCloud(a, CloudFormat::PlyBinaryLE);
    REQUIRE(loaded.cloud.size() == 3);
    writeCloud(b, CloudFormat::PlyBinaryLE, loaded.cloud);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("xyz files load as colorless points") {
    TempDir dir;
    const std::string path = dir.file("five.xyz");
    {
        std::ofstream out(path);
        out << "0 0 0\n1 0 0\n# comment row\n2 0 0\n3 1 2\n4 -1 0.5\n";
    }
    const CloudFile loaded = readCloud(path, CloudFormat::Xyz);
    CHECK(loaded.cloud.size() == 5);
    CHECK(!loaded.cloud.hasColors());
    CHECK(loaded.labels.empty());

    // xyzrgb round-trip
    const std::string rgb = dir.file("c.xyzrgb");
    writeCloud(rgb, CloudFormat::XyzRgb, threePoints());
    const CloudFile colored = readCloud(rgb, CloudFormat::XyzRgb);
    CHECK(colored.cloud.hasColors());
    CHECK(colored.cloud.colors[0] == Rgb{10, 200, 30});
}

TEST_CASE("labeled PLY keeps the label multiset and palette colors") {
    TempDir dir;
    const std::string path = dir.file("seg.ply");
    const PointCloud cloud = threePoints();
    const std::vector<std::int32_t> labels{2, 0, 2};
    writeCloud(path, CloudFormat::LabeledPly, cloud, labels);

    const CloudFile loaded = readCloud(path, CloudFormat::LabeledPly);
    REQUIRE(loaded.labels.size() == 3);
    std::multiset<std::int32_t> got(loaded.labels.begin(), loaded.labels.end());
    CHECK(got == std::multiset<std::int32_t>{0, 2, 2});
    // palette colors round-trip too
    CHECK(loaded.cloud.colors[1] == labelColor(0));

    // a plain PLY is not a valid labeled cloud
    const std::string plain = dir.file("plain.ply");
    writeCloud(plain, CloudFormat::PlyAscii, cloud);
    CHECK_THROWS_AS(readCloud(plain, CloudFormat::LabeledPly), UnsupportedFormat);
}

TEST_CASE("labeled PLY written by a segmentation reloads identically") {
    TempDir dir;
    const Scene scene = generateScene(namedScene("coplanar_pair", 3));
    const std::string path = dir.file("gt.ply");
    writeCloud(path, CloudFormat::LabeledPly, scene.cloud, scene.groundTruth.values);
    const CloudFile loaded = readCloud(path, CloudFormat::LabeledPly);
    REQUIRE(loaded.labels.size() == scene.groundTruth.values.size());
    CHECK(loaded.labels == scene.groundTruth.values);
    // float32 storage: positions match to single precision
    for (int i = 0; i < scene.cloud.size(); ++i)
        CHECK((loaded.cloud.positions[i] - scene.cloud.positions[i]).norm() < 1e-6);
}

TEST_CASE("source_index survives a layer round-trip") {
    TempDir dir;
    const std::string path = dir.file("layer.ply");
    const PointCloud cloud = threePoints();
    writeCloud(path, CloudFormat::PlyAscii, cloud, {}, {7, 11, 42});
    const CloudFile loaded = readCloud(path, CloudFormat::PlyAscii);
    CHECK(loaded.sourceIndex == std::vector<std::int32_t>{7, 11, 42});
}

TEST_CASE("parse errors carry line numbers") {
    TempDir dir;
    const std::string path = dir.file("bad.ply");
    {
        std::ofstream out(path);
        out << "ply\nformat ascii 1.0\nelement vertex 2\n"
               "property float x\nproperty float y\nproperty float z\n"
               "end_header\n0 0 0\n1 oops 1\n";
    }
    try {
        readCloud(path, CloudFormat::PlyAscii);
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.line() == 9);
    }

    const std::string shortRow = dir.file("short.xyz");
    {
        std::ofstream out(shortRow);
        out << "0 0 0\n1 2\n";
    }
    CHECK_THROWS_AS(readCloud(shortRow, CloudFormat::Xyz), ParseError);
}

TEST_CASE("unsupported elements and formats are rejected") {
    TempDir dir;
    const std::string mesh = dir.file("mesh.ply");
    {
        std::ofstream out(mesh);
        out << "ply\nformat ascii 1.0\nelement vertex 1\n"
               "property float x\nproperty float y\nproperty float z\n"
               "element face 1\nproperty list uchar int vertex_indices\n"
               "end_header\n0 0 0\n3 0 0 0\n";
    }
    CHECK_THROWS_AS(readCloud(mesh, CloudFormat::PlyAscii), UnsupportedFormat);

    const std::string big = dir.file("big.ply");
    {
        std::ofstream out(big);
        out << "ply\nformat binary_big_endian 1.0\nelement vertex 0\nend_header\n";
    }
    CHECK_THROWS_AS(readCloud(big, CloudFormat::PlyAscii), UnsupportedFormat);

    CHECK_THROWS_AS(readCloud(dir.file("absent.ply"), CloudFormat::PlyAscii), IoError);
    CHECK_THROWS_AS(formatFromName("step"), ConfigError);
    CHECK(formatFromName("labeled-ply") == CloudFormat::LabeledPly);
    CHECK(formatFromPath("x.xyz") == CloudFormat::Xyz);
    CHECK(formatFromPath("x.ply") == CloudFormat::PlyAscii);
}

TEST_CASE("meshes export with faces") {
    TempDir dir;
    TriangleMesh mesh;
    mesh.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    mesh.triangles = {{0, 1, 2}};
    const std::string path = dir.file("tri.ply");
    writeMeshPly(path, mesh);
    const std::string text = slurp(path);
    CHECK(text.find("element face 1") != std::string::npos);
    CHECK(text.find("3 0 1 2") != std::string::npos);
}
