#pragma once

#include <string>
#include <vector>

#include "leafsep/leaf_traits.hpp"
#include "leafsep/point_cloud.hpp"

namespace leafsep {

enum class CloudFormat { PlyAscii, PlyBinaryLE, Xyz, XyzRgb, LabeledPly };

CloudFormat formatFromName(const std::string& name);
std::string formatName(CloudFormat format);

/// Best guess from the file extension (.ply -> ascii PLY, .xyz -> xyz);
/// PLY readers accept either PLY flavor regardless.
CloudFormat formatFromPath(const std::string& path);

struct CloudFile {
    PointCloud cloud;
    std::vector<std::int32_t> labels;       // empty when absent
    std::vector<std::int32_t> sourceIndex;  // empty when absent
};

/// Reads positions plus optional color, label and source_index vertex
/// properties. Malformed content raises ParseError with a line number;
/// non-vertex elements raise UnsupportedFormat.
CloudFile readCloud(const std::string& path, CloudFormat format);

/// Writes the cloud in the given format. Labeled output carries an int32
/// `label` property plus the deterministic label palette as vertex color.
/// Positions are stored as 32-bit floats; ASCII formatting is fixed so
/// identical data produces identical bytes.
void writeCloud(const std::string& path, CloudFormat format, const PointCloud& cloud,
                const std::vector<std::int32_t>& labels = {},
                const std::vector<std::int32_t>& sourceIndex = {});

/// ASCII PLY with vertex and face elements.
void writeMeshPly(const std::string& path, const TriangleMesh& mesh);

}  // namespace leafsep
