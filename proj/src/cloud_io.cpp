#include "leafsep/cloud_io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "leafsep/segmentation.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary PLY writer assumes a little-endian host");

namespace leafsep {

namespace {

struct PlyProperty {
    std::string name;
    std::string type;

    int byteSize() const {
        if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
        if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
        if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
            type == "float" || type == "float32")
            return 4;
        if (type == "double" || type == "float64") return 8;
        return -1;
    }
};

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parseFieldAscii(const std::string& token, std::size_t line) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        throw ParseError("bad numeric field '" + token + "'", line);
    return value;
}

double readFieldBinary(std::istream& in, const PlyProperty& prop, std::size_t line) {
    char buf[8];
    const int size = prop.byteSize();
    if (!in.read(buf, size)) throw ParseError("unexpected end of binary data", line);
    const std::string& t = prop.type;
    if (t == "float" || t == "float32") {
        float v;
        std::memcpy(&v, buf, 4);
        return v;
    }
    if (t == "double" || t == "float64") {
        double v;
        std::memcpy(&v, buf, 8);
        return v;
    }
    if (t == "uchar" || t == "uint8") return static_cast<unsigned char>(buf[0]);
    if (t == "char" || t == "int8") return static_cast<signed char>(buf[0]);
    if (t == "short" || t == "int16") {
        std::int16_t v;
        std::memcpy(&v, buf, 2);
        return v;
    }
    if (t == "ushort" || t == "uint16") {
        std::uint16_t v;
        std::memcpy(&v, buf, 2);
        return v;
    }
    if (t == "uint" || t == "uint32") {
        std::uint32_t v;
        std::memcpy(&v, buf, 4);
        return v;
    }
    std::int32_t v;
    std::memcpy(&v, buf, 4);
    return v;
}

CloudFile readPly(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::size_t lineNo = 0;
    std::string line;
    auto nextLine = [&]() -> std::string {
        if (!std::getline(in, line)) throw ParseError("unexpected end of header", lineNo);
        ++lineNo;
        return trimmed(line);
    };

    if (nextLine() != "ply") throw ParseError("missing 'ply' magic", lineNo);
    bool binary = false;
    bool haveFormat = false;
    long long vertexCount = -1;
    std::vector<PlyProperty> props;
    bool inVertexElement = false;

    for (;;) {
        const std::string header = nextLine();
        if (header == "end_header") break;
        std::istringstream ss(header);
        std::string word;
        ss >> word;
        if (word == "comment" || word == "obj_info" || word.empty()) continue;
        if (word == "format") {
            std::string kind, version;
            ss >> kind >> version;
            if (kind == "ascii") binary = false;
            else if (kind == "binary_little_endian") binary = true;
            else throw UnsupportedFormat("unsupported PLY format '" + kind + "'");
            haveFormat = true;
        } else if (word == "element") {
            std::string name;
            long long count = 0;
            ss >> name >> count;
            if (name == "vertex") {
                vertexCount = count;
                inVertexElement = true;
            } else {
                throw UnsupportedFormat("unsupported PLY element '" + name + "'");
            }
        } else if (word == "property") {
            if (!inVertexElement) throw ParseError("property outside an element", lineNo);
            PlyProperty prop;
            ss >> prop.type;
            if (prop.type == "list") throw UnsupportedFormat("list properties not supported");
            ss >> prop.name;
            if (prop.byteSize() < 0)
                throw UnsupportedFormat("unsupported property type '" + prop.type + "'");
            props.push_back(prop);
        } else {
            throw ParseError("unrecognized header line '" + header + "'", lineNo);
        }
    }
    if (!haveFormat) throw ParseError("missing format line", lineNo);
    if (vertexCount < 0) throw ParseError("missing vertex element", lineNo);

    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, ilabel = -1, isrc = -1;
    for (std::size_t p = 0; p < props.size(); ++p) {
        const std::string& name = props[p].name;
        if (name == "x") ix = static_cast<int>(p);
        else if (name == "y") iy = static_cast<int>(p);
        else if (name == "z") iz = static_cast<int>(p);
        else if (name == "red") ir = static_cast<int>(p);
        else if (name == "green") ig = static_cast<int>(p);
        else if (name == "blue") ib = static_cast<int>(p);
        else if (name == "label") ilabel = static_cast<int>(p);
        else if (name == "source_index") isrc = static_cast<int>(p);
    }
    if (ix < 0 || iy < 0 || iz < 0)
        throw UnsupportedFormat("PLY vertex element lacks x/y/z properties");
    const bool hasColor = ir >= 0 && ig >= 0 && ib >= 0;

    CloudFile out;
    out.cloud.positions.reserve(vertexCount);
    std::vector<double> fields(props.size());
    for (long long row = 0; row < vertexCount; ++row) {
        if (binary) {
            for (std::size_t p = 0; p < props.size(); ++p)
                fields[p] = readFieldBinary(in, props[p], lineNo);
        } else {
            if (!std::getline(in, line)) throw ParseError("missing vertex row", lineNo + 1);
            ++lineNo;
            std::istringstream ss(line);
            std::string token;
            for (std::size_t p = 0; p < props.size(); ++p) {
                if (!(ss >> token)) throw ParseError("short vertex row", lineNo);
                fields[p] = parseFieldAscii(token, lineNo);
            }
        }
        out.cloud.positions.emplace_back(fields[ix], fields[iy], fields[iz]);
        if (hasColor)
            out.cloud.colors.push_back(Rgb{static_cast<std::uint8_t>(fields[ir]),
                                           static_cast<std::uint8_t>(fields[ig]),
                                           static_cast<std::uint8_t>(fields[ib])});
        if (ilabel >= 0) out.labels.push_back(static_cast<std::int32_t>(fields[ilabel]));
        if (isrc >= 0) out.sourceIndex.push_back(static_cast<std::int32_t>(fields[isrc]));
    }
    return out;
}

CloudFile readXyz(const std::string& path, bool withColor) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    CloudFile out;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string row = trimmed(line);
        if (row.empty() || row[0] == '#') continue;
        std::istringstream ss(row);
        std::string token;
        double f[6];
        const int want = withColor ? 6 : 3;
        for (int i = 0; i < want; ++i) {
            if (!(ss >> token)) throw ParseError("short row", lineNo);
            f[i] = parseFieldAscii(token, lineNo);
        }
        out.cloud.positions.emplace_back(f[0], f[1], f[2]);
        if (withColor)
            out.cloud.colors.push_back(Rgb{static_cast<std::uint8_t>(f[3]),
                                           static_cast<std::uint8_t>(f[4]),
                                           static_cast<std::uint8_t>(f[5])});
    }
    return out;
}

void formatFloat(std::string& out, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(static_cast<float>(value)));
    out += buf;
}

}  // namespace

CloudFormat formatFromName(const std::string& name) {
    if (name == "ply-ascii") return CloudFormat::PlyAscii;
    if (name == "ply-binary-le") return CloudFormat::PlyBinaryLE;
    if (name == "xyz") return CloudFormat::Xyz;
    if (name == "xyzrgb") return CloudFormat::XyzRgb;
    if (name == "labeled-ply") return CloudFormat::LabeledPly;
    throw ConfigError("unknown cloud format '" + name + "'");
}

std::string formatName(CloudFormat format) {
    switch (format) {
        case CloudFormat::PlyAscii: return "ply-ascii";
        case CloudFormat::PlyBinaryLE: return "ply-binary-le";
        case CloudFormat::Xyz: return "xyz";
        case CloudFormat::XyzRgb: return "xyzrgb";
        case CloudFormat::LabeledPly: return "labeled-ply";
    }
    return "ply-ascii";
}

CloudFormat formatFromPath(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "xyz") return CloudFormat::Xyz;
    if (ext == "xyzrgb") return CloudFormat::XyzRgb;
    return CloudFormat::PlyAscii;
}

CloudFile readCloud(const std::string& path, CloudFormat format) {
    switch (format) {
        case CloudFormat::Xyz: return readXyz(path, false);
        case CloudFormat::XyzRgb: return readXyz(path, true);
        case CloudFormat::LabeledPly: {
            CloudFile file = readPly(path);
            if (file.labels.empty() && !file.cloud.empty())
                throw UnsupportedFormat("'" + path + "' has no label property");
            return file;
        }
        default: return readPly(path);
    }
}

void writeCloud(const std::string& path, CloudFormat format, const PointCloud& cloud,
                const std::vector<std::int32_t>& labels,
                const std::vector<std::int32_t>& sourceIndex) {
    const bool wantLabels = format == CloudFormat::LabeledPly;
    if (wantLabels && static_cast<int>(labels.size()) != cloud.size())
        throw ConfigError("writeCloud: labeled output needs one label per point");
    if (!sourceIndex.empty() && static_cast<int>(sourceIndex.size()) != cloud.size())
        throw ConfigError("writeCloud: source_index size mismatch");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");

    if (format == CloudFormat::Xyz || format == CloudFormat::XyzRgb) {
        std::string body;
        for (int i = 0; i < cloud.size(); ++i) {
            formatFloat(body, cloud.positions[i].x());
            body += ' ';
            formatFloat(body, cloud.positions[i].y());
            body += ' ';
            formatFloat(body, cloud.positions[i].z());
            if (format == CloudFormat::XyzRgb) {
                const Rgb c = cloud.hasColors() ? cloud.colors[i] : Rgb{0, 0, 0};
                body += ' ' + std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' +
                        std::to_string(c[2]);
            }
            body += '\n';
        }
        out << body;
        return;
    }

    const bool binary = format == CloudFormat::PlyBinaryLE;
    const bool writeColor = wantLabels || cloud.hasColors();

    out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
    out << "element vertex " << cloud.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (writeColor)
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    if (wantLabels) out << "property int label\n";
    if (!sourceIndex.empty()) out << "property int source_index\n";
    out << "end_header\n";

    for (int i = 0; i < cloud.size(); ++i) {
        const Rgb color = wantLabels          ? labelColor(labels[i])
                          : cloud.hasColors() ? cloud.colors[i]
                                              : Rgb{0, 0, 0};
        if (binary) {
            const float xyz[3] = {static_cast<float>(cloud.positions[i].x()),
                                  static_cast<float>(cloud.positions[i].y()),
                                  static_cast<float>(cloud.positions[i].z())};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
            if (writeColor) {
                const unsigned char rgb[3] = {color[0], color[1], color[2]};
                out.write(reinterpret_cast<const char*>(rgb), 3);
            }
            if (wantLabels) {
                const std::int32_t label = labels[i];
                out.write(reinterpret_cast<const char*>(&label), 4);
            }
            if (!sourceIndex.empty()) {
                const std::int32_t src = sourceIndex[i];
                out.write(reinterpret_cast<const char*>(&src), 4);
            }
        } else {
            std::string row;
            formatFloat(row, cloud.positions[i].x());
            row += ' ';
            formatFloat(row, cloud.positions[i].y());
            row += ' ';
            formatFloat(row, cloud.positions[i].z());
            if (writeColor)
                row += ' ' + std::to_string(color[0]) + ' ' + std::to_string(color[1]) + ' ' +
                       std::to_string(color[2]);
            if (wantLabels) row += ' ' + std::to_string(labels[i]);
            if (!sourceIndex.empty()) row += ' ' + std::to_string(sourceIndex[i]);
            row += '\n';
            out << row;
        }
    }
}

void writeMeshPly(const std::string& path, const TriangleMesh& mesh) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertices.size() << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    out << "element face " << mesh.triangles.size() << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "end_header\n";
    for (const Vec3& v : mesh.vertices) {
        std::string row;
        formatFloat(row, v.x());
        row += ' ';
        formatFloat(row, v.y());
        row += ' ';
        formatFloat(row, v.z());
        row += '\n';
        out << row;
    }
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace leafsep
