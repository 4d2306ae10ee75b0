#include "leafsep/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "leafsep/geometry.hpp"
#include "leafsep/parallel.hpp"
#include "leafsep/spatial_index.hpp"

namespace leafsep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PointFeature {
    Vec3 normal = Vec3::UnitZ();
    double curvature = 1.0;
};

std::vector<PointFeature> layerFeatures(const PointCloud& layer, const SpatialIndex& index,
                                        int pcaK) {
    const int n = layer.size();
    const int k = std::min(pcaK, n - 1);
    std::vector<PointFeature> features(n);
    if (k < 2) {
        for (auto& f : features) f.curvature = 0.0;
        return features;
    }
    parallelFor(n, [&](int i) {
        std::vector<int> nbrs = index.neighborsOf(i, k);
        std::vector<Vec3> pts;
        pts.reserve(nbrs.size() + 1);
        pts.push_back(layer.positions[i]);
        for (int idx : nbrs) pts.push_back(layer.positions[idx]);
        try {
            const LocalFrame frame = pcaFrame(pts);
            features[i].normal = frame.n;
            features[i].curvature = frame.curvature();
        } catch (const DegenerateNeighborhood&) {
            // coincident cluster: worst curvature, placeholder normal
        }
    });
    return features;
}

}  // namespace

void SegParams::validate() const {
    if (dL <= 0.0) throw ConfigError("segmentation: d_l must be > 0");
    if (dAdj < 0.0) throw ConfigError("segmentation: d_adj must be >= 0");
    if (normalAngleMaxDeg <= 0.0 || normalAngleMaxDeg >= 180.0)
        throw ConfigError("segmentation: normal_angle_max must lie in (0, 180) degrees");
    if (maxFacetPoints < 0) throw ConfigError("segmentation: max_facet_points must be >= 0");
    if (kmeansIters < 0) throw ConfigError("segmentation: kmeans_iters must be >= 0");
    if (pcaK < 3) throw ConfigError("segmentation: pca_k must be >= 3");
}

LeafSet preSegmentCenters(const PointCloud& core, double dL) {
    if (dL <= 0.0) throw ConfigError("preSegmentCenters: d_l must be > 0");
    return connectedComponents(core, dL);
}

FacetSet overSegmentFacets(const PointCloud& layer, const SegParams& params) {
    params.validate();
    const int n = layer.size();
    if (n == 0) return {};

    const double dAdj = params.adjacency();
    const int cap = params.maxFacetPoints > 0
                        ? params.maxFacetPoints
                        : std::max(30, (n + 49) / 50);
    const double cosMax = std::cos(params.normalAngleMaxDeg * M_PI / 180.0);

    const SpatialIndex index(layer);
    const std::vector<PointFeature> features = layerFeatures(layer, index, params.pcaK);

    // Coarse facets: lowest-curvature seeds grow to normal-compatible
    // neighbors, capped in size.
    std::vector<int> facetOf(n, -1);
    std::vector<int> seedOrder(n);
    for (int i = 0; i < n; ++i) seedOrder[i] = i;
    std::sort(seedOrder.begin(), seedOrder.end(), [&](int a, int b) {
        return features[a].curvature < features[b].curvature ||
               (features[a].curvature == features[b].curvature && a < b);
    });

    int facetCount = 0;
    std::deque<int> queue;
    for (int seed : seedOrder) {
        if (facetOf[seed] >= 0) continue;
        const int id = facetCount++;
        const Vec3 seedNormal = features[seed].normal;
        int size = 0;
        facetOf[seed] = id;
        ++size;
        queue.clear();
        queue.push_back(seed);
        while (!queue.empty() && size < cap) {
            const int cur = queue.front();
            queue.pop_front();
            for (int nbr : index.radiusSearch(layer.positions[cur], dAdj)) {
                if (facetOf[nbr] >= 0) continue;
                if (std::abs(features[nbr].normal.dot(seedNormal)) < cosMax) continue;
                facetOf[nbr] = id;
                queue.push_back(nbr);
                if (++size >= cap) break;
            }
        }
    }

    // Facet centers
    auto computeCenters = [&](const std::vector<int>& assignment, int count,
                              std::vector<Vec3>& centroids, std::vector<Vec3>& normals,
                              std::vector<int>& sizes) {
        centroids.assign(count, Vec3::Zero());
        normals.assign(count, Vec3::Zero());
        sizes.assign(count, 0);
        std::vector<Vec3> firstNormal(count, Vec3::Zero());
        for (int i = 0; i < n; ++i) {
            const int f = assignment[i];
            centroids[f] += layer.positions[i];
            if (sizes[f] == 0) firstNormal[f] = features[i].normal;
            const Vec3& ni = features[i].normal;
            normals[f] += ni.dot(firstNormal[f]) >= 0.0 ? ni : -ni;
            sizes[f] += 1;
        }
        for (int f = 0; f < count; ++f) {
            if (sizes[f] == 0) continue;
            centroids[f] /= sizes[f];
            const double len = normals[f].norm();
            normals[f] = len > 1e-12 ? Vec3(normals[f] / len) : Vec3::UnitZ();
        }
    };

    std::vector<Vec3> centroids, normals;
    std::vector<int> sizes;
    computeCenters(facetOf, facetCount, centroids, normals, sizes);

    // Local K-means refinement: points may move to a nearby facet with a
    // cheaper (distance, normal) cost.
    for (int iter = 0; iter < params.kmeansIters; ++iter) {
        PointCloud centerCloud;
        std::vector<int> centerFacet;
        for (int f = 0; f < facetCount; ++f) {
            if (sizes[f] == 0) continue;
            centerCloud.append(centroids[f]);
            centerFacet.push_back(f);
        }
        if (centerCloud.empty()) break;
        const SpatialIndex centerIndex(centerCloud);

        std::vector<int> next(n);
        parallelFor(n, [&](int i) {
            const Vec3& p = layer.positions[i];
            const Vec3& ni = features[i].normal;
            int best = facetOf[i];
            auto cost = [&](int f) {
                return (p - centroids[f]).norm() / dAdj +
                       (1.0 - std::abs(ni.dot(normals[f])));
            };
            double bestCost = cost(best);
            for (int c : centerIndex.radiusSearch(p, 2.0 * dAdj)) {
                const int f = centerFacet[c];
                const double fCost = cost(f);
                if (fCost < bestCost || (fCost == bestCost && f < best)) {
                    bestCost = fCost;
                    best = f;
                }
            }
            next[i] = best;
        });
        if (next == facetOf) break;
        facetOf.swap(next);
        computeCenters(facetOf, facetCount, centroids, normals, sizes);
    }

    // Drop empty facets, emit members in index order.
    std::vector<int> denseId(facetCount, -1);
    FacetSet facets;
    for (int i = 0; i < n; ++i) {
        const int f = facetOf[i];
        if (denseId[f] < 0) {
            denseId[f] = static_cast<int>(facets.size());
            facets.push_back({});
        }
        facets[denseId[f]].members.push_back(i);
    }
    for (Facet& facet : facets) {
        Vec3 centroid = Vec3::Zero();
        Vec3 normal = Vec3::Zero();
        const Vec3 ref = features[facet.members.front()].normal;
        for (int m : facet.members) {
            centroid += layer.positions[m];
            const Vec3& nm = features[m].normal;
            normal += nm.dot(ref) >= 0.0 ? nm : -nm;
        }
        facet.centroid = centroid / static_cast<double>(facet.members.size());
        const double len = normal.norm();
        facet.meanNormal = len > 1e-12 ? Vec3(normal / len) : Vec3::UnitZ();
    }
    return facets;
}

Segmentation growFacets(const PointCloud& original, const LeafSet& coreLabels,
                        const std::vector<int>& coreIndex,
                        const std::vector<GrowLayer>& layersInnermostFirst, double dAdj) {
    if (dAdj <= 0.0) throw ConfigError("growFacets: adjacency distance must be > 0");

    Segmentation seg;
    seg.values.assign(original.size(), LabelMap::kNone);
    seg.labelCount = coreLabels.labelCount;
    for (std::size_t i = 0; i < coreIndex.size(); ++i)
        seg.values[coreIndex[i]] = coreLabels.values[i];

    std::vector<int> allLabeled = coreIndex;

    for (const GrowLayer& layer : layersInnermostFirst) {
        const int layerSize = static_cast<int>(layer.sourceIndex.size());
        if (layerSize == 0) continue;

        std::vector<int> facetOf(layerSize, -1);
        for (std::size_t f = 0; f < layer.facets.size(); ++f)
            for (int m : layer.facets[f].members) facetOf[m] = static_cast<int>(f);

        std::vector<char> facetLabeled(layer.facets.size(), 0);
        int unlabeledCount = static_cast<int>(layer.facets.size());

        // Attachment sweeps. The first sweep tests facets against every
        // point labeled so far; afterwards only the previous sweep's
        // additions can create new adjacencies.
        std::vector<int> frontier = allLabeled;
        while (unlabeledCount > 0 && !frontier.empty()) {
            const PointCloud frontierCloud = selectPoints(original, frontier);
            const SpatialIndex frontierIndex(frontierCloud);

            struct Best {
                double dist2 = kInf;
                std::int32_t label = -1;
            };
            std::vector<Best> best(layer.facets.size());
            std::vector<int> open;
            for (std::size_t f = 0; f < layer.facets.size(); ++f)
                if (!facetLabeled[f]) open.push_back(static_cast<int>(f));

            parallelFor(static_cast<int>(open.size()), [&](int oi) {
                const int f = open[oi];
                Best b;
                for (int m : layer.facets[f].members) {
                    const Vec3& p = original.positions[layer.sourceIndex[m]];
                    for (int hit : frontierIndex.radiusSearch(p, dAdj)) {
                        const double d2 = (frontierCloud.positions[hit] - p).squaredNorm();
                        const std::int32_t label = seg.values[frontier[hit]];
                        if (d2 < b.dist2 || (d2 == b.dist2 && label < b.label)) {
                            b.dist2 = d2;
                            b.label = label;
                        }
                    }
                }
                best[f] = b;
            });

            std::vector<int> newFrontier;
            for (int f : open) {
                if (best[f].label < 0) continue;
                facetLabeled[f] = 1;
                --unlabeledCount;
                for (int m : layer.facets[f].members) {
                    const int src = layer.sourceIndex[m];
                    seg.values[src] = best[f].label;
                    newFrontier.push_back(src);
                    allLabeled.push_back(src);
                }
            }
            if (newFrontier.empty()) break;
            frontier = std::move(newFrontier);
        }

        // Remaining facets are out of reach of every labeled region:
        // seed new leaves and flood through facet adjacency.
        if (unlabeledCount > 0) {
            const PointCloud layerCloud = selectPoints(original, layer.sourceIndex);
            const SpatialIndex layerIndex(layerCloud);
            std::vector<std::vector<int>> adjacent(layer.facets.size());
            for (std::size_t f = 0; f < layer.facets.size(); ++f) {
                if (facetLabeled[f]) continue;
                std::vector<int>& adj = adjacent[f];
                for (int m : layer.facets[f].members)
                    for (int hit : layerIndex.radiusSearch(layerCloud.positions[m], dAdj)) {
                        const int g = facetOf[hit];
                        if (g != static_cast<int>(f) && !facetLabeled[g]) adj.push_back(g);
                    }
                std::sort(adj.begin(), adj.end());
                adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
            }

            std::deque<int> queue;
            for (std::size_t f = 0; f < layer.facets.size(); ++f) {
                if (facetLabeled[f]) continue;
                const std::int32_t label = seg.labelCount++;
                facetLabeled[f] = 1;
                --unlabeledCount;
                queue.clear();
                queue.push_back(static_cast<int>(f));
                while (!queue.empty()) {
                    const int cur = queue.front();
                    queue.pop_front();
                    for (int m : layer.facets[cur].members) {
                        const int src = layer.sourceIndex[m];
                        seg.values[src] = label;
                        allLabeled.push_back(src);
                    }
                    for (int g : adjacent[cur]) {
                        if (facetLabeled[g]) continue;
                        facetLabeled[g] = 1;
                        --unlabeledCount;
                        queue.push_back(g);
                    }
                }
            }
        }
    }
    return seg;
}

Segmentation segmentLeaves(const PointCloud& cloud, const JointFilterParams& jointParams,
                           int rounds, const SegParams& segParams) {
    segParams.validate();
    const LayerStack stack = multiRoundFilter(cloud, jointParams, rounds);
    const LeafSet centers = preSegmentCenters(stack.core, segParams.dL);

    std::vector<GrowLayer> layers;
    layers.reserve(stack.layers.size());
    for (int i = stack.roundCount() - 1; i >= 0; --i) {
        GrowLayer layer;
        layer.sourceIndex = stack.layerIndex[i];
        layer.facets = overSegmentFacets(stack.layers[i], segParams);
        layers.push_back(std::move(layer));
    }
    return growFacets(cloud, centers, stack.coreIndex, layers, segParams.adjacency());
}

Rgb labelColor(std::int32_t label) {
    if (label < 0) return Rgb{64, 64, 64};
    // golden-angle hue walk, fixed saturation/value
    const double hue = std::fmod(label * 137.50776405003785, 360.0);
    const double s = 0.72, v = 0.92;
    const double c = v * s;
    const double hPrime = hue / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hPrime, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    switch (static_cast<int>(hPrime)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    auto to8 = [&](double t) {
        return static_cast<std::uint8_t>(std::lround(255.0 * (t + m)));
    };
    return Rgb{to8(r), to8(g), to8(b)};
}

}  // namespace leafsep
