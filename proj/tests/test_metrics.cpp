#include <map>

#include "doctest.h"
#include "leafsep/metrics.hpp"
#include "oracles.hpp"

using namespace leafsep;

namespace {

Segmentation fromValues(std::vector<std::int32_t> values) {
    Segmentation seg;
    std::int32_t hi = -1;
    for (std::int32_t v : values) hi = std::max(hi, v);
    seg.labelCount = hi + 1;
    seg.values = std::move(values);
    return seg;
}

// builds a gt/seg pair from per-leaf sizes and a region plan:
// plan[leaf] = list of (region, count) slices of that leaf
struct Layout {
    Segmentation gt;
    Segmentation seg;
};

Layout buildLayout(const std::vector<std::vector<std::pair<int, int>>>& plan) {
    std::vector<std::int32_t> gt, seg;
    for (std::size_t leaf = 0; leaf < plan.size(); ++leaf)
        for (const auto& [region, count] : plan[leaf])
            for (int i = 0; i < count; ++i) {
                gt.push_back(static_cast<std::int32_t>(leaf));
                seg.push_back(region);
            }
    return {fromValues(std::move(gt)), fromValues(std::move(seg))};
}

// exhaustive reference for the leaf-level counts
LeafLevelReport bruteLeafLevel(const Segmentation& seg, const Segmentation& gt,
                               double threshold) {
    std::map<int, std::map<int, int>> overlap;  // gt -> region -> count
    std::map<int, int> gtSize;
    for (std::size_t i = 0; i < gt.values.size(); ++i) {
        if (gt.values[i] < 0) continue;
        gtSize[gt.values[i]] += 1;
        if (seg.values[i] >= 0) overlap[gt.values[i]][seg.values[i]] += 1;
    }
    LeafLevelReport report;
    report.referenceLeafCount = static_cast<int>(gtSize.size());
    std::map<int, int> tpPerRegion;
    for (const auto& [leaf, size] : gtSize) {
        double best = 0.0;
        for (const auto& [region, count] : overlap[leaf]) {
            const double cover = static_cast<double>(count) / size;
            best = std::max(best, cover);
            if (cover > threshold) tpPerRegion[region] += 1;
        }
        if (best > threshold) report.truePositives += 1;
        if (best <= 1.0 - threshold) report.falseNegatives += 1;
    }
    for (const auto& [region, count] : tpPerRegion)
        if (count >= 2) report.falsePositives += count - 1;
    return report;
}

}  // namespace

TEST_CASE("matchRegions is the identity on perfect segmentations") {
    const Segmentation gt = fromValues({0, 0, 1, 1, 2, 2, 2});
    const auto matching = matchRegions(gt, gt);
    REQUIRE(matching.size() == 3);
    for (int g = 0; g < 3; ++g) CHECK(*matching[g] == g);
}

TEST_CASE("one region spanning two leaves matches both") {
    const Layout layout = buildLayout({{{0, 50}}, {{0, 30}, {1, 5}}});
    const auto matching = matchRegions(layout.seg, layout.gt);
    CHECK(*matching[0] == 0);
    CHECK(*matching[1] == 0);  // 30 > 5
}

TEST_CASE("matching is invariant under label permutation") {
    Rng rng(3);
    std::vector<std::int32_t> gt(300), seg(300);
    for (auto& v : gt) v = static_cast<std::int32_t>(rng.below(5));
    for (auto& v : seg) v = static_cast<std::int32_t>(rng.below(6));
    const Segmentation gtSeg = fromValues(gt);
    const Segmentation segSeg = fromValues(seg);
    const auto base = matchRegions(segSeg, gtSeg);

    // permute gt labels
    const std::vector<std::int32_t> perm{3, 0, 4, 1, 2};
    std::vector<std::int32_t> gtPerm(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) gtPerm[i] = perm[gt[i]];
    const auto remapped = matchRegions(segSeg, fromValues(gtPerm));
    for (int g = 0; g < 5; ++g) {
        REQUIRE(base[g].has_value());
        CHECK(*base[g] == *remapped[perm[g]]);
    }

    CHECK_THROWS_AS(matchRegions(fromValues({0, 1}), gtSeg), IndexMismatch);
}

TEST_CASE("pointLevel reproduces the published per-leaf rows") {
    // leaf with 528 points: 368 covered, 160 missing, 5 false
    const Layout hedera = buildLayout({{{0, 368}, {1, 160}}, {{0, 5}, {1, 1000}}});
    const auto rows = pointLevel(hedera.seg, hedera.gt, matchRegions(hedera.seg, hedera.gt));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].numGt == 528);
    CHECK(rows[0].resultPoints == 373);
    CHECK(rows[0].missing == 160);
    CHECK(rows[0].falsePoints == 5);
    CHECK(rows[0].numBlue == 368);
    CHECK(std::llround(1000.0 * rows[0].coverRate) == 697);  // 69.7%

    // leaf with 791 points: 9 missing, none false
    const Layout epi = buildLayout({{{0, 782}, {1, 9}}, {{1, 400}}});
    const auto rows2 = pointLevel(epi.seg, epi.gt, matchRegions(epi.seg, epi.gt));
    CHECK(rows2[0].numGt == 791);
    CHECK(rows2[0].resultPoints == 782);
    CHECK(rows2[0].missing == 9);
    CHECK(rows2[0].falsePoints == 0);
    CHECK(std::llround(1000.0 * rows2[0].coverRate) == 989);  // 98.9%
}

TEST_CASE("pointLevel satisfies the accounting identities exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 50 + static_cast<int>(rng.below(400));
        std::vector<std::int32_t> gt(n), seg(n);
        for (auto& v : gt) v = static_cast<std::int32_t>(rng.below(6));
        for (auto& v : seg) v = static_cast<std::int32_t>(rng.below(7));
        const Segmentation g = fromValues(gt), s = fromValues(seg);
        const auto rows = pointLevel(s, g, matchRegions(s, g));
        long long blueSum = 0;
        for (const LeafMatch& row : rows) {
            CHECK(row.numGt == row.numBlue + row.missing);
            CHECK(row.resultPoints == row.numBlue + row.falsePoints);
            blueSum += row.numBlue;
        }
        CHECK(blueSum <= n);
        // for a partition-valid pair, blue + missing covers every point
        long long covered = 0;
        for (const LeafMatch& row : rows) covered += row.numBlue + row.missing;
        CHECK(covered == n);
    }
}

TEST_CASE("leafLevel reproduces the published summary rows") {
    // 36 TP of 37 reference leaves, one merged pair, one half-covered leaf
    std::vector<std::vector<std::pair<int, int>>> plan;
    for (int leaf = 0; leaf < 34; ++leaf) plan.push_back({{leaf, 100}});
    plan.push_back({{34, 100}});          // leaf 34 merged with...
    plan.push_back({{34, 100}});          // ...leaf 35 in region 34
    plan.push_back({{35, 50}, {36, 50}}); // leaf 36 split in half
    const Layout layout = buildLayout(plan);
    const auto report =
        leafLevel(layout.seg, layout.gt, matchRegions(layout.seg, layout.gt), 0.70);

    CHECK(report.referenceLeafCount == 37);
    CHECK(report.truePositives == 36);
    CHECK(report.falsePositives == 1);
    CHECK(report.falseNegatives == 0);
    CHECK(std::abs(report.recall - 1.0) < 1e-4);
    CHECK(std::abs(report.precision - 0.9730) < 1e-4);   // 36/37
    CHECK(std::abs(report.fMeasure - 0.9863) < 1e-4);    // 72/73

    // 17 TP of 23, six extra FPs from three triple merges
    std::vector<std::vector<std::pair<int, int>>> plan2;
    for (int leaf = 0; leaf < 8; ++leaf) plan2.push_back({{leaf, 100}});
    for (int merge = 0; merge < 3; ++merge)
        for (int i = 0; i < 3; ++i) plan2.push_back({{8 + merge, 100}});
    for (int leaf = 0; leaf < 6; ++leaf)
        plan2.push_back({{11 + leaf, 50}, {17 + leaf, 50}});
    const Layout layout2 = buildLayout(plan2);
    const auto report2 =
        leafLevel(layout2.seg, layout2.gt, matchRegions(layout2.seg, layout2.gt), 0.70);
    CHECK(report2.referenceLeafCount == 23);
    CHECK(report2.truePositives == 17);
    CHECK(report2.falsePositives == 6);
    CHECK(report2.falseNegatives == 0);
    CHECK(std::abs(report2.recall - 1.0) < 1e-4);
    CHECK(std::abs(report2.precision - 0.739) < 2e-4);  // 17/23
    CHECK(std::abs(report2.fMeasure - 0.85) < 1e-4);    // 34/40

    // perfect segmentation
    const Layout perfect = buildLayout({{{0, 40}}, {{1, 60}}});
    const auto report3 =
        leafLevel(perfect.seg, perfect.gt, matchRegions(perfect.seg, perfect.gt), 0.70);
    CHECK(report3.truePositives == 2);
    CHECK(report3.falsePositives == 0);
    CHECK(report3.falseNegatives == 0);
    CHECK(report3.recall == 1.0);
    CHECK(report3.precision == 1.0);
    CHECK(report3.fMeasure == 1.0);
}

TEST_CASE("leafLevel agrees with the exhaustive oracle on random scenes") {
    Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 60 + static_cast<int>(rng.below(440));
        const int leaves = 2 + static_cast<int>(rng.below(7));
        const int regions = 1 + static_cast<int>(rng.below(9));
        std::vector<std::int32_t> gt(n), seg(n);
        for (auto& v : gt) v = static_cast<std::int32_t>(rng.below(leaves));
        for (auto& v : seg) v = static_cast<std::int32_t>(rng.below(regions));
        const Segmentation g = fromValues(gt), s = fromValues(seg);

        const auto got = leafLevel(s, g, matchRegions(s, g), 0.70);
        const auto expect = bruteLeafLevel(s, g, 0.70);
        CHECK(got.truePositives == expect.truePositives);
        CHECK(got.falsePositives == expect.falsePositives);
        CHECK(got.falseNegatives == expect.falseNegatives);
    }
}

TEST_CASE("reports render the Table-style columns") {
    const Layout layout = buildLayout({{{0, 368}, {1, 160}}, {{0, 5}, {1, 1000}}});
    const auto rows = pointLevel(layout.seg, layout.gt, matchRegions(layout.seg, layout.gt));
    const std::string csv = pointLevelCsv(rows);
    CHECK(csv.find("leaf,num_gt,rp,mp,fp,num_blue,cover_rate") == 0);
    CHECK(csv.find("1,528,373,160,5,368,69.7") != std::string::npos);

    const std::string table = pointLevelTable(rows);
    CHECK(table.find("Num_gt") != std::string::npos);
    CHECK(table.find("528") != std::string::npos);

    const auto report = leafLevel(layout.seg, layout.gt,
                                  matchRegions(layout.seg, layout.gt), 0.70);
    const std::string summary = leafLevelSummary(report);
    CHECK(summary.find("Recall") != std::string::npos);
    CHECK(summary.find("Precision") != std::string::npos);
}
