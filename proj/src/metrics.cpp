#include "leafsep/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "leafsep/errors.hpp"

namespace leafsep {

namespace {

void checkAligned(const Segmentation& seg, const Segmentation& gt) {
    if (seg.values.size() != gt.values.size())
        throw IndexMismatch("metrics: segmentation and ground truth differ in size");
}

int labelSpan(const Segmentation& s) {
    std::int32_t hi = -1;
    for (std::int32_t v : s.values) hi = std::max(hi, v);
    return hi + 1;
}

}  // namespace

std::vector<std::optional<std::int32_t>> matchRegions(const Segmentation& seg,
                                                      const Segmentation& gt) {
    checkAligned(seg, gt);
    const int gtCount = labelSpan(gt);

    // overlap counts per (gt label, seg label)
    std::vector<std::map<std::int32_t, int>> overlap(gtCount);
    for (std::size_t i = 0; i < gt.values.size(); ++i) {
        const std::int32_t g = gt.values[i];
        const std::int32_t s = seg.values[i];
        if (g < 0 || s < 0) continue;
        overlap[g][s] += 1;
    }

    std::vector<std::optional<std::int32_t>> matching(gtCount);
    for (int g = 0; g < gtCount; ++g) {
        int bestCount = 0;
        std::int32_t bestLabel = -1;
        for (const auto& [s, count] : overlap[g]) {
            if (count > bestCount) {  // map order gives lower label on ties
                bestCount = count;
                bestLabel = s;
            }
        }
        if (bestLabel >= 0) matching[g] = bestLabel;
    }
    return matching;
}

std::vector<LeafMatch> pointLevel(const Segmentation& seg, const Segmentation& gt,
                                  const std::vector<std::optional<std::int32_t>>& matching) {
    checkAligned(seg, gt);
    const int gtCount = labelSpan(gt);
    if (static_cast<int>(matching.size()) != gtCount)
        throw IndexMismatch("pointLevel: matching does not cover the ground-truth labels");

    std::vector<int> gtSize(gtCount, 0);
    std::map<std::int32_t, int> segSize;
    for (std::size_t i = 0; i < gt.values.size(); ++i) {
        if (gt.values[i] >= 0) gtSize[gt.values[i]] += 1;
        if (seg.values[i] >= 0) segSize[seg.values[i]] += 1;
    }

    std::vector<LeafMatch> rows(gtCount);
    for (int g = 0; g < gtCount; ++g) {
        rows[g].gtLabel = g;
        rows[g].numGt = gtSize[g];
        rows[g].segLabel = matching[g];
    }
    for (std::size_t i = 0; i < gt.values.size(); ++i) {
        const std::int32_t g = gt.values[i];
        if (g < 0) continue;
        if (matching[g] && seg.values[i] == *matching[g]) rows[g].numBlue += 1;
    }
    for (int g = 0; g < gtCount; ++g) {
        LeafMatch& row = rows[g];
        row.resultPoints = row.segLabel ? segSize[*row.segLabel] : 0;
        row.missing = row.numGt - row.numBlue;
        row.falsePoints = row.resultPoints - row.numBlue;
        row.coverRate = row.numGt > 0 ? static_cast<double>(row.numBlue) / row.numGt : 0.0;
    }
    return rows;
}

LeafLevelReport leafLevel(const Segmentation& seg, const Segmentation& gt,
                          const std::vector<std::optional<std::int32_t>>& matching,
                          double tpThreshold) {
    const std::vector<LeafMatch> rows = pointLevel(seg, gt, matching);

    LeafLevelReport report;
    report.referenceLeafCount = static_cast<int>(rows.size());

    std::map<std::int32_t, int> tpPerRegion;
    double coverSum = 0.0;
    for (const LeafMatch& row : rows) {
        coverSum += row.coverRate;
        if (row.coverRate > tpThreshold) {
            report.truePositives += 1;
            if (row.segLabel) tpPerRegion[*row.segLabel] += 1;
        }
        if (row.coverRate <= 1.0 - tpThreshold) report.falseNegatives += 1;
    }
    // k leaves merged into one region count as k-1 false positives
    for (const auto& [region, count] : tpPerRegion)
        if (count >= 2) report.falsePositives += count - 1;

    const int tp = report.truePositives;
    if (tp + report.falseNegatives > 0)
        report.recall = static_cast<double>(tp) / (tp + report.falseNegatives);
    if (tp + report.falsePositives > 0)
        report.precision = static_cast<double>(tp) / (tp + report.falsePositives);
    if (2 * tp + report.falsePositives + report.falseNegatives > 0)
        report.fMeasure = static_cast<double>(2 * tp) /
                          (2 * tp + report.falsePositives + report.falseNegatives);
    if (!rows.empty()) report.averageCoverRate = coverSum / rows.size();
    return report;
}

std::string pointLevelCsv(const std::vector<LeafMatch>& rows) {
    std::string out = "leaf,num_gt,rp,mp,fp,num_blue,cover_rate\n";
    char buf[160];
    for (const LeafMatch& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%d,%d,%d,%d,%.1f\n", row.gtLabel + 1,
                      row.numGt, row.resultPoints, row.missing, row.falsePoints, row.numBlue,
                      100.0 * row.coverRate);
        out += buf;
    }
    return out;
}

std::string pointLevelTable(const std::vector<LeafMatch>& rows) {
    std::string out =
        "leaf   Num_gt       Rp       Mp       Fp Num_blue Cover_rate\n";
    char buf[160];
    for (const LeafMatch& row : rows) {
        std::snprintf(buf, sizeof(buf), "%4d %8d %8d %8d %8d %8d %9.1f%%\n", row.gtLabel + 1,
                      row.numGt, row.resultPoints, row.missing, row.falsePoints, row.numBlue,
                      100.0 * row.coverRate);
        out += buf;
    }
    return out;
}

std::string leafLevelSummary(const LeafLevelReport& report) {
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "TP %d  Reference %d  FP %d  FN %d  Recall %.2f%%  Precision %.2f%%  "
                  "F-Measure %.2f%%  Average cover rate %.2f%%\n",
                  report.truePositives, report.referenceLeafCount, report.falsePositives,
                  report.falseNegatives, 100.0 * report.recall, 100.0 * report.precision,
                  100.0 * report.fMeasure, 100.0 * report.averageCoverRate);
    return buf;
}

}  // namespace leafsep
