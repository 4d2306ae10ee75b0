#pragma once

#include <optional>
#include <string>
#include <vector>

#include "leafsep/point_cloud.hpp"

namespace leafsep {

/// Point-level accounting of one ground-truth leaf against its matched
/// segmentation region. numGt = numBlue + missing and resultPoints =
/// numBlue + falsePoints hold exactly.
struct LeafMatch {
    std::int32_t gtLabel = 0;
    std::optional<std::int32_t> segLabel;
    int numGt = 0;         // ground-truth points of this leaf
    int resultPoints = 0;  // Rp: size of the matched region
    int missing = 0;       // Mp: leaf points outside the region
    int falsePoints = 0;   // Fp: region points outside the leaf
    int numBlue = 0;       // correctly covered points
    double coverRate = 0.0;
};

struct LeafLevelReport {
    int truePositives = 0;
    int falsePositives = 0;
    int falseNegatives = 0;
    int referenceLeafCount = 0;
    double recall = 0.0;
    double precision = 0.0;
    double fMeasure = 0.0;
    double averageCoverRate = 0.0;
};

/// gtLabel -> segLabel with maximum point overlap (ties to the lower seg
/// label). A region may match several ground-truth leaves. Negative seg
/// labels are treated as unlabeled. Throws IndexMismatch if the two maps
/// cover different index sets.
std::vector<std::optional<std::int32_t>> matchRegions(const Segmentation& seg,
                                                      const Segmentation& gt);

/// Per-leaf point-level measures under a fixed matching.
std::vector<LeafMatch> pointLevel(const Segmentation& seg, const Segmentation& gt,
                                  const std::vector<std::optional<std::int32_t>>& matching);

/// Leaf-level counts and metrics. A leaf is a true positive when its
/// matched region covers more than tpThreshold of it; a region covering
/// k leaves that way contributes k-1 false positives; a leaf covered at
/// most 1-tpThreshold by every single region is a false negative.
LeafLevelReport leafLevel(const Segmentation& seg, const Segmentation& gt,
                          const std::vector<std::optional<std::int32_t>>& matching,
                          double tpThreshold = 0.70);

/// Per-leaf table in the column order: leaf, Num_gt, Rp, Mp, Fp,
/// Num_blue, Cover_rate.
std::string pointLevelCsv(const std::vector<LeafMatch>& rows);
std::string pointLevelTable(const std::vector<LeafMatch>& rows);
std::string leafLevelSummary(const LeafLevelReport& report);

}  // namespace leafsep
