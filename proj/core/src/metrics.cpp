#include "topoloss/metrics.hpp"

#include <limits>
#include <map>

#include "topoloss/error.hpp"

namespace topoloss {

namespace {

void check_dimensions(const BinaryMask& gt, const BinaryMask& pred) {
    if (gt.width() != pred.width() || gt.height() != pred.height()) {
        throw InvalidArgument("dimension mismatch between ground truth and prediction masks");
    }
}

double ratio(std::size_t num, std::size_t den) noexcept {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// Contour of every component, indexed by component id (index 0 unused).
std::vector<PointCloud> component_contours(const ComponentLabeling& lab) {
    std::vector<std::vector<Point2>> points(lab.component_count + 1);
    const std::size_t w = lab.width;
    const std::size_t h = lab.height;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint32_t id = lab.labels[y * w + x];
            if (id == 0) continue;
            const bool boundary = x == 0 || y == 0 || x + 1 == w || y + 1 == h ||
                                  lab.labels[y * w + x - 1] != id ||
                                  lab.labels[y * w + x + 1] != id ||
                                  lab.labels[(y - 1) * w + x] != id ||
                                  lab.labels[(y + 1) * w + x] != id;
            if (boundary) points[id].push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    }
    std::vector<PointCloud> out;
    out.reserve(points.size());
    for (auto& p : points) out.emplace_back(std::move(p));
    return out;
}

struct Overlap {
    ComponentLabeling gt;
    ComponentLabeling pred;
    // intersections[g][p] for every gt component g that touches prediction component p
    std::vector<std::map<std::uint32_t, std::size_t>> intersections;

    Overlap(const BinaryMask& gt_mask, const BinaryMask& pred_mask)
        : gt(label_components(gt_mask)), pred(label_components(pred_mask)),
          intersections(gt.component_count + 1) {
        for (std::size_t i = 0; i < gt.labels.size(); ++i) {
            if (gt.labels[i] != 0 && pred.labels[i] != 0) ++intersections[gt.labels[i]][pred.labels[i]];
        }
    }

    double iou(std::uint32_t g, std::uint32_t p, std::size_t inter) const {
        const std::size_t uni = gt.component_areas[g] + pred.component_areas[p] - inter;
        return ratio(inter, uni);
    }

    /// Maximal intersection; ties go to the larger IoU, then to the lower id.
    std::optional<std::pair<std::uint32_t, std::size_t>> best_match(std::uint32_t g) const {
        std::optional<std::pair<std::uint32_t, std::size_t>> best;
        double best_iou = -1.0;
        for (const auto& [p, inter] : intersections[g]) {  // ascending id
            const double cur_iou = iou(g, p, inter);
            if (!best || inter > best->second || (inter == best->second && cur_iou > best_iou)) {
                best = std::pair{p, inter};
                best_iou = cur_iou;
            }
        }
        return best;
    }
};

}  // namespace

double fscore(double precision, double recall) noexcept {
    const double den = precision + recall;
    return den > 0.0 ? 2.0 * precision * recall / den : 0.0;
}

PixelMetrics pixel_metrics(const BinaryMask& gt, const BinaryMask& pred_mask) {
    check_dimensions(gt, pred_mask);
    std::size_t tp = 0, fp = 0, fn = 0;
    const auto g = gt.data();
    const auto p = pred_mask.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] && p[i]) ++tp;
        else if (p[i]) ++fp;
        else if (g[i]) ++fn;
    }
    PixelMetrics m;
    m.precision = ratio(tp, tp + fp);
    m.recall = ratio(tp, tp + fn);
    m.defined = tp + fn > 0;
    m.fscore = fscore(m.precision, m.recall);
    return m;
}

PixelAverage average_pixel_metrics(std::span<const PixelMetrics> per_image) {
    PixelAverage avg;
    for (const auto& m : per_image) {
        if (!m.defined) {
            ++avg.images_excluded;
            continue;
        }
        ++avg.images_included;
        avg.mean.precision += m.precision;
        avg.mean.recall += m.recall;
        avg.mean.fscore += m.fscore;
    }
    if (avg.images_included > 0) {
        const auto n = static_cast<double>(avg.images_included);
        avg.mean.precision /= n;
        avg.mean.recall /= n;
        avg.mean.fscore /= n;
    } else {
        avg.mean.defined = false;
    }
    return avg;
}

VesselMatchReport vessel_metrics(const BinaryMask& gt, const BinaryMask& pred_mask) {
    check_dimensions(gt, pred_mask);
    const Overlap overlap(gt, pred_mask);

    VesselMatchReport report;
    report.gt_count = overlap.gt.component_count;
    report.pred_count = overlap.pred.component_count;
    std::map<std::uint32_t, std::size_t> times_chosen;
    for (std::uint32_t g = 1; g <= overlap.gt.component_count; ++g) {
        VesselMatch match;
        match.gt_id = g;
        if (const auto best = overlap.best_match(g)) {
            match.pred_id = best->first;
            match.intersection = best->second;
            match.iou = overlap.iou(g, best->first, best->second);
            match.is_tp = match.iou > 0.5;
            ++times_chosen[best->first];
        }
        report.tp += match.is_tp ? 1 : 0;
        report.matches.push_back(match);
    }
    for (const auto& [p, n] : times_chosen) report.shared_predictions += n > 1 ? 1 : 0;
    return report;
}

void VesselTotals::add(const VesselMatchReport& report) noexcept {
    tp += report.tp;
    gt_count += report.gt_count;
    pred_count += report.pred_count;
}

double VesselTotals::precision() const noexcept { return ratio(tp, pred_count); }
double VesselTotals::recall() const noexcept { return ratio(tp, gt_count); }
double VesselTotals::fscore() const noexcept { return topoloss::fscore(precision(), recall()); }

double area_weighted_mean(std::span<const AreaDistance> items) {
    std::size_t total = 0;
    for (const auto& it : items) total += it.area;
    if (total == 0) throw InvalidArgument("area-weighted mean needs a positive total area");
    double sum = 0.0;
    for (const auto& it : items) {
        sum += static_cast<double>(it.area) / static_cast<double>(total) * it.distance;
    }
    return sum;
}

HausdorffReport hausdorff_report(const BinaryMask& gt, const BinaryMask& pred_mask) {
    check_dimensions(gt, pred_mask);
    const Overlap overlap(gt, pred_mask);
    HausdorffReport report;
    if (overlap.gt.component_count == 0 || overlap.pred.component_count == 0) return report;

    const std::vector<PointCloud> gt_contours = component_contours(overlap.gt);
    const std::vector<PointCloud> pred_contours = component_contours(overlap.pred);

    std::vector<AreaDistance> items;
    for (std::uint32_t g = 1; g <= overlap.gt.component_count; ++g) {
        VesselHausdorff vh;
        vh.gt_id = g;
        vh.area = overlap.gt.component_areas[g];
        if (const auto best = overlap.best_match(g)) {
            vh.pred_id = best->first;
        } else {
            vh.overlapping = false;
            double closest = std::numeric_limits<double>::infinity();
            for (std::uint32_t p = 1; p <= overlap.pred.component_count; ++p) {
                const double d = min_distance(gt_contours[g], pred_contours[p]);
                if (d < closest) {
                    closest = d;
                    vh.pred_id = p;
                }
            }
        }
        vh.distance = hausdorff(gt_contours[g], pred_contours[vh.pred_id]);
        items.push_back({vh.area, vh.distance});
        report.per_vessel.push_back(vh);
    }
    report.weighted = area_weighted_mean(items);
    return report;
}

std::optional<double> weighted_hausdorff(const BinaryMask& gt, const BinaryMask& pred_mask) {
    return hausdorff_report(gt, pred_mask).weighted;
}

}  // namespace topoloss
