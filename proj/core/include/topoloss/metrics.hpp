#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "topoloss/geometry.hpp"

namespace topoloss {

struct PixelMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;
    /// False when the ground truth is empty: recall is undefined and the image is
    /// left out of averages.
    bool defined = true;
};

double fscore(double precision, double recall) noexcept;

PixelMetrics pixel_metrics(const BinaryMask& gt, const BinaryMask& pred_mask);

struct PixelAverage {
    PixelMetrics mean;
    std::size_t images_included = 0;
    std::size_t images_excluded = 0;
};

/// Per-image metrics averaged over the images whose metrics are defined.
PixelAverage average_pixel_metrics(std::span<const PixelMetrics> per_image);

struct VesselMatch {
    std::uint32_t gt_id = 0;
    std::optional<std::uint32_t> pred_id;  // empty when no predicted object overlaps
    std::size_t intersection = 0;
    double iou = 0.0;
    bool is_tp = false;
};

struct VesselMatchReport {
    std::vector<VesselMatch> matches;
    std::size_t tp = 0;
    std::size_t gt_count = 0;
    std::size_t pred_count = 0;
    /// Predicted objects chosen as best match by more than one ground-truth vessel.
    std::size_t shared_predictions = 0;
};

VesselMatchReport vessel_metrics(const BinaryMask& gt, const BinaryMask& pred_mask);

/// Vessel counts accumulated over a test set before taking ratios.
struct VesselTotals {
    std::size_t tp = 0;
    std::size_t gt_count = 0;
    std::size_t pred_count = 0;

    void add(const VesselMatchReport& report) noexcept;
    double precision() const noexcept;
    double recall() const noexcept;
    double fscore() const noexcept;
};

struct VesselHausdorff {
    std::uint32_t gt_id = 0;
    std::uint32_t pred_id = 0;
    std::size_t area = 0;
    double distance = 0.0;
    bool overlapping = true;  // false when the closest object was used instead
};

struct HausdorffReport {
    /// Empty when the prediction has no objects (distance undefined).
    std::optional<double> weighted;
    std::vector<VesselHausdorff> per_vessel;
};

/// Area-weighted mean of per-vessel Hausdorff distances between each ground-truth
/// vessel and its maximally overlapping (else closest) predicted object, measured
/// between object contours.
HausdorffReport hausdorff_report(const BinaryMask& gt, const BinaryMask& pred_mask);
std::optional<double> weighted_hausdorff(const BinaryMask& gt, const BinaryMask& pred_mask);

struct AreaDistance {
    std::size_t area = 0;
    double distance = 0.0;
};

/// Sum of (area / total area) * distance. Throws InvalidArgument when empty or zero-area.
double area_weighted_mean(std::span<const AreaDistance> items);

}  // namespace topoloss
