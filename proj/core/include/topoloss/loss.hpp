#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "topoloss/geometry.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/rips.hpp"

namespace topoloss {

/// Per-pixel posterior probabilities in [0, 1], row-major.
class ProbabilityMap {
public:
    ProbabilityMap(std::size_t width, std::size_t height, std::vector<double> probs);

    static ProbabilityMap from_mask(const BinaryMask& mask);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return probs_.size(); }
    double at(std::size_t x, std::size_t y) const { return probs_[y * width_ + x]; }
    std::span<const double> probs() const noexcept { return probs_; }

    /// Pixels with probability >= threshold become foreground.
    BinaryMask threshold(double threshold) const;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<double> probs_;
};

enum class Branch { GreatVessel, AortaOnly, Empty };

std::string_view to_string(Branch branch) noexcept;

struct LossConfig {
    double alpha_gv = 5.0e-6;
    double beta_gv = 0.0;
    double alpha_ao = 0.0;
    double beta_ao = 1.0e-4;
    double prob_threshold = 0.5;
    std::size_t gv_area_threshold = 1500;
    double clip_epsilon = 1e-7;
    double wasserstein_q = 2.0;
    GroundMetric metric = GroundMetric::LInf;
    RipsConfig rips;

    void validate() const;
};

struct TopoWeight {
    double omega = 1.0;
    double d0 = 0.0;
    double d1 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    Branch branch = Branch::Empty;
};

/// Summed binary cross-entropy with predictions clamped to [eps, 1 - eps].
double cross_entropy(const BinaryMask& gt, const ProbabilityMap& pred, double clip_epsilon = 1e-7);

/// d CE / d p_hat per pixel; zero where the prediction is clamped.
std::vector<double> cross_entropy_gradient(const BinaryMask& gt, const ProbabilityMap& pred,
                                           double clip_epsilon = 1e-7);

/// GreatVessel if any 8-connected component is smaller than gv_area_threshold,
/// AortaOnly if only larger components exist, Empty for a blank mask.
Branch classify_branch(const BinaryMask& gt, const LossConfig& config = {});

/// omega = 1 + alpha * d0 + beta * d1 with (alpha, beta) picked by branch.
TopoWeight weight_from_distances(Branch branch, double d0, double d1, const LossConfig& config = {});

/// Diagram of a mask's contour in the given degree; a blank mask yields an empty diagram.
PersistenceDiagram mask_diagram(const BinaryMask& mask, int degree, const RipsConfig& config = {});

TopoWeight topo_weight(const BinaryMask& gt, const BinaryMask& pred_mask, const LossConfig& config = {});
TopoWeight topo_weight(const BinaryMask& gt, const ProbabilityMap& pred, const LossConfig& config = {});

struct ImageLoss {
    double omega = 1.0;
    double ce = 0.0;
};

struct LossResult {
    double total = 0.0;
    std::vector<ImageLoss> per_image;
};

using LossSample = std::pair<BinaryMask, ProbabilityMap>;

/// Sum of omega_I * CE_I. During warm-up every omega_I is 1. Weights are plain
/// scalars: they carry no gradient with respect to the prediction.
LossResult topology_aware_loss(std::span<const LossSample> batch, const LossConfig& config,
                               bool warmup_active);

/// Same aggregate with externally supplied weights (one per sample).
LossResult weighted_loss(std::span<const LossSample> batch, std::span<const double> omegas,
                         const LossConfig& config);

}  // namespace topoloss
