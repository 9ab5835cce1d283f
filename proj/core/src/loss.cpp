#include "topoloss/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "topoloss/error.hpp"

namespace topoloss {

ProbabilityMap::ProbabilityMap(std::size_t width, std::size_t height, std::vector<double> probs)
    : width_(width), height_(height), probs_(std::move(probs)) {
    if (width_ == 0 || height_ == 0) throw InvalidArgument("probability map dimensions must be positive");
    if (probs_.size() != width_ * height_) {
        throw InvalidArgument("probability map length does not match its dimensions");
    }
    for (double p : probs_) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("probabilities must lie in [0, 1]");
    }
}

ProbabilityMap ProbabilityMap::from_mask(const BinaryMask& mask) {
    std::vector<double> probs(mask.data().begin(), mask.data().end());
    return ProbabilityMap(mask.width(), mask.height(), std::move(probs));
}

BinaryMask ProbabilityMap::threshold(double threshold) const {
    std::vector<std::uint8_t> data(probs_.size());
    std::transform(probs_.begin(), probs_.end(), data.begin(),
                   [threshold](double p) { return static_cast<std::uint8_t>(p >= threshold); });
    return BinaryMask(width_, height_, std::move(data));
}

std::string_view to_string(Branch branch) noexcept {
    switch (branch) {
        case Branch::GreatVessel: return "GREAT_VESSEL";
        case Branch::AortaOnly: return "AORTA_ONLY";
        case Branch::Empty: break;
    }
    return "EMPTY";
}

void LossConfig::validate() const {
    for (double c : {alpha_gv, beta_gv, alpha_ao, beta_ao}) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw InvalidArgument("loss coefficients must be finite and non-negative");
        }
    }
    if (!(prob_threshold > 0.0 && prob_threshold < 1.0)) {
        throw InvalidArgument("prob_threshold must lie in (0, 1)");
    }
    if (gv_area_threshold == 0) throw InvalidArgument("gv_area_threshold must be positive");
    if (!(clip_epsilon > 0.0 && clip_epsilon < 0.5)) {
        throw InvalidArgument("clip_epsilon must lie in (0, 0.5)");
    }
    if (!(wasserstein_q > 0.0) || !std::isfinite(wasserstein_q)) {
        throw InvalidArgument("wasserstein_q must be positive");
    }
    rips.validate();
}

namespace {

void check_dimensions(const BinaryMask& gt, std::size_t width, std::size_t height) {
    if (gt.width() != width || gt.height() != height) {
        throw InvalidArgument("dimension mismatch: ground truth is " + std::to_string(gt.width()) +
                              "x" + std::to_string(gt.height()) + ", prediction is " +
                              std::to_string(width) + "x" + std::to_string(height));
    }
}

}  // namespace

double cross_entropy(const BinaryMask& gt, const ProbabilityMap& pred, double clip_epsilon) {
    check_dimensions(gt, pred.width(), pred.height());
    const auto labels = gt.data();
    const auto probs = pred.probs();
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], clip_epsilon, 1.0 - clip_epsilon);
        sum -= labels[i] ? std::log(p) : std::log1p(-p);
    }
    return sum;
}

std::vector<double> cross_entropy_gradient(const BinaryMask& gt, const ProbabilityMap& pred,
                                           double clip_epsilon) {
    check_dimensions(gt, pred.width(), pred.height());
    const auto labels = gt.data();
    const auto probs = pred.probs();
    std::vector<double> grad(probs.size(), 0.0);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (p < clip_epsilon || p > 1.0 - clip_epsilon) continue;
        grad[i] = labels[i] ? -1.0 / p : 1.0 / (1.0 - p);
    }
    return grad;
}

Branch classify_branch(const BinaryMask& gt, const LossConfig& config) {
    const ComponentLabeling labeling = label_components(gt, Connectivity::Eight);
    if (labeling.component_count == 0) return Branch::Empty;
    for (std::size_t id = 1; id <= labeling.component_count; ++id) {
        if (labeling.component_areas[id] < config.gv_area_threshold) return Branch::GreatVessel;
    }
    return Branch::AortaOnly;
}

TopoWeight weight_from_distances(Branch branch, double d0, double d1, const LossConfig& config) {
    TopoWeight w;
    w.branch = branch;
    w.d0 = d0;
    w.d1 = d1;
    switch (branch) {
        case Branch::GreatVessel:
            w.alpha = config.alpha_gv;
            w.beta = config.beta_gv;
            break;
        case Branch::AortaOnly:
            w.alpha = config.alpha_ao;
            w.beta = config.beta_ao;
            break;
        case Branch::Empty:
            break;
    }
    w.omega = 1.0 + w.alpha * w.d0 + w.beta * w.d1;
    return w;
}

PersistenceDiagram mask_diagram(const BinaryMask& mask, int degree, const RipsConfig& config) {
    const PointCloud contour = extract_contour(mask);
    if (contour.empty()) return PersistenceDiagram(degree, {});
    return rips_diagram(contour, degree, config);
}

TopoWeight topo_weight(const BinaryMask& gt, const BinaryMask& pred_mask, const LossConfig& config) {
    config.validate();
    check_dimensions(gt, pred_mask.width(), pred_mask.height());

    const Branch branch = classify_branch(gt, config);
    if (branch == Branch::Empty) return weight_from_distances(branch, 0.0, 0.0, config);

    const TopoWeight coefficients = weight_from_distances(branch, 0.0, 0.0, config);
    const PointCloud gt_contour = extract_contour(gt);
    const PointCloud pred_contour = extract_contour(pred_mask);

    // Essential classes are dropped so a blank prediction compares as an empty diagram.
    auto distance = [&](int degree) {
        const PersistenceDiagram g = rips_diagram(gt_contour, degree, config.rips).finite_part();
        const PersistenceDiagram p =
            pred_contour.empty() ? PersistenceDiagram(degree, {})
                                 : rips_diagram(pred_contour, degree, config.rips).finite_part();
        return wasserstein(g, p, config.wasserstein_q, config.metric).value;
    };

    const double d0 = coefficients.alpha > 0.0 ? distance(0) : 0.0;
    const double d1 = coefficients.beta > 0.0 ? distance(1) : 0.0;
    return weight_from_distances(branch, d0, d1, config);
}

TopoWeight topo_weight(const BinaryMask& gt, const ProbabilityMap& pred, const LossConfig& config) {
    check_dimensions(gt, pred.width(), pred.height());
    return topo_weight(gt, pred.threshold(config.prob_threshold), config);
}

LossResult weighted_loss(std::span<const LossSample> batch, std::span<const double> omegas,
                         const LossConfig& config) {
    if (omegas.size() != batch.size()) throw InvalidArgument("one weight per sample is required");
    LossResult result;
    result.per_image.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double ce = cross_entropy(batch[i].first, batch[i].second, config.clip_epsilon);
        result.per_image.push_back({omegas[i], ce});
        result.total += omegas[i] * ce;
    }
    return result;
}

LossResult topology_aware_loss(std::span<const LossSample> batch, const LossConfig& config,
                               bool warmup_active) {
    std::vector<double> omegas(batch.size(), 1.0);
    if (!warmup_active) {
        for (std::size_t i = 0; i < batch.size(); ++i) {
            omegas[i] = topo_weight(batch[i].first, batch[i].second, config).omega;
        }
    }
    return weighted_loss(batch, omegas, config);
}

}  // namespace topoloss
