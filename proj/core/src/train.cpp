#include "topoloss/train.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "topoloss/error.hpp"

namespace topoloss {

namespace {

using Stencil = std::array<double, LogisticSegmenter::kStencil>;

void gather(const ProbabilityMap& image, std::size_t x, std::size_t y, Stencil& out) {
    constexpr int r = LogisticSegmenter::kRadius;
    const auto w = static_cast<std::ptrdiff_t>(image.width());
    const auto h = static_cast<std::ptrdiff_t>(image.height());
    std::size_t k = 0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
            const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
            const bool inside = nx >= 0 && ny >= 0 && nx < w && ny < h;
            out[k++] = inside ? image.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) : 0.0;
        }
    }
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace

LogisticSegmenter::LogisticSegmenter(std::vector<double> params) : params_(std::move(params)) {
    if (params_.size() != kParameters) {
        throw InvalidArgument("logistic segmenter expects " + std::to_string(kParameters) + " parameters");
    }
}

ProbabilityMap LogisticSegmenter::predict(const ProbabilityMap& image) const {
    std::vector<double> probs(image.size());
    Stencil s;
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            gather(image, x, y, s);
            double z = params_[kStencil];
            for (std::size_t k = 0; k < kStencil; ++k) z += params_[k] * s[k];
            probs[y * image.width() + x] = sigmoid(z);
        }
    }
    return ProbabilityMap(image.width(), image.height(), std::move(probs));
}

std::vector<double> LogisticSegmenter::gradient(const ProbabilityMap& image, const BinaryMask& gt,
                                                double omega, double clip_epsilon) const {
    const ProbabilityMap pred = predict(image);
    const std::vector<double> dce = cross_entropy_gradient(gt, pred, clip_epsilon);
    std::vector<double> grad(kParameters, 0.0);
    Stencil s;
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            const std::size_t i = y * image.width() + x;
            if (dce[i] == 0.0) continue;
            const double p = pred.probs()[i];
            const double dz = omega * dce[i] * p * (1.0 - p);
            gather(image, x, y, s);
            for (std::size_t k = 0; k < kStencil; ++k) grad[k] += dz * s[k];
            grad[kStencil] += dz;
        }
    }
    return grad;
}

std::string_view to_string(LossMode mode) noexcept {
    return mode == LossMode::Topo ? "TOPO" : "CE_ONLY";
}

std::string_view to_string(WeightRefresh refresh) noexcept {
    return refresh == WeightRefresh::PerForward ? "per-forward" : "per-epoch";
}

LossMode parse_loss_mode(std::string_view name) {
    if (name == "TOPO" || name == "topo") return LossMode::Topo;
    if (name == "CE_ONLY" || name == "ce") return LossMode::CeOnly;
    throw InvalidArgument("unknown loss mode '" + std::string(name) + "' (expected ce or topo)");
}

WeightRefresh parse_weight_refresh(std::string_view name) {
    if (name == "per-epoch" || name == "epoch") return WeightRefresh::PerEpoch;
    if (name == "per-forward" || name == "forward") return WeightRefresh::PerForward;
    throw InvalidArgument("unknown weight refresh '" + std::string(name) + "'");
}

void ToyTrainConfig::validate() const {
    if (epochs == 0) throw InvalidArgument("epochs must be positive");
    if (warmup_epochs >= epochs) throw InvalidArgument("warmup_epochs must be smaller than epochs");
    if (patience < 1) throw InvalidArgument("patience must be at least 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw InvalidArgument("learning_rate must be positive");
    }
    if (batch_size < 1) throw InvalidArgument("batch_size must be at least 1");
    loss.validate();
}

DatasetSplit split_dataset(std::vector<Scene> scenes, std::size_t train, std::size_t val) {
    if (train + val > scenes.size()) throw InvalidArgument("split sizes exceed the dataset");
    DatasetSplit split;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        auto& dest = i < train ? split.train : i < train + val ? split.val : split.test;
        dest.push_back(std::move(scenes[i]));
    }
    return split;
}

SplitMetrics evaluate_split(const LogisticSegmenter& model, const std::vector<Scene>& scenes,
                            double prob_threshold) {
    SplitMetrics out;
    std::vector<PixelMetrics> pixel;
    double hsum = 0.0;
    for (const auto& scene : scenes) {
        const BinaryMask pred = model.predict(scene.image).threshold(prob_threshold);
        pixel.push_back(pixel_metrics(scene.gt, pred));
        out.vessel.add(vessel_metrics(scene.gt, pred));
        if (const auto h = weighted_hausdorff(scene.gt, pred)) {
            hsum += *h;
            ++out.hausdorff_defined;
        } else {
            ++out.hausdorff_undefined;
        }
    }
    out.pixel = average_pixel_metrics(pixel);
    out.mean_hausdorff = out.hausdorff_defined ? hsum / static_cast<double>(out.hausdorff_defined) : 0.0;
    return out;
}

TrainReport toy_train(const DatasetSplit& data, LossMode mode, const ToyTrainConfig& config) {
    config.validate();
    if (data.train.empty()) throw InvalidArgument("training split is empty");
    if (data.val.empty()) throw InvalidArgument("validation split is empty");

    const LossConfig& lc = config.loss;
    LogisticSegmenter model;
    TrainReport report;
    report.mode = mode;
    report.best_val_loss = kInfinity;
    report.parameters = model.parameters();

    auto omega_for = [&](const Scene& scene) {
        return topo_weight(scene.gt, model.predict(scene.image), lc).omega;
    };

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        EpochLog log;
        log.epoch = epoch;
        const bool topo_active = mode == LossMode::Topo && epoch >= config.warmup_epochs;
        log.warmup = mode == LossMode::Topo && !topo_active;

        std::vector<double> omegas(data.train.size(), 1.0);
        if (topo_active && config.weight_refresh == WeightRefresh::PerEpoch) {
            for (std::size_t i = 0; i < data.train.size(); ++i) omegas[i] = omega_for(data.train[i]);
        }

        std::vector<double> accum(LogisticSegmenter::kParameters, 0.0);
        std::size_t in_batch = 0;
        for (std::size_t i = 0; i < data.train.size(); ++i) {
            const Scene& scene = data.train[i];
            if (topo_active && config.weight_refresh == WeightRefresh::PerForward) {
                omegas[i] = omega_for(scene);
            }
            const double ce = cross_entropy(scene.gt, model.predict(scene.image), lc.clip_epsilon);
            log.train_loss += omegas[i] * ce;
            const std::vector<double> g = model.gradient(scene.image, scene.gt, omegas[i], lc.clip_epsilon);
            for (std::size_t k = 0; k < g.size(); ++k) accum[k] += g[k];
            if (++in_batch == config.batch_size || i + 1 == data.train.size()) {
                auto& params = model.parameters();
                for (std::size_t k = 0; k < params.size(); ++k) {
                    params[k] -= config.learning_rate * accum[k];
                    if (!std::isfinite(params[k])) {
                        throw TrainingError("training diverged at epoch " + std::to_string(epoch) +
                                            ": parameter " + std::to_string(k) + " is not finite (learning rate " +
                                            std::to_string(config.learning_rate) + ")");
                    }
                }
                std::fill(accum.begin(), accum.end(), 0.0);
                in_batch = 0;
            }
        }

        for (const auto& scene : data.val) {
            log.val_loss += cross_entropy(scene.gt, model.predict(scene.image), lc.clip_epsilon);
        }
        log.val_loss /= static_cast<double>(data.val.size());
        log.omegas = std::move(omegas);

        if (!std::isfinite(log.train_loss) || !std::isfinite(log.val_loss)) {
            throw TrainingError("training diverged at epoch " + std::to_string(epoch) +
                                ": train loss " + std::to_string(log.train_loss) + ", val loss " +
                                std::to_string(log.val_loss) + " (learning rate " +
                                std::to_string(config.learning_rate) + ")");
        }

        if (log.val_loss < report.best_val_loss) {
            report.best_val_loss = log.val_loss;
            report.best_epoch = epoch;
            report.parameters = model.parameters();
        }
        if (epoch + 1 == config.warmup_epochs) report.parameters_after_warmup = model.parameters();
        report.epochs.push_back(std::move(log));

        if (epoch - report.best_epoch >= config.patience) {
            report.stopped_early = epoch + 1 < config.epochs;
            break;
        }
    }

    const LogisticSegmenter best(report.parameters);
    report.train = evaluate_split(best, data.train, lc.prob_threshold);
    report.val = evaluate_split(best, data.val, lc.prob_threshold);
    report.test = evaluate_split(best, data.test, lc.prob_threshold);
    return report;
}

}  // namespace topoloss
