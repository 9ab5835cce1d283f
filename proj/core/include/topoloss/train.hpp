#pragma once

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "topoloss/loss.hpp"
#include "topoloss/metrics.hpp"
#include "topoloss/synth.hpp"

namespace topoloss {

/// Per-pixel logistic classifier over a 5x5 intensity stencil (zero padded).
/// Parameter layout: 25 stencil weights in row-major stencil order, then the bias.
class LogisticSegmenter {
public:
    static constexpr int kRadius = 2;
    static constexpr std::size_t kStencil = (2 * kRadius + 1) * (2 * kRadius + 1);
    static constexpr std::size_t kParameters = kStencil + 1;

    LogisticSegmenter() : params_(kParameters, 0.0) {}
    explicit LogisticSegmenter(std::vector<double> params);

    ProbabilityMap predict(const ProbabilityMap& image) const;

    /// Gradient of omega * CE(gt, predict(image)) with respect to the parameters.
    std::vector<double> gradient(const ProbabilityMap& image, const BinaryMask& gt, double omega,
                                 double clip_epsilon) const;

    const std::vector<double>& parameters() const noexcept { return params_; }
    std::vector<double>& parameters() noexcept { return params_; }

private:
    std::vector<double> params_;
};

enum class LossMode { CeOnly, Topo };
enum class WeightRefresh { PerEpoch, PerForward };

std::string_view to_string(LossMode mode) noexcept;
std::string_view to_string(WeightRefresh refresh) noexcept;
LossMode parse_loss_mode(std::string_view name);
WeightRefresh parse_weight_refresh(std::string_view name);

struct ToyTrainConfig {
    std::size_t epochs = 200;
    std::size_t warmup_epochs = 25;
    std::size_t patience = 40;
    double learning_rate = 2e-4;
    std::size_t batch_size = 1;
    WeightRefresh weight_refresh = WeightRefresh::PerEpoch;
    LossConfig loss;

    void validate() const;
};

struct DatasetSplit {
    std::vector<Scene> train;
    std::vector<Scene> val;
    std::vector<Scene> test;
};

/// Consecutive split: the first `train` scenes, then `val`, then the rest.
DatasetSplit split_dataset(std::vector<Scene> scenes, std::size_t train, std::size_t val);

struct EpochLog {
    std::size_t epoch = 0;
    bool warmup = false;
    double train_loss = 0.0;  // sum of omega * CE over the epoch's forward passes
    double val_loss = 0.0;    // mean plain CE over validation scenes
    std::vector<double> omegas;
};

struct SplitMetrics {
    PixelAverage pixel;
    VesselTotals vessel;
    double mean_hausdorff = 0.0;
    std::size_t hausdorff_defined = 0;
    std::size_t hausdorff_undefined = 0;
};

struct TrainReport {
    LossMode mode = LossMode::CeOnly;
    std::vector<EpochLog> epochs;
    std::size_t best_epoch = 0;
    double best_val_loss = 0.0;
    bool stopped_early = false;
    /// Parameters at the end of the last warm-up epoch (empty if training ended first).
    std::vector<double> parameters_after_warmup;
    /// Parameters of the best validation epoch; used for the final metrics.
    std::vector<double> parameters;
    SplitMetrics train;
    SplitMetrics val;
    SplitMetrics test;
};

class TrainingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gradient descent with batch-level steps, warm-up (omega = 1), topology weights
/// after warm-up in Topo mode, and early stopping on validation CE.
/// Throws InvalidArgument for empty train/val splits and TrainingError on a NaN loss.
TrainReport toy_train(const DatasetSplit& data, LossMode mode, const ToyTrainConfig& config);

SplitMetrics evaluate_split(const LogisticSegmenter& model, const std::vector<Scene>& scenes,
                            double prob_threshold);

}  // namespace topoloss
