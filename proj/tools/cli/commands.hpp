#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "topoloss/loss.hpp"
#include "topoloss/train.hpp"

namespace topoloss::cli {

/// Thrown for bad flag combinations detected after parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContoursOptions {
    std::string input;
    std::string output;
};

struct PersistenceOptions {
    std::string input;
    std::string output;
    std::optional<int> degree;
    RipsConfig rips;
    std::optional<double> edge_cap;
};

struct DistanceOptions {
    std::string a;
    std::string b;
    std::optional<int> degree;
    double q = 2.0;
    std::string metric = "linf";
    bool bottleneck = false;
    std::string output;
};

struct WeightOptions {
    std::string gt;
    std::string pred;
    LossConfig loss;
    std::string output;
};

struct EvaluateOptions {
    std::string gt_dir;
    std::string pred_dir;
    double threshold = 0.5;
    std::string output;
};

struct ToyTrainOptions {
    std::string scenario = "mixed";
    std::size_t count = 60;
    std::size_t train = 40;
    std::size_t val = 10;
    std::uint64_t seed = 1234;
    double noise = 0.3;
    std::size_t width = 64;
    std::size_t height = 64;
    std::string mode = "topo";
    std::string refresh = "per-epoch";
    ToyTrainConfig config;
    std::string output;
    std::string epoch_csv;
};

void run_contours(const ContoursOptions& opt);
void run_persistence(const PersistenceOptions& opt);
void run_distance(const DistanceOptions& opt);
void run_weight(const WeightOptions& opt);
void run_evaluate(const EvaluateOptions& opt);
void run_toytrain(const ToyTrainOptions& opt);

}  // namespace topoloss::cli
