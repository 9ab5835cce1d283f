#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "topoloss/error.hpp"
#include "topoloss/synth.hpp"
#include "topoloss/train.hpp"

using namespace topoloss;

TEST_CASE("noise-free scenes threshold back to the ground truth") {
    for (auto scenario : {Scenario::AortaOnly, Scenario::GreatVessels, Scenario::Mixed}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto scene = generate_scene({64, 64, scenario, seed, 0.0});
            CHECK(scene.image.threshold(0.5) == scene.gt);
        }
    }
}

TEST_CASE("generation is deterministic") {
    const SceneSpec spec{64, 64, Scenario::Mixed, 42, 0.3};
    const auto a = generate_scene(spec);
    const auto b = generate_scene(spec);
    CHECK(a.gt == b.gt);
    CHECK(std::equal(a.image.probs().begin(), a.image.probs().end(), b.image.probs().begin()));
}

TEST_CASE("scenario shapes") {
    const LossConfig cfg;
    SUBCASE("great vessels, seed 7") {
        const auto scene = generate_scene({64, 64, Scenario::GreatVessels, 7, 0.0});
        const auto lab = label_components(scene.gt);
        CHECK(lab.component_count >= 2);
        CHECK(lab.component_count <= 5);
        for (std::size_t id = 1; id <= lab.component_count; ++id) CHECK(lab.component_areas[id] < 1500);
    }
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto aorta = generate_scene({64, 64, Scenario::AortaOnly, seed, 0.0});
        const auto lab = label_components(aorta.gt);
        CHECK(lab.component_count == 1);
        CHECK(lab.component_areas[1] >= 1500);
        CHECK(classify_branch(aorta.gt, cfg) == Branch::AortaOnly);

        const auto mixed = generate_scene({64, 64, Scenario::Mixed, seed, 0.0});
        const auto ml = label_components(mixed.gt);
        CHECK(ml.component_count >= 3);
        CHECK(ml.component_count <= 6);
        CHECK(ml.component_areas[1] >= 1500);
        CHECK(classify_branch(mixed.gt, cfg) == Branch::GreatVessel);

        const auto gv = generate_scene({64, 64, Scenario::GreatVessels, seed, 0.0});
        const auto gl = label_components(gv.gt);
        CHECK(gl.component_count >= 2);
        CHECK(gl.component_count <= 5);
    }
    CHECK_THROWS_AS(generate_scene({64, 64, Scenario::Mixed, 1, 1.5}), InvalidArgument);
}

TEST_CASE("LogisticSegmenter gradient matches finite differences") {
    const auto scene = generate_scene({24, 24, Scenario::GreatVessels, 3, 0.2});
    std::vector<double> params(LogisticSegmenter::kParameters);
    for (std::size_t k = 0; k < params.size(); ++k) params[k] = 0.05 * static_cast<double>(k % 7) - 0.1;
    const LogisticSegmenter model(params);
    const double omega = 1.7;
    const auto grad = model.gradient(scene.image, scene.gt, omega, 1e-7);
    for (std::size_t k = 0; k < params.size(); ++k) {
        auto plus = params, minus = params;
        const double h = 1e-6;
        plus[k] += h;
        minus[k] -= h;
        const double fp = omega * cross_entropy(scene.gt, LogisticSegmenter(plus).predict(scene.image));
        const double fm = omega * cross_entropy(scene.gt, LogisticSegmenter(minus).predict(scene.image));
        const double fd = (fp - fm) / (2 * h);
        CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("config validation and empty splits") {
    ToyTrainConfig cfg;
    cfg.warmup_epochs = cfg.epochs;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.patience = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    DatasetSplit empty;
    CHECK_THROWS_AS(toy_train(empty, LossMode::CeOnly, ToyTrainConfig{}), InvalidArgument);
    CHECK(parse_loss_mode("topo") == LossMode::Topo);
    CHECK_THROWS_AS(parse_loss_mode("dice"), InvalidArgument);
}

TEST_CASE("divergence is reported") {
    auto split = split_dataset(generate_dataset(3, Scenario::GreatVessels, 1, 0.3), 2, 1);
    ToyTrainConfig cfg;
    cfg.epochs = 30;
    cfg.learning_rate = std::numeric_limits<double>::max();
    CHECK_THROWS_AS(toy_train(split, LossMode::CeOnly, cfg), TrainingError);
}

TEST_CASE("CE-only training on noise-free scenes separates perfectly") {
    auto split = split_dataset(generate_dataset(6, Scenario::Mixed, 100, 0.0), 4, 2);
    ToyTrainConfig cfg;
    const auto report = toy_train(split, LossMode::CeOnly, cfg);
    CHECK(report.train.pixel.mean.fscore == 1.0);
    CHECK(report.epochs.size() <= cfg.epochs);
}

TEST_CASE("CE-only loss on a fixed batch does not increase") {
    auto split = split_dataset(generate_dataset(2, Scenario::AortaOnly, 5, 0.2), 1, 1);
    ToyTrainConfig cfg;
    cfg.epochs = 60;
    cfg.patience = 60;
    cfg.learning_rate = 5e-5;
    const auto report = toy_train(split, LossMode::CeOnly, cfg);
    for (std::size_t e = 1; e < report.epochs.size(); ++e) {
        CHECK(report.epochs[e].train_loss <= report.epochs[e - 1].train_loss);
    }
}

TEST_CASE("Topo training: warm-up, weights and early stopping") {
    auto split = split_dataset(generate_dataset(8, Scenario::Mixed, 7, 0.3), 5, 3);
    ToyTrainConfig cfg;
    cfg.epochs = 45;
    cfg.warmup_epochs = 25;
    cfg.patience = 10;

    const auto topo = toy_train(split, LossMode::Topo, cfg);
    const auto ce = toy_train(split, LossMode::CeOnly, cfg);

    bool any_above = false;
    for (const auto& log : topo.epochs) {
        for (double w : log.omegas) {
            CHECK(w >= 1.0);
            if (log.epoch < cfg.warmup_epochs) CHECK(w == 1.0);
            any_above = any_above || w > 1.0;
        }
        CHECK(log.warmup == (log.epoch < cfg.warmup_epochs));
    }
    CHECK(any_above);
    REQUIRE_FALSE(topo.parameters_after_warmup.empty());
    CHECK(topo.parameters_after_warmup == ce.parameters_after_warmup);
    const std::size_t last = topo.epochs.back().epoch;
    CHECK(last - topo.best_epoch <= cfg.patience);

    SUBCASE("per-forward refresh") {
        cfg.weight_refresh = WeightRefresh::PerForward;
        cfg.epochs = 28;
        const auto pf = toy_train(split, LossMode::Topo, cfg);
        CHECK(pf.epochs.back().omegas.size() == split.train.size());
        for (const auto& log : pf.epochs)
            for (double w : log.omegas) CHECK(w >= 1.0);
    }
}

TEST_CASE("weights are exactly 1 where the prediction matches the ground truth") {
    // noise-free data is learned perfectly, after which every weight collapses to 1
    auto split = split_dataset(generate_dataset(4, Scenario::GreatVessels, 9, 0.0), 3, 1);
    ToyTrainConfig cfg;
    cfg.epochs = 80;
    cfg.warmup_epochs = 5;
    cfg.learning_rate = 1e-3;
    const auto r = toy_train(split, LossMode::Topo, cfg);
    const LogisticSegmenter model(r.parameters);
    for (const auto& scene : split.train) {
        const auto pred = model.predict(scene.image);
        if (pred.threshold(0.5) == scene.gt) CHECK(topo_weight(scene.gt, pred).omega == 1.0);
    }
}
