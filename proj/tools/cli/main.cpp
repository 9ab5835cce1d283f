#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "topoloss/error.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2 };

void add_output(CLI::App* cmd, std::string& target) {
    cmd->add_option("-o,--output", target, "Write the result to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace topoloss::cli;

    CLI::App app{"topoloss: persistent-homology tools for topology-aware segmentation losses"};
    app.require_subcommand(1);

    ContoursOptions contours;
    auto* c = app.add_subcommand("contours", "Extract the boundary pixels of a mask PGM as an x,y point-cloud CSV");
    c->add_option("input", contours.input, "Mask PGM (P2 or P5; foreground where value >= half scale)")->required();
    add_output(c, contours.output);

    PersistenceOptions pers;
    auto* p = app.add_subcommand("persistence",
                                 "Vietoris-Rips persistence diagrams of a point-cloud CSV or of a mask's contour");
    p->add_option("input", pers.input, "Point-cloud CSV (header x,y) or mask PGM")->required();
    p->add_option("--degree", pers.degree, "Homology degree to compute (0 or 1); both when omitted")
        ->check(CLI::IsMember({0, 1}));
    p->add_option("--max-points", pers.rips.max_points, "Farthest-point subsample size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    p->add_option("--scale", pers.rips.convention_scale,
                  "Edge-length multiplier: 1 (diameter convention) or 0.5 (radius convention)")
        ->capture_default_str();
    p->add_option("--edge-cap", pers.edge_cap, "Largest edge admitted to the degree-1 complex (default: diameter)");
    add_output(p, pers.output);

    DistanceOptions dist;
    auto* d = app.add_subcommand("distance", "Wasserstein or bottleneck distance between two diagram CSVs");
    d->add_option("a", dist.a, "First diagram CSV (header degree,birth,death)")->required();
    d->add_option("b", dist.b, "Second diagram CSV")->required();
    d->add_option("--degree", dist.degree, "Degree to compare; required when the files hold several")
        ->check(CLI::IsMember({0, 1}));
    d->add_option("--q", dist.q, "Wasserstein order; the value is the sum of q-th powers, with no root taken")
        ->capture_default_str();
    d->add_option("--metric", dist.metric, "Ground metric between diagram points: linf or l2")
        ->capture_default_str();
    d->add_flag("--bottleneck", dist.bottleneck, "Compute the bottleneck distance instead (L-infinity ground metric)");
    add_output(d, dist.output);

    WeightOptions weight;
    auto* w = app.add_subcommand("weight", "Topological loss weight omega for a ground truth and a prediction");
    w->add_option("--gt", weight.gt, "Ground-truth mask PGM, or a directory of them")->required();
    w->add_option("--pred", weight.pred,
                  "Prediction PGM (mask, or probability map scaled by maxval), or a directory matched by file stem")
        ->required();
    w->add_option("--threshold", weight.loss.prob_threshold, "Probability at or above which a pixel is foreground")
        ->capture_default_str();
    w->add_option("--gv-area", weight.loss.gv_area_threshold,
                  "Components smaller than this many pixels select the great-vessel branch")
        ->capture_default_str();
    w->add_option("--max-points", weight.loss.rips.max_points, "Farthest-point subsample size per contour")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_output(w, weight.output);

    EvaluateOptions eval;
    auto* e = app.add_subcommand("evaluate", "Pixel, vessel and Hausdorff metrics over two directories of PGMs");
    e->add_option("gt_dir", eval.gt_dir, "Directory of ground-truth mask PGMs")->required();
    e->add_option("pred_dir", eval.pred_dir, "Directory of prediction PGMs with matching file stems")->required();
    e->add_option("--threshold", eval.threshold, "Probability at or above which a prediction pixel is foreground")
        ->capture_default_str();
    add_output(e, eval.output);

    ToyTrainOptions train;
    auto* t = app.add_subcommand("toytrain", "Train the logistic toy segmenter on synthetic scenes");
    t->add_option("--scenario", train.scenario, "Scene family: aorta, great-vessels or mixed")->capture_default_str();
    t->add_option("--count", train.count, "Number of scenes generated")->capture_default_str();
    t->add_option("--train", train.train, "Scenes in the training split")->capture_default_str();
    t->add_option("--val", train.val, "Scenes in the validation split; the rest are held out")->capture_default_str();
    t->add_option("--seed", train.seed, "Base seed for scene generation")->capture_default_str();
    t->add_option("--noise", train.noise, "Standard deviation of additive image noise, in [0, 1]")
        ->capture_default_str();
    t->add_option("--width", train.width, "Scene width in pixels")->capture_default_str();
    t->add_option("--height", train.height, "Scene height in pixels")->capture_default_str();
    t->add_option("--mode", train.mode, "Loss: topo (weighted) or ce (plain cross-entropy)")->capture_default_str();
    t->add_option("--refresh", train.refresh, "Weight refresh cadence: per-epoch or per-forward")
        ->capture_default_str();
    t->add_option("--epochs", train.config.epochs, "Maximum epochs")->capture_default_str();
    t->add_option("--warmup", train.config.warmup_epochs, "Epochs trained with omega fixed at 1")
        ->capture_default_str();
    t->add_option("--patience", train.config.patience, "Epochs without validation improvement before stopping")
        ->capture_default_str();
    t->add_option("--lr", train.config.learning_rate, "Gradient-descent step size")->capture_default_str();
    t->add_option("--batch-size", train.config.batch_size, "Scenes per parameter update")->capture_default_str();
    t->add_option("--epoch-csv", train.epoch_csv, "Also write per-epoch losses and omega ranges to this CSV");
    add_output(t, train.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kOk : kUsage;
    }

    try {
        if (*c) run_contours(contours);
        else if (*p) run_persistence(pers);
        else if (*d) run_distance(dist);
        else if (*w) run_weight(weight);
        else if (*e) run_evaluate(eval);
        else if (*t) run_toytrain(train);
        return kOk;
    } catch (const UsageError& err) {
        std::cerr << "topoloss: " << err.what() << '\n';
        return kUsage;
    } catch (const topoloss::InvalidArgument& err) {
        std::cerr << "topoloss: " << err.what() << '\n';
        return kUsage;
    } catch (const std::exception& err) {
        // DataError, TrainingError and I/O failures
        std::cerr << "topoloss: " << err.what() << '\n';
        return kData;
    }
}
