#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "topoloss/error.hpp"
#include "topoloss/io.hpp"
#include "topoloss/matching.hpp"
#include "topoloss/metrics.hpp"
#include "topoloss/rips.hpp"
#include "topoloss/synth.hpp"
#include "worker_pool.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace topoloss::cli {
namespace {

void emit(const std::string& text, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << text;
        std::cout.flush();
    } else {
        io::write_file(output, text);
    }
}

void emit_json(const json& doc, const std::string& output) { emit(doc.dump(2) + "\n", output); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

bool looks_like_pgm(std::string_view bytes) {
    return bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5');
}

void require_same_size(const BinaryMask& gt, std::size_t w, std::size_t h, const std::string& gt_name,
                       const std::string& pred_name) {
    if (gt.width() != w || gt.height() != h) {
        throw DataError(pred_name + ": dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                        " do not match " + gt_name + " (" + std::to_string(gt.width()) + "x" +
                        std::to_string(gt.height()) + ")");
    }
}

/// Stem -> path for every .pgm file directly inside `dir`.
std::map<std::string, fs::path> pgm_files(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw DataError(dir.string() + ": not a directory");
    std::map<std::string, fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
            out.emplace(entry.path().stem().string(), entry.path());
        }
    }
    return out;
}

struct PairedFile {
    std::string stem;
    fs::path gt;
    fs::path pred;
};

std::vector<PairedFile> pair_directories(const fs::path& gt_dir, const fs::path& pred_dir) {
    const auto gts = pgm_files(gt_dir);
    const auto preds = pgm_files(pred_dir);
    std::vector<PairedFile> pairs;
    for (const auto& [stem, path] : gts) {
        const auto it = preds.find(stem);
        if (it == preds.end()) throw DataError(path.string() + ": no prediction named " + stem + ".pgm");
        pairs.push_back({stem, path, it->second});
    }
    for (const auto& [stem, path] : preds) {
        if (!gts.contains(stem)) throw DataError(path.string() + ": no ground truth named " + stem + ".pgm");
    }
    if (pairs.empty()) throw DataError(gt_dir.string() + ": no .pgm files");
    return pairs;
}

json weight_json(const TopoWeight& w) {
    return {{"omega", w.omega}, {"d0", w.d0},       {"d1", w.d1},
            {"branch", std::string(to_string(w.branch))}, {"alpha", w.alpha}, {"beta", w.beta}};
}

TopoWeight weight_for(const fs::path& gt_path, const fs::path& pred_path, const LossConfig& cfg) {
    const BinaryMask gt = io::read_mask(gt_path);
    const ProbabilityMap pred = io::read_probability_map(pred_path);
    require_same_size(gt, pred.width(), pred.height(), gt_path.string(), pred_path.string());
    return topo_weight(gt, pred, cfg);
}

PersistenceDiagram select_degree(const std::vector<PersistenceDiagram>& diagrams, int degree) {
    for (const auto& d : diagrams)
        if (d.degree() == degree) return d;
    return PersistenceDiagram(degree, {});
}

json pair_json(const PersistenceDiagram& d, std::size_t index) {
    if (index == kDiagonal) return nullptr;
    const auto& p = d.pairs()[index];
    return {{"index", index}, {"birth", p.birth}, {"death", p.death}};
}

struct ImageEvaluation {
    std::string stem;
    PixelMetrics pixel;
    VesselMatchReport vessel;
    HausdorffReport hausdorff;
};

json image_json(const ImageEvaluation& e) {
    json matches = json::array();
    for (const auto& m : e.vessel.matches) {
        matches.push_back({{"gt_id", m.gt_id},
                           {"pred_id", m.pred_id ? json(*m.pred_id) : json(nullptr)},
                           {"intersection", m.intersection},
                           {"iou", m.iou},
                           {"tp", m.is_tp}});
    }
    json per_vessel = json::array();
    for (const auto& v : e.hausdorff.per_vessel) {
        per_vessel.push_back({{"gt_id", v.gt_id},
                              {"pred_id", v.pred_id},
                              {"area", v.area},
                              {"distance", v.distance},
                              {"overlapping", v.overlapping}});
    }
    return {{"name", e.stem},
            {"pixel",
             {{"precision", e.pixel.precision},
              {"recall", e.pixel.recall},
              {"fscore", e.pixel.fscore},
              {"defined", e.pixel.defined}}},
            {"vessel",
             {{"tp", e.vessel.tp},
              {"gt_count", e.vessel.gt_count},
              {"pred_count", e.vessel.pred_count},
              {"shared_predictions", e.vessel.shared_predictions},
              {"matches", matches}}},
            {"hausdorff", {{"weighted", optional_number(e.hausdorff.weighted)}, {"per_vessel", per_vessel}}}};
}

json split_json(const SplitMetrics& m) {
    return {{"pixel",
             {{"precision", m.pixel.mean.precision},
              {"recall", m.pixel.mean.recall},
              {"fscore", m.pixel.mean.fscore},
              {"images_included", m.pixel.images_included},
              {"images_excluded", m.pixel.images_excluded}}},
            {"vessel",
             {{"tp", m.vessel.tp},
              {"gt_count", m.vessel.gt_count},
              {"pred_count", m.vessel.pred_count},
              {"precision", m.vessel.precision()},
              {"recall", m.vessel.recall()},
              {"fscore", m.vessel.fscore()}}},
            {"hausdorff",
             {{"mean", m.hausdorff_defined > 0 ? json(m.mean_hausdorff) : json(nullptr)},
              {"defined", m.hausdorff_defined},
              {"undefined", m.hausdorff_undefined}}}};
}

}  // namespace

void run_contours(const ContoursOptions& opt) {
    emit(io::encode_cloud_csv(extract_contour(io::read_mask(opt.input))), opt.output);
}

void run_persistence(const PersistenceOptions& opt) {
    RipsConfig rips = opt.rips;
    rips.edge_cap = opt.edge_cap;
    rips.validate();

    const std::string bytes = io::read_file(opt.input);
    const PointCloud cloud = looks_like_pgm(bytes) ? extract_contour(io::to_mask(io::parse_pgm(bytes, opt.input)))
                                                   : io::parse_cloud_csv(bytes, opt.input);
    if (cloud.empty()) throw DataError(opt.input + ": no points");

    std::vector<PersistenceDiagram> diagrams;
    for (int degree : {0, 1}) {
        if (!opt.degree || *opt.degree == degree) diagrams.push_back(rips_diagram(cloud, degree, rips));
    }
    emit(io::encode_diagrams_csv(diagrams), opt.output);
}

void run_distance(const DistanceOptions& opt) {
    const auto da = io::read_diagrams_csv(opt.a);
    const auto db = io::read_diagrams_csv(opt.b);

    int degree = 1;
    if (opt.degree) {
        degree = *opt.degree;
    } else {
        std::set<int> present;
        for (const auto& d : da) present.insert(d.degree());
        for (const auto& d : db) present.insert(d.degree());
        if (present.size() > 1) throw UsageError("inputs hold several degrees; choose one with --degree");
        if (!present.empty()) degree = *present.begin();
    }
    const PersistenceDiagram a = select_degree(da, degree);
    const PersistenceDiagram b = select_degree(db, degree);
    if (a.essential_count() != b.essential_count()) {
        throw DataError(opt.b + ": " + std::to_string(b.essential_count()) +
                        " essential pairs in degree " + std::to_string(degree) + ", " + opt.a + " has " +
                        std::to_string(a.essential_count()));
    }

    const DiagramDistanceReport r =
        opt.bottleneck ? bottleneck(a, b) : wasserstein(a, b, opt.q, parse_ground_metric(opt.metric));
    json matching = json::array();
    for (const auto& m : r.matching) matching.push_back({{"a", pair_json(a, m.a)}, {"b", pair_json(b, m.b)}});
    emit_json({{"kind", opt.bottleneck ? "bottleneck" : "wasserstein"},
               {"degree", degree},
               {"value", r.value},
               {"order_q", opt.bottleneck ? json("inf") : json(r.order_q)},
               {"ground_metric", std::string(to_string(r.ground_metric))},
               {"matching", matching}},
              opt.output);
}

void run_weight(const WeightOptions& opt) {
    opt.loss.validate();
    std::error_code ec;
    const bool gt_dir = fs::is_directory(opt.gt, ec), pred_dir = fs::is_directory(opt.pred, ec);
    if (gt_dir != pred_dir) throw UsageError("--gt and --pred must both be files or both be directories");
    if (!gt_dir) {
        emit_json(weight_json(weight_for(opt.gt, opt.pred, opt.loss)), opt.output);
        return;
    }

    const auto pairs = pair_directories(opt.gt, opt.pred);
    const auto weights = parallel_map<TopoWeight>(
        pairs.size(), [&](std::size_t i) { return weight_for(pairs[i].gt, pairs[i].pred, opt.loss); });
    json images = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        json entry = weight_json(weights[i]);
        entry["name"] = pairs[i].stem;
        images.push_back(std::move(entry));
    }
    emit_json({{"images", images}}, opt.output);
}

void run_evaluate(const EvaluateOptions& opt) {
    if (!(opt.threshold > 0.0 && opt.threshold < 1.0)) throw InvalidArgument("--threshold must lie in (0, 1)");
    const auto pairs = pair_directories(opt.gt_dir, opt.pred_dir);
    const auto results = parallel_map<ImageEvaluation>(pairs.size(), [&](std::size_t i) {
        const BinaryMask gt = io::read_mask(pairs[i].gt);
        const ProbabilityMap pred = io::read_probability_map(pairs[i].pred);
        require_same_size(gt, pred.width(), pred.height(), pairs[i].gt.string(), pairs[i].pred.string());
        const BinaryMask mask = pred.threshold(opt.threshold);
        ImageEvaluation e;
        e.stem = pairs[i].stem;
        e.pixel = pixel_metrics(gt, mask);
        e.vessel = vessel_metrics(gt, mask);
        if (gt.foreground_count() > 0) e.hausdorff = hausdorff_report(gt, mask);
        return e;
    });

    // Aggregation runs in stem order, so the report does not depend on scheduling.
    json per_image = json::array();
    std::vector<PixelMetrics> pixels;
    SplitMetrics agg;
    double hausdorff_sum = 0.0;
    for (const auto& e : results) {
        per_image.push_back(image_json(e));
        pixels.push_back(e.pixel);
        agg.vessel.add(e.vessel);
        if (e.hausdorff.weighted) {
            hausdorff_sum += *e.hausdorff.weighted;
            ++agg.hausdorff_defined;
        } else {
            ++agg.hausdorff_undefined;
        }
    }
    agg.pixel = average_pixel_metrics(pixels);
    if (agg.hausdorff_defined > 0) agg.mean_hausdorff = hausdorff_sum / static_cast<double>(agg.hausdorff_defined);
    emit_json({{"threshold", opt.threshold}, {"images", per_image}, {"aggregate", split_json(agg)}}, opt.output);
}

void run_toytrain(const ToyTrainOptions& opt) {
    ToyTrainConfig cfg = opt.config;
    cfg.weight_refresh = parse_weight_refresh(opt.refresh);
    const LossMode mode = parse_loss_mode(opt.mode);
    cfg.validate();
    if (opt.train + opt.val >= opt.count) throw InvalidArgument("--train plus --val must leave scenes for testing");

    const auto scenes =
        generate_dataset(opt.count, parse_scenario(opt.scenario), opt.seed, opt.noise, opt.width, opt.height);
    const TrainReport report = toy_train(split_dataset(scenes, opt.train, opt.val), mode, cfg);

    if (!opt.epoch_csv.empty()) {
        std::ostringstream csv;
        csv << "epoch,warmup,train_loss,val_loss,omega_min,omega_max\n";
        for (const auto& log : report.epochs) {
            const auto [lo, hi] = std::minmax_element(log.omegas.begin(), log.omegas.end());
            csv << log.epoch << ',' << (log.warmup ? 1 : 0) << ',' << io::format_double(log.train_loss) << ','
                << io::format_double(log.val_loss) << ',' << io::format_double(*lo) << ','
                << io::format_double(*hi) << '\n';
        }
        io::write_file(opt.epoch_csv, csv.str());
    }

    double max_omega = 1.0;
    for (const auto& log : report.epochs)
        for (double w : log.omegas) max_omega = std::max(max_omega, w);
    emit_json({{"mode", std::string(to_string(mode))},
               {"scenario", std::string(to_string(parse_scenario(opt.scenario)))},
               {"scenes", {{"count", opt.count}, {"train", opt.train}, {"val", opt.val}, {"seed", opt.seed},
                           {"noise", opt.noise}, {"width", opt.width}, {"height", opt.height}}},
               {"config",
                {{"epochs", cfg.epochs},
                 {"warmup_epochs", cfg.warmup_epochs},
                 {"patience", cfg.patience},
                 {"learning_rate", cfg.learning_rate},
                 {"batch_size", cfg.batch_size},
                 {"weight_refresh", std::string(to_string(cfg.weight_refresh))}}},
               {"epochs_run", report.epochs.size()},
               {"best_epoch", report.best_epoch},
               {"best_val_loss", report.best_val_loss},
               {"stopped_early", report.stopped_early},
               {"max_omega", max_omega},
               {"parameters", report.parameters},
               {"train", split_json(report.train)},
               {"val", split_json(report.val)},
               {"test", split_json(report.test)}},
              opt.output);
}

}  // namespace topoloss::cli
