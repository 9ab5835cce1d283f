#include "topoloss/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "topoloss/error.hpp"

namespace topoloss {

std::string_view to_string(Scenario scenario) noexcept {
    switch (scenario) {
        case Scenario::AortaOnly: return "AORTA_ONLY";
        case Scenario::GreatVessels: return "GREAT_VESSELS";
        case Scenario::Mixed: break;
    }
    return "MIXED";
}

Scenario parse_scenario(std::string_view name) {
    if (name == "AORTA_ONLY" || name == "aorta") return Scenario::AortaOnly;
    if (name == "GREAT_VESSELS" || name == "great-vessels") return Scenario::GreatVessels;
    if (name == "MIXED" || name == "mixed") return Scenario::Mixed;
    throw InvalidArgument("unknown scenario '" + std::string(name) + "'");
}

namespace {

struct Disk {
    double cx, cy, r;
};

void paint_ellipse(BinaryMask& mask, double cx, double cy, double a, double b, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t y = 0; y < mask.height(); ++y) {
        for (std::size_t x = 0; x < mask.width(); ++x) {
            const double dx = static_cast<double>(x) - cx;
            const double dy = static_cast<double>(y) - cy;
            const double u = (dx * c + dy * s) / a;
            const double v = (-dx * s + dy * c) / b;
            if (u * u + v * v <= 1.0) mask.set(x, y, true);
        }
    }
}

void paint_disk(BinaryMask& mask, const Disk& d) { paint_ellipse(mask, d.cx, d.cy, d.r, d.r, 0.0); }

// Rejection sampling of disks inside [x0,x1] x [y0,y1] separated by at least `gap`.
// May return fewer than `target` disks when the region is crowded.
std::vector<Disk> place_disks(std::mt19937_64& rng, std::size_t target, double r_lo, double r_hi,
                              double x0, double x1, double y0, double y1, double gap) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Disk> disks;
    for (int attempt = 0; attempt < 2000 && disks.size() < target; ++attempt) {
        const double r = r_lo + (r_hi - r_lo) * unit(rng);
        const double cx = (x0 + r) + (x1 - x0 - 2 * r) * unit(rng);
        const double cy = (y0 + r) + (y1 - y0 - 2 * r) * unit(rng);
        const bool clear = std::all_of(disks.begin(), disks.end(), [&](const Disk& d) {
            return std::hypot(d.cx - cx, d.cy - cy) >= d.r + r + gap;
        });
        if (clear) disks.push_back({cx, cy, r});
    }
    return disks;
}

ProbabilityMap render_image(const BinaryMask& gt, double noise_level, std::mt19937_64& rng) {
    const std::size_t w = gt.width();
    const std::size_t h = gt.height();
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> img(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
                    const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
                    if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(w) ||
                        ny >= static_cast<std::ptrdiff_t>(h)) {
                        continue;
                    }
                    sum += gt.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny));
                }
            }
            double v = 0.7 * gt.at(x, y) + 0.3 * (sum / 9.0);
            if (noise_level > 0.0) v += noise_level * noise(rng);
            img[y * w + x] = std::clamp(v, 0.0, 1.0);
        }
    }
    return ProbabilityMap(w, h, std::move(img));
}

}  // namespace

Scene generate_scene(const SceneSpec& spec) {
    if (spec.width < 16 || spec.height < 16) throw InvalidArgument("scene canvas must be at least 16x16");
    if (!(spec.noise_level >= 0.0 && spec.noise_level <= 1.0)) {
        throw InvalidArgument("noise_level must lie in [0, 1]");
    }
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    const double w = static_cast<double>(spec.width);
    const double h = static_cast<double>(spec.height);
    const double scale = std::min(w, h) / 64.0;
    BinaryMask gt(spec.width, spec.height);

    switch (spec.scenario) {
        case Scenario::AortaOnly: {
            const double a = uniform(25.0, 28.0) * scale;
            const double b = uniform(20.0, 23.0) * scale;
            const double theta = uniform(0.0, std::numbers::pi);
            paint_ellipse(gt, w / 2 + uniform(-2.0, 2.0), h / 2 + uniform(-2.0, 2.0), a, b, theta);
            break;
        }
        case Scenario::GreatVessels: {
            const auto target = static_cast<std::size_t>(2 + rng() % 4);
            const auto disks = place_disks(rng, target, 4.0 * scale, 7.0 * scale, 2.0, w - 3.0, 2.0,
                                           h - 3.0, 4.0 * scale);
            for (const auto& d : disks) paint_disk(gt, d);
            break;
        }
        case Scenario::Mixed: {
            const double a = uniform(28.0, 30.0) * scale;
            const double b = uniform(17.5, 18.5) * scale;
            const double theta = uniform(-0.08, 0.08);
            const double cy = 19.5 * scale;
            paint_ellipse(gt, w / 2 + uniform(-1.5, 1.5), cy, a, b, theta);
            const auto target = static_cast<std::size_t>(2 + rng() % 4);
            const auto disks = place_disks(rng, target, 3.0 * scale, 4.5 * scale, 2.0, w - 3.0,
                                           cy + b + 3.0 * scale, h - 2.0, 3.0 * scale);
            for (const auto& d : disks) paint_disk(gt, d);
            break;
        }
    }

    ProbabilityMap image = render_image(gt, spec.noise_level, rng);
    return Scene{std::move(image), std::move(gt)};
}

std::vector<Scene> generate_dataset(std::size_t count, Scenario scenario, std::uint64_t base_seed,
                                    double noise_level, std::size_t width, std::size_t height) {
    std::vector<Scene> scenes;
    scenes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        scenes.push_back(generate_scene({width, height, scenario, base_seed + i, noise_level}));
    }
    return scenes;
}

}  // namespace topoloss
