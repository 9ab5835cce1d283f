#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "topoloss/geometry.hpp"
#include "topoloss/loss.hpp"

namespace topoloss {

enum class Scenario { AortaOnly, GreatVessels, Mixed };

std::string_view to_string(Scenario scenario) noexcept;
Scenario parse_scenario(std::string_view name);

struct SceneSpec {
    std::size_t width = 64;
    std::size_t height = 64;
    Scenario scenario = Scenario::Mixed;
    std::uint64_t seed = 0;
    double noise_level = 0.0;  // standard deviation of the additive noise, in [0, 1]
};

struct Scene {
    ProbabilityMap image;  // intensities in [0, 1]
    BinaryMask gt;
};

/// Deterministic in every field of `spec`.
///  - AortaOnly: one large rotated ellipse (area >= 1500 px on the default canvas)
///  - GreatVessels: 2..5 separated small disks
///  - Mixed: a wide ellipse in the upper half plus 2..5 disks below it
/// The image blends the mask with its 3x3 box blur, keeping foreground above 0.5
/// and background below it, then adds clamped Gaussian noise.
Scene generate_scene(const SceneSpec& spec);

/// `count` scenes with seeds base_seed, base_seed + 1, ...
std::vector<Scene> generate_dataset(std::size_t count, Scenario scenario, std::uint64_t base_seed,
                                    double noise_level, std::size_t width = 64, std::size_t height = 64);

}  // namespace topoloss
