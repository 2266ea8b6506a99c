#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "colobench/se3.hpp"

namespace colobench {

/// Default full-scale depth: raw 65535 in a 16-bit PNG maps to 20 cm.
inline constexpr double kDefaultDepthFullScaleCm = 20.0;

/// Dense per-pixel depth in centimeters, row-major.
struct DepthMap {
    int width = 0;
    int height = 0;
    std::vector<float> data;

    DepthMap() = default;
    DepthMap(int w, int h, float fill = 0.0f)
        : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

    float at(int row, int col) const {
        return data[static_cast<size_t>(row) * width + col];
    }
    float& at(int row, int col) {
        return data[static_cast<size_t>(row) * width + col];
    }
    size_t pixel_count() const { return data.size(); }
};

/// Pinhole intrinsics in pixels (no skew).
struct Intrinsics {
    double fx = 0, fy = 0, cx = 0, cy = 0;
};

/// Ordered frame sequence: absolute poses plus optional on-disk depth maps.
struct Trajectory {
    std::string id;
    std::vector<Pose> poses;
    std::vector<std::filesystem::path> depth_paths;  // empty or poses.size()

    size_t frame_count() const { return poses.size(); }
};

struct SceneSet {
    std::string scene_id;
    std::vector<Trajectory> trajectories;  // sorted by id
    std::optional<Intrinsics> intrinsics;
};

/// Reads a single-channel 16-bit PNG; depth_cm = raw / 65535 * full_scale.
/// Wrong bit depth or channel count -> FormatError, unreadable -> IoError.
DepthMap load_depth_png(const std::filesystem::path& path,
                        double full_scale_cm = kDefaultDepthFullScaleCm);

/// Writes a single-channel 16-bit PNG, rounding to the nearest quantum.
/// Values outside [0, full_scale] -> RangeError (no silent clamping).
void save_depth_png(const DepthMap& map, const std::filesystem::path& path,
                    double full_scale_cm = kDefaultDepthFullScaleCm);

/// One pose per nonempty line: tx ty tz qx qy qz qw (scalar-last).
/// Separators: whitespace or commas; '#' lines are comments. Quaternions
/// are normalized on load; a deviation above 1e-3 prints a warning.
std::vector<Pose> load_pose_file(const std::filesystem::path& path);

/// Writes poses in the load_pose_file format with full round-trip
/// precision (shortest representation that parses back exactly).
void save_pose_file(const std::vector<Pose>& poses,
                    const std::filesystem::path& path);

/// 3x3 row-major matrix; nonzero skew or nonpositive focal -> FormatError.
Intrinsics load_intrinsics(const std::filesystem::path& path);

void save_intrinsics(const Intrinsics& k, const std::filesystem::path& path);

/// Relative-pose submission for a trajectory with expected_frames frames:
/// exactly expected_frames - 1 lines, same 7-number layout.
/// Count mismatch -> SubmissionError.
std::vector<Pose> load_prediction_rel(const std::filesystem::path& path,
                                      size_t expected_frames);

/// Scene directory layout:
///   <scene>/intrinsics.txt             (optional at load)
///   <scene>/<trajectory>/poses.txt
///   <scene>/<trajectory>/depths/FFFF.png   (optional, zero-padded names)
/// Trajectories are sorted lexicographically by id. Missing pose file ->
/// MissingDataError; pose/depth count mismatch -> ConsistencyError.
SceneSet load_scene(const std::filesystem::path& dir);

}  // namespace colobench
