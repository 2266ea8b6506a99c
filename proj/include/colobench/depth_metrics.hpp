#pragma once

#include <span>
#include <string>
#include <vector>

#include "colobench/io.hpp"

namespace colobench {

/// Per-trajectory least-squares scale taking predictions onto ground truth.
struct DepthScale {
    double s = 1.0;
    std::string trajectory_id;
};

struct FrameDepthErrors {
    double l1 = 0;    // cm, mean absolute residual
    double rel = 0;   // median of |residual| / gt over valid (gt > 0) pixels
    double rmse = 0;  // cm
};

struct DepthMetricReport {
    double l1 = 0;
    double rel = 0;
    double rmse = 0;
    std::vector<FrameDepthErrors> per_frame;
    DepthScale scale;
};

struct SceneDepthSummary {
    double l1 = 0;
    double rel = 0;
    double rmse = 0;
};

/// Arithmetic mean over all pixels, row-major accumulation.
double mean_depth(const DepthMap& map);

/// Least-squares fit of gt_mean ~ s * pred_mean over per-image means:
/// s = sum(gt_i * pred_i) / sum(pred_i^2). All-zero predictions ->
/// DegenerateScale.
DepthScale trajectory_scale(std::span<const DepthMap> gt,
                            std::span<const DepthMap> pred,
                            const std::string& trajectory_id = {});

/// L1 / median-relative / RMSE for one frame at a fixed scale.
/// No gt > 0 pixels -> NoValidPixels.
FrameDepthErrors depth_errors(const DepthMap& gt, const DepthMap& pred,
                              double s);

/// Fits the trajectory scale once, applies it to every frame, and reports
/// unweighted means of the per-frame errors. Frames are processed in
/// parallel; results are identical for any thread count.
DepthMetricReport evaluate_depth_trajectory(
    std::span<const DepthMap> gt, std::span<const DepthMap> pred,
    const std::string& trajectory_id = {});

/// In-memory trajectory for scene-level evaluation.
struct DepthTrajectoryData {
    std::string id;
    std::vector<DepthMap> maps;
};

struct DepthSceneData {
    std::string scene_id;
    std::vector<DepthTrajectoryData> trajectories;
};

struct SceneDepthResult {
    SceneDepthSummary summary;
    std::vector<DepthMetricReport> per_trajectory;  // gt trajectory order
};

/// Per-scene aggregate: unweighted mean of per-trajectory aggregates.
/// Trajectory id mismatch -> ConsistencyError.
SceneDepthResult evaluate_depth_scene(const DepthSceneData& gt,
                                      const DepthSceneData& pred);

/// Mean of already-computed per-trajectory reports.
SceneDepthSummary aggregate_scene(
    std::span<const DepthMetricReport> trajectory_reports);

/// Median with the even-count convention: mean of the two central order
/// statistics. Consumes the buffer.
double median_inplace(std::vector<double>& values);

}  // namespace colobench
