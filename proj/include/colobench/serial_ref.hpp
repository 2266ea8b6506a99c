#pragma once

#include <span>

#include "colobench/depth_metrics.hpp"
#include "colobench/pose_metrics.hpp"
#include "colobench/synth.hpp"

namespace colobench::serial {

/// Plain single-threaded reference implementations with fixed row-major
/// accumulation order. These define the normative summation semantics:
/// the parallel kernels must match them within 1e-9 relative. Kept for
/// the equivalence tests and the benchmark tool; not used by the CLI.

double mean_depth(const DepthMap& map);

DepthScale trajectory_scale(std::span<const DepthMap> gt,
                            std::span<const DepthMap> pred,
                            const std::string& trajectory_id = {});

FrameDepthErrors depth_errors(const DepthMap& gt, const DepthMap& pred,
                              double s);

DepthMetricReport evaluate_depth_trajectory(
    std::span<const DepthMap> gt, std::span<const DepthMap> pred,
    const std::string& trajectory_id = {});

std::vector<double> rte_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred_scaled);
std::vector<double> ate_per_frame(std::span<const Pose> gt,
                                  std::span<const Pose> pred_abs);
std::vector<double> rot_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred);

DepthMap render_depth(const TubeWorld& world, const Pose& camera,
                      const Intrinsics& k, int resolution,
                      double far_plane_cm = 20.0);

}  // namespace colobench::serial
