#pragma once

#include <span>
#include <string>
#include <vector>

#include "colobench/se3.hpp"

namespace colobench {

enum class RelSource { ground_truth, prediction };

/// Ordered relative poses, rels[t] mapping frame t to frame t+1.
struct RelativeSequence {
    std::vector<Pose> rels;
    RelSource source = RelSource::prediction;
};

enum class ScaleMode { relative, absolute };

struct PoseScale {
    double s = 1.0;
    ScaleMode mode = ScaleMode::relative;
};

enum class Aggregator { median, mean };

const char* to_string(Aggregator a);
const char* to_string(ScaleMode m);

struct PoseMetricReport {
    double ate_cm = 0;
    double rte_cm = 0;
    double rot_deg = 0;
    std::vector<double> per_frame_ate;  // length n
    std::vector<double> per_frame_rte;  // length n-1
    std::vector<double> per_frame_rot;  // length n-1
    PoseScale scale;
    Aggregator aggregator = Aggregator::median;
    /// The compared absolute positions (after anchoring/scaling), kept for
    /// trajectory plotting dumps.
    std::vector<Vec3> gt_xyz;
    std::vector<Vec3> pred_xyz;
};

/// Forward-direction relatives: rels[t] = inverse(P_t) * P_{t+1}.
/// Fewer than 2 poses -> TooShort.
RelativeSequence derive_relatives(std::span<const Pose> poses,
                                  RelSource source = RelSource::ground_truth);

/// poses[0] = anchor, poses[t+1] = poses[t] * rels[t].
std::vector<Pose> compose_trajectory(const Pose& anchor,
                                     const RelativeSequence& rels);

/// s = sum(trans(gt_t) . trans(pred_t)) / sum(|trans(pred_t)|^2) over
/// relative-pose translations. All-zero predicted translations ->
/// DegenerateScale.
PoseScale relative_scale(const RelativeSequence& gt,
                         const RelativeSequence& pred);

/// Same ratio over absolute-pose translations; callers must first express
/// both trajectories relative to their own first frame.
PoseScale absolute_scale(std::span<const Pose> gt, std::span<const Pose> pred);

/// Multiplies every translation by s; rotations untouched.
RelativeSequence scale_relatives(const RelativeSequence& rels,
                                 const PoseScale& s);

std::vector<double> rte_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred_scaled);
std::vector<double> ate_per_frame(std::span<const Pose> gt,
                                  std::span<const Pose> pred_abs);
std::vector<double> rot_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred);

double aggregate(std::span<const double> values, Aggregator agg);

double rte(const RelativeSequence& gt, const RelativeSequence& pred_scaled,
           Aggregator agg = Aggregator::median);
double ate(std::span<const Pose> gt, std::span<const Pose> pred_abs,
           Aggregator agg = Aggregator::median);
double rot(const RelativeSequence& gt, const RelativeSequence& pred,
           Aggregator agg = Aggregator::median);

/// Full synthetic-pose pipeline: fit s on relative translations, scale the
/// predicted relatives, compose from the ground-truth first pose, then
/// ATE/RTE/ROT.
PoseMetricReport evaluate_pose_task2(std::span<const Pose> gt_poses,
                                     const RelativeSequence& pred_rels,
                                     Aggregator agg = Aggregator::median);

/// Real-data pipeline: both trajectories re-expressed relative to their
/// first frame, prediction composed unscaled, s fit on absolute
/// translations and applied, then the same three metrics.
PoseMetricReport evaluate_pose_task3(std::span<const Pose> gt_poses,
                                     const RelativeSequence& pred_rels,
                                     Aggregator agg = Aggregator::median);

}  // namespace colobench
