#include "colobench/pose_metrics.hpp"

#include <cmath>
#include <cstdint>

#include "colobench/depth_metrics.hpp"
#include "colobench/errors.hpp"

namespace colobench {

const char* to_string(Aggregator a) {
    return a == Aggregator::median ? "median" : "mean";
}

const char* to_string(ScaleMode m) {
    return m == ScaleMode::relative ? "relative" : "absolute";
}

namespace {

void require_equal_lengths(size_t a, size_t b, const char* what) {
    if (a != b) {
        throw ConsistencyError(std::string(what) + " length mismatch: " +
                               std::to_string(a) + " vs " +
                               std::to_string(b));
    }
}

}  // namespace

RelativeSequence derive_relatives(std::span<const Pose> poses,
                                  RelSource source) {
    if (poses.size() < 2) {
        throw TooShort("need at least 2 poses to derive relatives, got " +
                       std::to_string(poses.size()));
    }
    RelativeSequence seq;
    seq.source = source;
    seq.rels.reserve(poses.size() - 1);
    for (size_t t = 0; t + 1 < poses.size(); ++t) {
        seq.rels.push_back(compose(inverse(poses[t]), poses[t + 1]));
    }
    return seq;
}

std::vector<Pose> compose_trajectory(const Pose& anchor,
                                     const RelativeSequence& rels) {
    std::vector<Pose> poses;
    poses.reserve(rels.rels.size() + 1);
    poses.push_back(anchor);
    for (const Pose& r : rels.rels) {
        poses.push_back(compose(poses.back(), r));
    }
    return poses;
}

PoseScale relative_scale(const RelativeSequence& gt,
                         const RelativeSequence& pred) {
    require_equal_lengths(gt.rels.size(), pred.rels.size(), "relative pose");
    if (gt.rels.empty()) {
        throw ConsistencyError("relative_scale needs at least one pose pair");
    }
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t < gt.rels.size(); ++t) {
        num += dot(gt.rels[t].translation, pred.rels[t].translation);
        den += dot(pred.rels[t].translation, pred.rels[t].translation);
    }
    if (den == 0.0) {
        throw DegenerateScale("all predicted relative translations are zero");
    }
    const double s = num / den;
    if (!std::isfinite(s)) {
        throw DegenerateScale("non-finite relative scale");
    }
    return {s, ScaleMode::relative};
}

PoseScale absolute_scale(std::span<const Pose> gt,
                         std::span<const Pose> pred) {
    require_equal_lengths(gt.size(), pred.size(), "absolute pose");
    if (gt.empty()) {
        throw ConsistencyError("absolute_scale needs at least one pose");
    }
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t < gt.size(); ++t) {
        num += dot(gt[t].translation, pred[t].translation);
        den += dot(pred[t].translation, pred[t].translation);
    }
    if (den == 0.0) {
        throw DegenerateScale("all predicted absolute translations are zero");
    }
    const double s = num / den;
    if (!std::isfinite(s)) {
        throw DegenerateScale("non-finite absolute scale");
    }
    return {s, ScaleMode::absolute};
}

RelativeSequence scale_relatives(const RelativeSequence& rels,
                                 const PoseScale& s) {
    RelativeSequence out = rels;
    for (Pose& p : out.rels) {
        p.translation = s.s * p.translation;
    }
    return out;
}

std::vector<double> rte_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred_scaled) {
    require_equal_lengths(gt.rels.size(), pred_scaled.rels.size(),
                          "relative pose");
    const auto n = static_cast<int64_t>(gt.rels.size());
    std::vector<double> out(gt.rels.size());
#pragma omp parallel for schedule(static)
    for (int64_t t = 0; t < n; ++t) {
        const Pose residual =
            compose(inverse(gt.rels[t]), pred_scaled.rels[t]);
        out[t] = norm(residual.translation);
    }
    return out;
}

std::vector<double> ate_per_frame(std::span<const Pose> gt,
                                  std::span<const Pose> pred_abs) {
    require_equal_lengths(gt.size(), pred_abs.size(), "absolute pose");
    const auto n = static_cast<int64_t>(gt.size());
    std::vector<double> out(gt.size());
#pragma omp parallel for schedule(static)
    for (int64_t t = 0; t < n; ++t) {
        out[t] = norm(gt[t].translation - pred_abs[t].translation);
    }
    return out;
}

std::vector<double> rot_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred) {
    require_equal_lengths(gt.rels.size(), pred.rels.size(), "relative pose");
    const auto n = static_cast<int64_t>(gt.rels.size());
    std::vector<double> out(gt.rels.size());
#pragma omp parallel for schedule(static)
    for (int64_t t = 0; t < n; ++t) {
        const Quaternion residual =
            gt.rels[t].rotation.conjugate() * pred.rels[t].rotation;
        out[t] = rotation_angle_deg(residual);
    }
    return out;
}

double aggregate(std::span<const double> values, Aggregator agg) {
    if (values.empty()) {
        throw ConsistencyError("cannot aggregate an empty value list");
    }
    if (agg == Aggregator::mean) {
        double sum = 0.0;
        for (double v : values) sum += v;
        return sum / static_cast<double>(values.size());
    }
    std::vector<double> copy(values.begin(), values.end());
    return median_inplace(copy);
}

double rte(const RelativeSequence& gt, const RelativeSequence& pred_scaled,
           Aggregator agg) {
    const std::vector<double> v = rte_per_frame(gt, pred_scaled);
    return aggregate(v, agg);
}

double ate(std::span<const Pose> gt, std::span<const Pose> pred_abs,
           Aggregator agg) {
    const std::vector<double> v = ate_per_frame(gt, pred_abs);
    return aggregate(v, agg);
}

double rot(const RelativeSequence& gt, const RelativeSequence& pred,
           Aggregator agg) {
    const std::vector<double> v = rot_per_frame(gt, pred);
    return aggregate(v, agg);
}

PoseMetricReport evaluate_pose_task2(std::span<const Pose> gt_poses,
                                     const RelativeSequence& pred_rels,
                                     Aggregator agg) {
    if (gt_poses.size() < 2) {
        throw TooShort("pose evaluation needs at least 2 frames");
    }
    require_equal_lengths(gt_poses.size() - 1, pred_rels.rels.size(),
                          "predicted relative pose");

    const RelativeSequence gt_rels =
        derive_relatives(gt_poses, RelSource::ground_truth);

    PoseMetricReport report;
    report.aggregator = agg;
    report.scale = relative_scale(gt_rels, pred_rels);

    const RelativeSequence pred_scaled =
        scale_relatives(pred_rels, report.scale);
    const std::vector<Pose> pred_abs =
        compose_trajectory(gt_poses.front(), pred_scaled);

    report.per_frame_ate = ate_per_frame(gt_poses, pred_abs);
    report.per_frame_rte = rte_per_frame(gt_rels, pred_scaled);
    report.per_frame_rot = rot_per_frame(gt_rels, pred_rels);
    report.ate_cm = aggregate(report.per_frame_ate, agg);
    report.rte_cm = aggregate(report.per_frame_rte, agg);
    report.rot_deg = aggregate(report.per_frame_rot, agg);
    report.gt_xyz.reserve(gt_poses.size());
    report.pred_xyz.reserve(pred_abs.size());
    for (const Pose& p : gt_poses) report.gt_xyz.push_back(p.translation);
    for (const Pose& p : pred_abs) report.pred_xyz.push_back(p.translation);
    return report;
}

PoseMetricReport evaluate_pose_task3(std::span<const Pose> gt_poses,
                                     const RelativeSequence& pred_rels,
                                     Aggregator agg) {
    if (gt_poses.size() < 2) {
        throw TooShort("pose evaluation needs at least 2 frames");
    }
    require_equal_lengths(gt_poses.size() - 1, pred_rels.rels.size(),
                          "predicted relative pose");

    // COLMAP world frame and prediction frame are unrelated, so both sides
    // are re-expressed with their first frame as identity.
    const Pose gt_origin_inv = inverse(gt_poses.front());
    std::vector<Pose> gt_norm;
    gt_norm.reserve(gt_poses.size());
    for (const Pose& p : gt_poses) {
        gt_norm.push_back(compose(gt_origin_inv, p));
    }

    const std::vector<Pose> pred_unscaled =
        compose_trajectory(Pose::identity(), pred_rels);

    PoseMetricReport report;
    report.aggregator = agg;
    report.scale = absolute_scale(gt_norm, pred_unscaled);

    std::vector<Pose> pred_abs = pred_unscaled;
    for (Pose& p : pred_abs) {
        p.translation = report.scale.s * p.translation;
    }

    const RelativeSequence gt_rels =
        derive_relatives(gt_norm, RelSource::ground_truth);
    const RelativeSequence pred_scaled =
        scale_relatives(pred_rels, report.scale);

    report.per_frame_ate = ate_per_frame(gt_norm, pred_abs);
    report.per_frame_rte = rte_per_frame(gt_rels, pred_scaled);
    report.per_frame_rot = rot_per_frame(gt_rels, pred_rels);
    report.ate_cm = aggregate(report.per_frame_ate, agg);
    report.rte_cm = aggregate(report.per_frame_rte, agg);
    report.rot_deg = aggregate(report.per_frame_rot, agg);
    report.gt_xyz.reserve(gt_norm.size());
    report.pred_xyz.reserve(pred_abs.size());
    for (const Pose& p : gt_norm) report.gt_xyz.push_back(p.translation);
    for (const Pose& p : pred_abs) report.pred_xyz.push_back(p.translation);
    return report;
}

}  // namespace colobench
