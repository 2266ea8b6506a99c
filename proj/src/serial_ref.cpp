#include "colobench/serial_ref.hpp"

#include <algorithm>
#include <cmath>

#include "colobench/errors.hpp"

namespace colobench::serial {

double mean_depth(const DepthMap& map) {
    double sum = 0.0;
    for (float v : map.data) sum += v;
    return sum / static_cast<double>(map.pixel_count());
}

DepthScale trajectory_scale(std::span<const DepthMap> gt,
                            std::span<const DepthMap> pred,
                            const std::string& trajectory_id) {
    if (gt.size() != pred.size() || gt.empty()) {
        throw ConsistencyError("trajectory_scale needs equal nonzero frame "
                               "counts");
    }
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < gt.size(); ++i) {
        const double g = mean_depth(gt[i]);
        const double p = mean_depth(pred[i]);
        num += g * p;
        den += p * p;
    }
    if (den == 0.0) {
        throw DegenerateScale("all-zero predicted depths");
    }
    return {num / den, trajectory_id};
}

FrameDepthErrors depth_errors(const DepthMap& gt, const DepthMap& pred,
                              double s) {
    const size_t d = gt.pixel_count();
    double sum_abs = 0.0, sum_sq = 0.0;
    std::vector<double> rel;
    rel.reserve(d);
    for (size_t i = 0; i < d; ++i) {
        const double y = gt.data[i];
        const double r = y - s * static_cast<double>(pred.data[i]);
        sum_abs += std::abs(r);
        sum_sq += r * r;
        if (y > 0.0) rel.push_back(std::abs(r) / y);
    }
    if (rel.empty()) {
        throw NoValidPixels("no pixels with positive ground-truth depth");
    }
    std::sort(rel.begin(), rel.end());
    const size_t n = rel.size();
    const double median = n % 2 == 1
                              ? rel[n / 2]
                              : 0.5 * (rel[n / 2 - 1] + rel[n / 2]);
    FrameDepthErrors out;
    out.l1 = sum_abs / static_cast<double>(d);
    out.rel = median;
    out.rmse = std::sqrt(sum_sq / static_cast<double>(d));
    return out;
}

DepthMetricReport evaluate_depth_trajectory(std::span<const DepthMap> gt,
                                            std::span<const DepthMap> pred,
                                            const std::string& trajectory_id) {
    DepthMetricReport report;
    report.scale = trajectory_scale(gt, pred, trajectory_id);
    report.per_frame.reserve(gt.size());
    double l1 = 0, rel = 0, rmse = 0;
    for (size_t i = 0; i < gt.size(); ++i) {
        const FrameDepthErrors f = depth_errors(gt[i], pred[i],
                                                report.scale.s);
        l1 += f.l1;
        rel += f.rel;
        rmse += f.rmse;
        report.per_frame.push_back(f);
    }
    const auto n = static_cast<double>(gt.size());
    report.l1 = l1 / n;
    report.rel = rel / n;
    report.rmse = rmse / n;
    return report;
}

std::vector<double> rte_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred_scaled) {
    std::vector<double> out;
    out.reserve(gt.rels.size());
    for (size_t t = 0; t < gt.rels.size(); ++t) {
        const Pose residual =
            compose(inverse(gt.rels[t]), pred_scaled.rels[t]);
        out.push_back(norm(residual.translation));
    }
    return out;
}

std::vector<double> ate_per_frame(std::span<const Pose> gt,
                                  std::span<const Pose> pred_abs) {
    std::vector<double> out;
    out.reserve(gt.size());
    for (size_t t = 0; t < gt.size(); ++t) {
        out.push_back(norm(gt[t].translation - pred_abs[t].translation));
    }
    return out;
}

std::vector<double> rot_per_frame(const RelativeSequence& gt,
                                  const RelativeSequence& pred) {
    std::vector<double> out;
    out.reserve(gt.rels.size());
    for (size_t t = 0; t < gt.rels.size(); ++t) {
        out.push_back(rotation_angle_deg(gt.rels[t].rotation.conjugate() *
                                         pred.rels[t].rotation));
    }
    return out;
}

DepthMap render_depth(const TubeWorld& world, const Pose& camera,
                      const Intrinsics& k, int resolution,
                      double far_plane_cm) {
    const TubeWorld::CurveQuery cam_q = world.nearest(camera.translation);
    if (cam_q.dist >= world.radius(cam_q.u)) {
        throw GeometryError("camera is outside the tube");
    }
    const double u0 = cam_q.u;
    DepthMap map(resolution, resolution);
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            const double px = (col + 0.5 - k.cx) / k.fx;
            const double py = (row + 0.5 - k.cy) / k.fy;
            const double inv_len = 1.0 / std::sqrt(px * px + py * py + 1.0);
            const Vec3 dir =
                rotate(camera.rotation,
                       Vec3{px * inv_len, py * inv_len, inv_len});
            const double t_max = far_plane_cm / inv_len;
            double hint = u0;
            double t = 0.0;
            double depth = far_plane_cm;
            for (int step = 0; step < 512; ++step) {
                const double sd = world.signed_distance(
                    camera.translation + t * dir, hint);
                if (sd >= -1e-5) {
                    depth = std::min(t * inv_len, far_plane_cm);
                    break;
                }
                t += -sd * 0.9;
                if (t > t_max) break;
            }
            map.at(row, col) = static_cast<float>(depth);
        }
    }
    return map;
}

}  // namespace colobench::serial
