#include "colobench/depth_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "colobench/errors.hpp"

namespace colobench {

double median_inplace(std::vector<double>& values) {
    const size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double hi = *mid;
    if (n % 2 == 1) return hi;
    // Even count: the lower central order statistic is the max of the
    // prefix left behind by nth_element.
    const double lo = *std::max_element(values.begin(), mid);
    return 0.5 * (lo + hi);
}

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
                               "counts, got " +
                               std::to_string(gt.size()) + " vs " +
                               std::to_string(pred.size()));
    }
    const auto n = static_cast<int64_t>(gt.size());
    std::vector<double> gt_means(gt.size()), pred_means(gt.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        gt_means[i] = mean_depth(gt[i]);
        pred_means[i] = mean_depth(pred[i]);
    }
    double num = 0.0, den = 0.0;
    for (int64_t i = 0; i < n; ++i) {
        num += gt_means[i] * pred_means[i];
        den += pred_means[i] * pred_means[i];
    }
    if (den == 0.0) {
        throw DegenerateScale("all-zero predicted depths in trajectory " +
                              trajectory_id);
    }
    const double s = num / den;
    if (!std::isfinite(s) || s <= 0.0) {
        throw DegenerateScale("degenerate depth scale " + std::to_string(s) +
                              " in trajectory " + trajectory_id);
    }
    return {s, trajectory_id};
}

FrameDepthErrors depth_errors(const DepthMap& gt, const DepthMap& pred,
                              double s) {
    if (gt.width != pred.width || gt.height != pred.height) {
        throw ConsistencyError("depth map size mismatch: " +
                               std::to_string(gt.width) + "x" +
                               std::to_string(gt.height) + " vs " +
                               std::to_string(pred.width) + "x" +
                               std::to_string(pred.height));
    }
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
    FrameDepthErrors out;
    out.l1 = sum_abs / static_cast<double>(d);
    out.rel = median_inplace(rel);
    out.rmse = std::sqrt(sum_sq / static_cast<double>(d));
    return out;
}

DepthMetricReport evaluate_depth_trajectory(std::span<const DepthMap> gt,
                                            std::span<const DepthMap> pred,
                                            const std::string& trajectory_id) {
    DepthMetricReport report;
    report.scale = trajectory_scale(gt, pred, trajectory_id);
    const auto n = static_cast<int64_t>(gt.size());
    report.per_frame.resize(gt.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < n; ++i) {
        report.per_frame[i] = depth_errors(gt[i], pred[i], report.scale.s);
    }
    double l1 = 0, rel = 0, rmse = 0;
    for (const FrameDepthErrors& f : report.per_frame) {
        l1 += f.l1;
        rel += f.rel;
        rmse += f.rmse;
    }
    const auto dn = static_cast<double>(gt.size());
    report.l1 = l1 / dn;
    report.rel = rel / dn;
    report.rmse = rmse / dn;
    return report;
}

SceneDepthSummary aggregate_scene(
    std::span<const DepthMetricReport> trajectory_reports) {
    if (trajectory_reports.empty()) {
        throw ConsistencyError("scene has no trajectory reports");
    }
    SceneDepthSummary s;
    for (const DepthMetricReport& r : trajectory_reports) {
        s.l1 += r.l1;
        s.rel += r.rel;
        s.rmse += r.rmse;
    }
    const auto n = static_cast<double>(trajectory_reports.size());
    s.l1 /= n;
    s.rel /= n;
    s.rmse /= n;
    return s;
}

SceneDepthResult evaluate_depth_scene(const DepthSceneData& gt,
                                      const DepthSceneData& pred) {
    if (gt.trajectories.size() != pred.trajectories.size()) {
        throw ConsistencyError(
            "scene trajectory count mismatch: " +
            std::to_string(gt.trajectories.size()) + " vs " +
            std::to_string(pred.trajectories.size()));
    }
    SceneDepthResult result;
    for (size_t t = 0; t < gt.trajectories.size(); ++t) {
        const auto& g = gt.trajectories[t];
        const auto& p = pred.trajectories[t];
        if (g.id != p.id) {
            throw ConsistencyError("trajectory id mismatch: '" + g.id +
                                   "' vs '" + p.id + "'");
        }
        result.per_trajectory.push_back(
            evaluate_depth_trajectory(g.maps, p.maps, g.id));
    }
    result.summary = aggregate_scene(result.per_trajectory);
    return result;
}

}  // namespace colobench
