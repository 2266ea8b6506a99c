#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colobench/io.hpp"
#include "colobench/json_util.hpp"
#include "colobench/se3.hpp"

namespace colobench {

/// Stable per-stream seed derivation (splitmix64 finalizer).
uint64_t mix_seed(uint64_t seed, uint64_t stream);

struct TubeParams {
    double length_cm = 60.0;
    double base_radius_cm = 2.0;
    /// radius(u) = base + amplitude * sin(2*pi*waves*u/length + phase)
    double radius_amplitude_cm = 0.4;
    double radius_waves = 2.0;
    /// Maximum random heading change between consecutive control points.
    double bend_max_deg = 12.0;
    double control_spacing_cm = 4.0;
};

/// Procedural tubular anatomy: an arclength-sampled centerline spline with
/// a radius profile. Radius stays within [0.5, 4] cm and the centerline's
/// minimum radius of curvature exceeds 1.5x the maximum tube radius, so
/// the tube cannot self-intersect.
class TubeWorld {
   public:
    struct CurveQuery {
        double u = 0;      // arclength of the closest centerline point
        double dist = 0;   // distance from the query point to the curve
    };

    double length() const { return length_; }
    uint64_t seed() const { return seed_; }
    double min_radius() const { return min_radius_; }
    double max_radius() const { return max_radius_; }
    const std::vector<Vec3>& control_points() const { return controls_; }

    Vec3 centerline(double u) const;
    Vec3 tangent(double u) const;
    double radius(double u) const;

    /// Global search (coarse scan + local refinement).
    CurveQuery nearest(const Vec3& p) const;
    /// Local downhill walk from a previous query's arclength; valid when p
    /// moved only a short distance since.
    CurveQuery nearest(const Vec3& p, double hint_u) const;

    /// Distance to the tube surface, negative inside. hint_u is updated to
    /// the closest arclength for reuse along a ray.
    double signed_distance(const Vec3& p, double& hint_u) const;

    friend TubeWorld make_tube(const TubeParams& params, uint64_t seed);
    friend TubeWorld straight_tube(double length_cm, double radius_cm);

   private:
    size_t sample_count() const { return samples_.size(); }

    std::vector<Vec3> samples_;    // uniform arclength spacing du_
    std::vector<Vec3> tangents_;   // unit, per sample
    std::vector<double> radii_;    // per sample
    double du_ = 0.025;
    double length_ = 0;
    double min_radius_ = 0, max_radius_ = 0;
    uint64_t seed_ = 0;
    std::vector<Vec3> controls_;
};

/// Deterministic for a fixed seed. Parameters that would violate the
/// radius range or the self-intersection bound -> GeometryError.
TubeWorld make_tube(const TubeParams& params, uint64_t seed);

/// Zero-curvature preset with constant radius, used by closed-form checks.
TubeWorld straight_tube(double length_cm, double radius_cm);

struct TrajectoryPlan {
    size_t n_frames = 100;
    double step_cm = 0.1;
    double lateral_sigma_cm = 0.15;
    double angular_sigma_deg = 2.0;
    double start_offset_cm = 2.0;
    uint64_t seed = 0;
};

/// Marches along the centerline at plan.step with seeded lateral/angular
/// perturbations; the camera forward axis is tangent-aligned before the
/// perturbation and every camera position stays strictly inside the tube
/// (up to 100 resamples per frame, then PlanError). A plan that does not
/// fit within the tube length -> PlanError.
Trajectory sample_trajectory(const TubeWorld& world,
                             const TrajectoryPlan& plan);

/// Challenge-shaped default: fx = fy = 227.6 and centered principal point
/// at 475 pixels, scaled proportionally for other resolutions.
Intrinsics default_intrinsics(int resolution);

/// Per-pixel z-depth (optical-axis distance) of the first tube-surface
/// intersection, via sphere tracing of the tube SDF: safety factor 0.9,
/// hit tolerance 1e-5 cm, at most 512 steps, miss or overshoot clamped to
/// the far plane. Camera outside the tube -> GeometryError. Rows are
/// rendered in parallel; output is identical for any thread count.
DepthMap render_depth(const TubeWorld& world, const Pose& camera,
                      const Intrinsics& k, int resolution,
                      double far_plane_cm = 20.0);

struct ExportConfig {
    std::string scene_id = "synth";
    int resolution = 475;
    std::optional<Intrinsics> intrinsics;  // default_intrinsics(resolution)
    double depth_full_scale_cm = kDefaultDepthFullScaleCm;
    double far_plane_cm = 20.0;
    Json extra;  // merged into the manifest (e.g. the CLI RunConfig)
};

/// Writes <out_dir>/intrinsics.txt, one subdirectory per plan
/// (traj_00, traj_01, ...) with poses.txt and depths/FFFF.png, plus a
/// manifest.json recording seeds and parameters. Returns the scene as
/// loaded views (poses in memory, depth paths on disk).
SceneSet export_dataset(const TubeWorld& world,
                        std::span<const TrajectoryPlan> plans,
                        const std::filesystem::path& out_dir,
                        const ExportConfig& config = {});

}  // namespace colobench
