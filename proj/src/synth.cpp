#include "colobench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "colobench/errors.hpp"
#include "colobench/version.hpp"

namespace colobench {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMinTubeRadius = 0.5;
constexpr double kMaxTubeRadius = 4.0;
constexpr double kCurvatureClearance = 1.5;
constexpr double kHitTolerance = 1e-5;
constexpr double kStepSafety = 0.9;
constexpr int kMaxTraceSteps = 512;

double dist2(const Vec3& a, const Vec3& b) {
    const Vec3 d = a - b;
    return dot(d, d);
}

/// Uniform Catmull-Rom interpolation on the segment [p1, p2].
Vec3 catmull_rom(const Vec3& p0, const Vec3& p1, const Vec3& p2,
                 const Vec3& p3, double t) {
    const double t2 = t * t, t3 = t2 * t;
    Vec3 out;
    for (int c = 0; c < 3; ++c) {
        out[c] = 0.5 * (2.0 * p1[c] + (-p0[c] + p2[c]) * t +
                        (2.0 * p0[c] - 5.0 * p1[c] + 4.0 * p2[c] - p3[c]) *
                            t2 +
                        (-p0[c] + 3.0 * p1[c] - 3.0 * p2[c] + p3[c]) * t3);
    }
    return out;
}

/// Menger curvature of three points: 4 * area / product of side lengths.
double menger_curvature(const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, bc = c - b;
    const double area2 = norm(cross(ab, ac));  // twice the triangle area
    const double den = norm(ab) * norm(ac) * norm(bc);
    return den == 0.0 ? 0.0 : 2.0 * area2 / den;
}

Vec3 any_perpendicular(const Vec3& v) {
    const Vec3 ref =
        std::abs(v[1]) < 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
    return normalized(cross(ref, v));
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Vec3 TubeWorld::centerline(double u) const {
    const double x = std::clamp(u / du_, 0.0,
                                static_cast<double>(samples_.size() - 1));
    const auto i = static_cast<size_t>(x);
    if (i + 1 >= samples_.size()) return samples_.back();
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * samples_[i] + f * samples_[i + 1];
}

Vec3 TubeWorld::tangent(double u) const {
    const double x = std::clamp(u / du_, 0.0,
                                static_cast<double>(tangents_.size() - 1));
    const auto i = static_cast<size_t>(x);
    if (i + 1 >= tangents_.size()) return tangents_.back();
    const double f = x - static_cast<double>(i);
    return normalized((1.0 - f) * tangents_[i] + f * tangents_[i + 1]);
}

double TubeWorld::radius(double u) const {
    const double x = std::clamp(u / du_, 0.0,
                                static_cast<double>(radii_.size() - 1));
    const auto i = static_cast<size_t>(x);
    if (i + 1 >= radii_.size()) return radii_.back();
    const double f = x - static_cast<double>(i);
    return (1.0 - f) * radii_[i] + f * radii_[i + 1];
}

TubeWorld::CurveQuery TubeWorld::nearest(const Vec3& p) const {
    const size_t n = samples_.size();
    const size_t stride = std::max<size_t>(1, n / 96);
    size_t best = 0;
    double best_d2 = dist2(p, samples_[0]);
    for (size_t i = stride; i < n; i += stride) {
        const double d2 = dist2(p, samples_[i]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return nearest(p, static_cast<double>(best) * du_);
}

TubeWorld::CurveQuery TubeWorld::nearest(const Vec3& p, double hint_u) const {
    const size_t n = samples_.size();
    auto i = static_cast<size_t>(
        std::clamp(hint_u / du_, 0.0, static_cast<double>(n - 1)));
    double here = dist2(p, samples_[i]);
    while (i + 1 < n) {
        const double next = dist2(p, samples_[i + 1]);
        if (next >= here) break;
        here = next;
        ++i;
    }
    while (i > 0) {
        const double prev = dist2(p, samples_[i - 1]);
        if (prev >= here) break;
        here = prev;
        --i;
    }

    // Refine on the two segments adjacent to the best sample.
    CurveQuery q;
    q.u = static_cast<double>(i) * du_;
    q.dist = std::sqrt(here);
    for (const size_t a : {i == 0 ? i : i - 1, i}) {
        if (a + 1 >= n) continue;
        const Vec3 seg = samples_[a + 1] - samples_[a];
        const double len2 = dot(seg, seg);
        if (len2 == 0.0) continue;
        const double t =
            std::clamp(dot(p - samples_[a], seg) / len2, 0.0, 1.0);
        const Vec3 proj = samples_[a] + t * seg;
        const double d = std::sqrt(dist2(p, proj));
        if (d < q.dist) {
            q.dist = d;
            q.u = (static_cast<double>(a) + t) * du_;
        }
    }
    return q;
}

double TubeWorld::signed_distance(const Vec3& p, double& hint_u) const {
    const CurveQuery q = hint_u >= 0.0 ? nearest(p, hint_u) : nearest(p);
    hint_u = q.u;
    return q.dist - radius(q.u);
}

TubeWorld make_tube(const TubeParams& params, uint64_t seed) {
    const double r_lo = params.base_radius_cm - params.radius_amplitude_cm;
    const double r_hi = params.base_radius_cm + params.radius_amplitude_cm;
    if (params.radius_amplitude_cm < 0 || r_lo < kMinTubeRadius ||
        r_hi > kMaxTubeRadius) {
        throw GeometryError("radius profile leaves [0.5, 4] cm: base " +
                            std::to_string(params.base_radius_cm) +
                            " amplitude " +
                            std::to_string(params.radius_amplitude_cm));
    }
    if (params.length_cm < 4.0 * params.control_spacing_cm ||
        params.control_spacing_cm <= 0.0) {
        throw GeometryError("tube length must cover at least four control "
                            "spacings");
    }
    const double bend_rad = params.bend_max_deg * kPi / 180.0;
    if (bend_rad > 0.0) {
        const double min_curve_radius = params.control_spacing_cm / bend_rad;
        if (min_curve_radius <= kCurvatureClearance * r_hi * 1.3) {
            throw GeometryError(
                "bend per control step too aggressive for radius " +
                std::to_string(r_hi));
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Heading random walk; two extra controls past the requested length
    // give the spline end margin.
    const auto n_path = static_cast<size_t>(
                            std::ceil(params.length_cm /
                                      params.control_spacing_cm)) +
                        3;
    std::vector<Vec3> path;
    path.reserve(n_path + 2);
    Vec3 p{0, 0, 0};
    Vec3 h{0, 0, 1};
    path.push_back(p);
    for (size_t i = 1; i < n_path; ++i) {
        const double theta = bend_rad * unit(rng);
        const double psi = 2.0 * kPi * unit(rng);
        const Vec3 e1 = any_perpendicular(h);
        const Vec3 e2 = cross(h, e1);
        const Vec3 axis = std::cos(psi) * e1 + std::sin(psi) * e2;
        h = normalized(rotate(Quaternion::from_axis_angle(axis, theta), h));
        p = p + params.control_spacing_cm * h;
        path.push_back(p);
    }
    // Mirrored endpoints close the Catmull-Rom boundary segments.
    std::vector<Vec3> controls;
    controls.push_back(2.0 * path.front() - (1.0 * path[1]));
    controls.insert(controls.end(), path.begin(), path.end());
    controls.push_back(2.0 * path.back() - (1.0 * path[path.size() - 2]));

    // Dense pre-sampling of the spline, then uniform arclength resampling.
    const int sub = std::max(8, static_cast<int>(
                                    params.control_spacing_cm / 0.01));
    std::vector<Vec3> dense;
    dense.reserve((controls.size() - 3) * static_cast<size_t>(sub) + 1);
    for (size_t seg = 0; seg + 3 < controls.size(); ++seg) {
        for (int k = 0; k < sub; ++k) {
            const double t = static_cast<double>(k) / sub;
            dense.push_back(catmull_rom(controls[seg], controls[seg + 1],
                                        controls[seg + 2], controls[seg + 3],
                                        t));
        }
    }
    dense.push_back(controls[controls.size() - 2]);

    std::vector<double> cum(dense.size(), 0.0);
    for (size_t i = 1; i < dense.size(); ++i) {
        cum[i] = cum[i - 1] + std::sqrt(dist2(dense[i], dense[i - 1]));
    }
    if (cum.back() < params.length_cm) {
        throw GeometryError("generated centerline shorter than requested");
    }

    TubeWorld world;
    world.seed_ = seed;
    world.controls_ = controls;
    world.length_ = params.length_cm;
    world.du_ = 0.025;
    const auto n_samples =
        static_cast<size_t>(std::floor(world.length_ / world.du_)) + 1;
    world.samples_.resize(n_samples);
    size_t cursor = 0;
    for (size_t i = 0; i < n_samples; ++i) {
        const double u = static_cast<double>(i) * world.du_;
        while (cursor + 1 < cum.size() && cum[cursor + 1] < u) ++cursor;
        const double span = cum[cursor + 1] - cum[cursor];
        const double f = span > 0.0 ? (u - cum[cursor]) / span : 0.0;
        world.samples_[i] =
            (1.0 - f) * dense[cursor] + f * dense[cursor + 1];
    }

    world.tangents_.resize(n_samples);
    for (size_t i = 0; i < n_samples; ++i) {
        const size_t a = i == 0 ? 0 : i - 1;
        const size_t b = i + 1 < n_samples ? i + 1 : i;
        world.tangents_[i] = normalized(world.samples_[b] -
                                        world.samples_[a]);
    }

    const double phase = 2.0 * kPi * unit(rng);
    world.radii_.resize(n_samples);
    world.min_radius_ = r_hi;
    world.max_radius_ = r_lo;
    for (size_t i = 0; i < n_samples; ++i) {
        const double u = static_cast<double>(i) * world.du_;
        const double r =
            params.base_radius_cm +
            params.radius_amplitude_cm *
                std::sin(2.0 * kPi * params.radius_waves * u /
                             params.length_cm +
                         phase);
        world.radii_[i] = r;
        world.min_radius_ = std::min(world.min_radius_, r);
        world.max_radius_ = std::max(world.max_radius_, r);
    }

    // Discrete curvature check over ~0.5 cm triples.
    const size_t stride = std::max<size_t>(1, static_cast<size_t>(
                                                  0.5 / world.du_));
    double max_curv = 0.0;
    for (size_t i = stride; i + stride < n_samples; i += stride) {
        max_curv = std::max(
            max_curv, menger_curvature(world.samples_[i - stride],
                                       world.samples_[i],
                                       world.samples_[i + stride]));
    }
    if (max_curv > 0.0 &&
        1.0 / max_curv <= kCurvatureClearance * world.max_radius_) {
        throw GeometryError("centerline curvature too high: min curve "
                            "radius " +
                            std::to_string(1.0 / max_curv) + " cm vs bound " +
                            std::to_string(kCurvatureClearance *
                                           world.max_radius_));
    }
    return world;
}

TubeWorld straight_tube(double length_cm, double radius_cm) {
    if (radius_cm < kMinTubeRadius || radius_cm > kMaxTubeRadius ||
        length_cm <= 0.0) {
        throw GeometryError("invalid straight tube parameters");
    }
    TubeWorld world;
    world.seed_ = 0;
    world.length_ = length_cm;
    world.du_ = 0.025;
    const auto n = static_cast<size_t>(std::floor(length_cm / world.du_)) + 1;
    world.samples_.resize(n);
    world.tangents_.assign(n, Vec3{0, 0, 1});
    world.radii_.assign(n, radius_cm);
    for (size_t i = 0; i < n; ++i) {
        world.samples_[i] = {0, 0, static_cast<double>(i) * world.du_};
    }
    world.min_radius_ = world.max_radius_ = radius_cm;
    world.controls_ = {Vec3{0, 0, 0}, Vec3{0, 0, length_cm}};
    return world;
}

Trajectory sample_trajectory(const TubeWorld& world,
                             const TrajectoryPlan& plan) {
    if (plan.n_frames < 2) {
        throw PlanError("trajectory plan needs at least 2 frames");
    }
    if (plan.step_cm <= 0.0 || plan.lateral_sigma_cm < 0.0 ||
        plan.angular_sigma_deg < 0.0) {
        throw PlanError("invalid trajectory plan parameters");
    }
    const double end_u = plan.start_offset_cm +
                         static_cast<double>(plan.n_frames - 1) * plan.step_cm;
    if (plan.start_offset_cm < 0.0 ||
        end_u > world.length() - plan.start_offset_cm) {
        throw PlanError("trajectory plan does not fit within the tube: "
                        "needs " +
                        std::to_string(end_u) + " of " +
                        std::to_string(world.length()) + " cm");
    }

    std::mt19937_64 rng(plan.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double ang_rad = plan.angular_sigma_deg * kPi / 180.0;

    Trajectory traj;
    traj.poses.reserve(plan.n_frames);
    Vec3 up{0, 1, 0};
    for (size_t f = 0; f < plan.n_frames; ++f) {
        const double u =
            plan.start_offset_cm + static_cast<double>(f) * plan.step_cm;
        const Vec3 fwd = world.tangent(u);
        if (f == 0) {
            up = any_perpendicular(fwd);
            up = normalized(cross(fwd, cross(up, fwd)));
        }
        // Transport the up vector: remove the new tangent component.
        up = normalized(up - dot(up, fwd) * fwd);
        const Vec3 right = normalized(cross(up, fwd));
        const Vec3 c = world.centerline(u);

        Vec3 pos{};
        bool placed = false;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const double n1 = plan.lateral_sigma_cm * unit(rng);
            const double n2 = plan.lateral_sigma_cm * unit(rng);
            const Vec3 candidate = c + n1 * right + n2 * up;
            const TubeWorld::CurveQuery q = world.nearest(candidate, u);
            if (q.dist < world.radius(q.u)) {
                pos = candidate;
                placed = true;
                break;
            }
        }
        if (!placed) {
            throw PlanError("could not keep frame " + std::to_string(f) +
                            " inside the tube after 100 tries");
        }

        RotationMatrix base;
        for (int r = 0; r < 3; ++r) {
            base(r, 0) = right[r];
            base(r, 1) = up[r];
            base(r, 2) = fwd[r];
        }
        Quaternion q = matrix_to_quat(base);
        const double ex = ang_rad * unit(rng);
        const double ey = ang_rad * unit(rng);
        const double ez = ang_rad * unit(rng);
        q = q * Quaternion::from_axis_angle({1, 0, 0}, ex) *
            Quaternion::from_axis_angle({0, 1, 0}, ey) *
            Quaternion::from_axis_angle({0, 0, 1}, ez);

        traj.poses.push_back({pos, q});
    }
    return traj;
}

Intrinsics default_intrinsics(int resolution) {
    const double scale = static_cast<double>(resolution) / 475.0;
    Intrinsics k;
    k.fx = k.fy = 227.6 * scale;
    k.cx = k.cy = 0.5 * static_cast<double>(resolution);
    return k;
}

DepthMap render_depth(const TubeWorld& world, const Pose& camera,
                      const Intrinsics& k, int resolution,
                      double far_plane_cm) {
    if (resolution <= 0) {
        throw GeometryError("resolution must be positive");
    }
    const TubeWorld::CurveQuery cam_q = world.nearest(camera.translation);
    if (cam_q.dist >= world.radius(cam_q.u)) {
        throw GeometryError("camera is outside the tube: distance " +
                            std::to_string(cam_q.dist) + " cm vs radius " +
                            std::to_string(world.radius(cam_q.u)));
    }
    const double u0 = cam_q.u;

    DepthMap map(resolution, resolution);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < resolution; ++row) {
        for (int col = 0; col < resolution; ++col) {
            const double px = (col + 0.5 - k.cx) / k.fx;
            const double py = (row + 0.5 - k.cy) / k.fy;
            const double inv_len =
                1.0 / std::sqrt(px * px + py * py + 1.0);
            const Vec3 dir = rotate(
                camera.rotation,
                Vec3{px * inv_len, py * inv_len, inv_len});
            const double dz = inv_len;  // camera-space z per unit ray length
            const double t_max = far_plane_cm / dz;

            double hint = u0;
            double t = 0.0;
            double depth = far_plane_cm;
            for (int step = 0; step < kMaxTraceSteps; ++step) {
                const Vec3 p = camera.translation + t * dir;
                const double sd = world.signed_distance(p, hint);
                if (sd >= -kHitTolerance) {
                    depth = std::min(t * dz, far_plane_cm);
                    break;
                }
                t += -sd * kStepSafety;
                if (t > t_max) break;
            }
            map.at(row, col) = static_cast<float>(depth);
        }
    }
    return map;
}

SceneSet export_dataset(const TubeWorld& world,
                        std::span<const TrajectoryPlan> plans,
                        const fs::path& out_dir, const ExportConfig& config) {
    if (plans.empty()) {
        throw PlanError("export needs at least one trajectory plan");
    }
    if (config.far_plane_cm > config.depth_full_scale_cm) {
        throw ConsistencyError("far plane exceeds the depth encoding full "
                               "scale");
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " +
                      ec.message());
    }
    const Intrinsics k =
        config.intrinsics.value_or(default_intrinsics(config.resolution));
    save_intrinsics(k, out_dir / "intrinsics.txt");

    SceneSet scene;
    scene.scene_id = config.scene_id;
    scene.intrinsics = k;

    Json manifest;
    manifest["tool"] = kToolName;
    manifest["version"] = kToolVersion;
    manifest["scene_id"] = config.scene_id;
    manifest["world"] = {{"seed", world.seed()},
                         {"length_cm", sig9(world.length())},
                         {"min_radius_cm", sig9(world.min_radius())},
                         {"max_radius_cm", sig9(world.max_radius())},
                         {"control_points", world.control_points().size()}};
    manifest["resolution"] = config.resolution;
    manifest["intrinsics"] = {{"fx", sig9(k.fx)},
                              {"fy", sig9(k.fy)},
                              {"cx", sig9(k.cx)},
                              {"cy", sig9(k.cy)}};
    manifest["depth_full_scale_cm"] = sig9(config.depth_full_scale_cm);
    manifest["far_plane_cm"] = sig9(config.far_plane_cm);
    Json jplans = Json::array();

    for (size_t i = 0; i < plans.size(); ++i) {
        const TrajectoryPlan& plan = plans[i];
        char id_buf[16];
        std::snprintf(id_buf, sizeof id_buf, "traj_%02zu", i);
        const std::string id(id_buf);

        Trajectory traj = sample_trajectory(world, plan);
        traj.id = id;

        const fs::path traj_dir = out_dir / id;
        const fs::path depth_dir = traj_dir / "depths";
        fs::create_directories(depth_dir, ec);
        if (ec) {
            throw IoError("cannot create " + depth_dir.string() + ": " +
                          ec.message());
        }
        save_pose_file(traj.poses, traj_dir / "poses.txt");

        for (size_t f = 0; f < traj.poses.size(); ++f) {
            const DepthMap map =
                render_depth(world, traj.poses[f], k, config.resolution,
                             config.far_plane_cm);
            char name[16];
            std::snprintf(name, sizeof name, "%04zu.png", f);
            const fs::path png = depth_dir / name;
            save_depth_png(map, png, config.depth_full_scale_cm);
            traj.depth_paths.push_back(png);
        }

        jplans.push_back({{"id", id},
                          {"seed", plan.seed},
                          {"n_frames", plan.n_frames},
                          {"step_cm", sig9(plan.step_cm)},
                          {"lateral_sigma_cm", sig9(plan.lateral_sigma_cm)},
                          {"angular_sigma_deg", sig9(plan.angular_sigma_deg)},
                          {"start_offset_cm", sig9(plan.start_offset_cm)}});
        scene.trajectories.push_back(std::move(traj));
    }
    manifest["plans"] = jplans;
    if (!config.extra.is_null()) {
        manifest["config"] = config.extra;
    }

    std::ofstream mf(out_dir / "manifest.json");
    if (!mf) {
        throw IoError("cannot write manifest in " + out_dir.string());
    }
    mf << manifest.dump(2) << '\n';
    return scene;
}

}  // namespace colobench
