#include "colobench/commands.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "colobench/depth_metrics.hpp"
#include "colobench/errors.hpp"
#include "colobench/io.hpp"
#include "colobench/ranking.hpp"
#include "colobench/version.hpp"

namespace colobench {

namespace fs = std::filesystem;

const char* to_string(TaskKind t) {
    switch (t) {
        case TaskKind::depth: return "depth";
        case TaskKind::pose2: return "pose2";
        case TaskKind::pose3: return "pose3";
        case TaskKind::rank: return "rank";
        case TaskKind::gen: return "gen";
        case TaskKind::report: return "report";
    }
    return "unknown";
}

void set_thread_count(int n) {
    if (n > 0) omp_set_num_threads(n);
}

Json run_config_to_json(const RunConfig& c) {
    Json j;
    j["task"] = to_string(c.task);
    j["gt"] = c.gt_dir.string();
    j["pred"] = c.pred_dir.string();
    j["out"] = c.out_path.string();
    j["in"] = c.in_path.string();
    j["csv_dir"] = c.csv_dir.string();
    j["aggregator"] = to_string(c.aggregator);
    j["depth_full_scale_cm"] = sig9(c.depth_full_scale_cm);
    j["seed"] = c.seed;
    j["threads"] = c.thread_count;
    j["format"] = c.format;
    if (c.task == TaskKind::rank) {
        j["rank_task"] = c.rank_task;
        j["tie_break"] = c.tie_break;
    }
    if (c.task == TaskKind::gen) {
        j["gen"] = {{"trajectories", c.gen_trajectories},
                    {"frames", c.gen_frames},
                    {"resolution", c.gen_resolution},
                    {"step_cm", sig9(c.gen_step_cm)},
                    {"lateral_sigma_cm", sig9(c.gen_lateral_sigma_cm)},
                    {"angular_sigma_deg", sig9(c.gen_angular_sigma_deg)},
                    {"scene_id", c.scene_id},
                    {"tube_length_cm", sig9(c.tube.length_cm)},
                    {"tube_base_radius_cm", sig9(c.tube.base_radius_cm)},
                    {"tube_radius_amplitude_cm",
                     sig9(c.tube.radius_amplitude_cm)},
                    {"tube_radius_waves", sig9(c.tube.radius_waves)},
                    {"tube_bend_max_deg", sig9(c.tube.bend_max_deg)},
                    {"tube_control_spacing_cm",
                     sig9(c.tube.control_spacing_cm)}};
    }
    return j;
}

namespace {

Json report_header(const RunConfig& config) {
    Json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["config"] = run_config_to_json(config);
    return j;
}

void write_report(const Json& j, const fs::path& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    if (out.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(out.parent_path(), ec);
    }
    std::ofstream f(out);
    if (!f) {
        throw IoError("cannot write report to " + out.string());
    }
    f << j.dump(2) << '\n';
}

std::vector<fs::path> depth_paths_for(const fs::path& scene_dir,
                                      const std::string& traj_id) {
    const fs::path depth_dir = scene_dir / traj_id / "depths";
    if (!fs::is_directory(depth_dir)) {
        throw MissingDataError("prediction scene is missing trajectory '" +
                               traj_id + "' (expected " + depth_dir.string() +
                               ")");
    }
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(depth_dir)) {
        if (entry.path().extension() == ".png") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    return paths;
}

std::vector<DepthMap> load_maps(const std::vector<fs::path>& paths,
                                double full_scale) {
    std::vector<DepthMap> maps(paths.size());
    const auto n = static_cast<int64_t>(paths.size());
#pragma omp parallel for schedule(dynamic)
    for (int64_t i = 0; i < n; ++i) {
        maps[i] = load_depth_png(paths[i], full_scale);
    }
    return maps;
}

}  // namespace

void cmd_eval_depth(const RunConfig& config) {
    set_thread_count(config.thread_count);
    const SceneSet gt = load_scene(config.gt_dir);

    Json report = report_header(config);
    report["task"] = "depth";

    std::vector<DepthMetricReport> traj_reports;
    Json jtrajs = Json::array();
    for (const Trajectory& traj : gt.trajectories) {
        if (traj.depth_paths.empty()) {
            throw MissingDataError("ground-truth trajectory '" + traj.id +
                                   "' has no depth maps");
        }
        const std::vector<fs::path> pred_paths =
            depth_paths_for(config.pred_dir, traj.id);
        if (pred_paths.size() != traj.depth_paths.size()) {
            throw ConsistencyError(
                "trajectory '" + traj.id + "' has " +
                std::to_string(traj.depth_paths.size()) +
                " ground-truth frames but " +
                std::to_string(pred_paths.size()) + " predictions");
        }
        // One trajectory pair in memory at a time.
        const std::vector<DepthMap> gt_maps =
            load_maps(traj.depth_paths, config.depth_full_scale_cm);
        const std::vector<DepthMap> pred_maps =
            load_maps(pred_paths, config.depth_full_scale_cm);
        DepthMetricReport r =
            evaluate_depth_trajectory(gt_maps, pred_maps, traj.id);

        Json jt;
        jt["id"] = traj.id;
        jt["frames"] = r.per_frame.size();
        jt["scale"] = sig9(r.scale.s);
        jt["l1_cm"] = sig9(r.l1);
        jt["rel"] = sig9(r.rel);
        jt["rmse_cm"] = sig9(r.rmse);
        Json pf;
        std::vector<double> l1s, rels, rmses;
        for (const auto& f : r.per_frame) {
            l1s.push_back(f.l1);
            rels.push_back(f.rel);
            rmses.push_back(f.rmse);
        }
        pf["l1_cm"] = sig9_array(l1s);
        pf["rel"] = sig9_array(rels);
        pf["rmse_cm"] = sig9_array(rmses);
        jt["per_frame"] = pf;
        jtrajs.push_back(std::move(jt));
        traj_reports.push_back(std::move(r));
    }

    const SceneDepthSummary summary = aggregate_scene(traj_reports);
    report["scene"] = {{"id", gt.scene_id},
                       {"l1_cm", sig9(summary.l1)},
                       {"rel", sig9(summary.rel)},
                       {"rmse_cm", sig9(summary.rmse)}};
    report["trajectories"] = jtrajs;
    write_report(report, config.out_path);

    std::printf("scene %s: L1 %.6g cm, Rel %.6g, RMSE %.6g cm (%zu "
                "trajectories)\n",
                gt.scene_id.c_str(), summary.l1, summary.rel, summary.rmse,
                traj_reports.size());
}

void cmd_eval_pose(const RunConfig& config) {
    set_thread_count(config.thread_count);
    const bool task2 = config.task == TaskKind::pose2;
    const SceneSet gt = load_scene(config.gt_dir);

    Json report = report_header(config);
    report["task"] = task2 ? "pose2" : "pose3";

    double sum_ate = 0, sum_rte = 0, sum_rot = 0;
    Json jtrajs = Json::array();
    for (const Trajectory& traj : gt.trajectories) {
        const fs::path pred_file = config.pred_dir / (traj.id + ".txt");
        if (!fs::exists(pred_file)) {
            throw MissingDataError("prediction for trajectory '" + traj.id +
                                   "' not found: " + pred_file.string());
        }
        RelativeSequence rels;
        rels.source = RelSource::prediction;
        rels.rels = load_prediction_rel(pred_file, traj.frame_count());

        const PoseMetricReport r =
            task2 ? evaluate_pose_task2(traj.poses, rels, config.aggregator)
                  : evaluate_pose_task3(traj.poses, rels, config.aggregator);

        Json jt;
        jt["id"] = traj.id;
        jt["frames"] = traj.frame_count();
        jt["scale"] = {{"s", sig9(r.scale.s)},
                       {"mode", to_string(r.scale.mode)}};
        jt["ate_cm"] = sig9(r.ate_cm);
        if (task2) jt["ate_dm"] = sig9(r.ate_cm / 10.0);
        jt["rte_cm"] = sig9(r.rte_cm);
        jt["rot_deg"] = sig9(r.rot_deg);
        jt["per_frame"] = {{"ate_cm", sig9_array(r.per_frame_ate)},
                           {"rte_cm", sig9_array(r.per_frame_rte)},
                           {"rot_deg", sig9_array(r.per_frame_rot)}};
        jtrajs.push_back(std::move(jt));

        sum_ate += r.ate_cm;
        sum_rte += r.rte_cm;
        sum_rot += r.rot_deg;

        if (!config.csv_dir.empty()) {
            std::error_code ec;
            fs::create_directories(config.csv_dir, ec);
            const fs::path csv = config.csv_dir / (traj.id + ".csv");
            std::ofstream f(csv);
            if (!f) throw IoError("cannot write " + csv.string());
            f << "frame,gt_x,gt_y,gt_z,pred_x,pred_y,pred_z\n";
            for (size_t i = 0; i < r.gt_xyz.size(); ++i) {
                f << i;
                for (double v : r.gt_xyz[i]) f << ',' << fmt_shortest(v);
                for (double v : r.pred_xyz[i]) f << ',' << fmt_shortest(v);
                f << '\n';
            }
        }
    }

    const auto n = static_cast<double>(gt.trajectories.size());
    Json jscene;
    jscene["id"] = gt.scene_id;
    jscene["ate_cm"] = sig9(sum_ate / n);
    if (task2) jscene["ate_dm"] = sig9(sum_ate / n / 10.0);
    jscene["rte_cm"] = sig9(sum_rte / n);
    jscene["rot_deg"] = sig9(sum_rot / n);
    report["scene"] = jscene;
    report["trajectories"] = jtrajs;
    write_report(report, config.out_path);

    std::printf("scene %s: ATE %.6g cm, RTE %.6g cm, ROT %.6g deg (%s over "
                "frames)\n",
                gt.scene_id.c_str(), sum_ate / n, sum_rte / n, sum_rot / n,
                to_string(config.aggregator));
}

void cmd_rank(const RunConfig& config) {
    if (config.in_path.empty()) {
        throw MissingDataError("rank needs an input metric table (--in)");
    }
    std::ifstream f(config.in_path);
    if (!f) {
        throw IoError("cannot open metric table: " + config.in_path.string());
    }
    std::stringstream buffer;
    buffer << f.rdbuf();

    MetricTable table;
    if (config.in_path.extension() == ".json") {
        try {
            table = table_from_json(Json::parse(buffer.str()));
        } catch (const Json::exception& e) {
            throw FormatError("invalid metric table JSON: " +
                              std::string(e.what()));
        }
    } else {
        table = table_from_csv(buffer.str());
    }

    Leaderboard board;
    switch (config.rank_task) {
        case 1: board = rank_points_task1(table, config.tie_break); break;
        case 2: board = rank_task2(table); break;
        case 3: board = rank_task3(table); break;
        default:
            throw ConsistencyError("rank task must be 1, 2, or 3");
    }

    BoardFormat fmt;
    if (config.format == "json") fmt = BoardFormat::json;
    else if (config.format == "csv") fmt = BoardFormat::csv;
    else if (config.format == "markdown" || config.format == "md")
        fmt = BoardFormat::markdown;
    else
        throw ConsistencyError("unknown format '" + config.format + "'");

    const std::string doc = emit_leaderboard(board, fmt);
    if (config.out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(config.out_path);
        if (!out) {
            throw IoError("cannot write " + config.out_path.string());
        }
        out << doc;
    }
}

void cmd_gen(const RunConfig& config) {
    set_thread_count(config.thread_count);
    if (config.out_path.empty()) {
        throw MissingDataError("gen needs an output directory (--out)");
    }
    if (config.gen_trajectories < 1 || config.gen_frames < 2) {
        throw PlanError("gen needs at least 1 trajectory of 2 frames");
    }

    TubeParams tube = config.tube;
    const double start_offset = 2.0;
    const double span = 2.0 * start_offset +
                        static_cast<double>(config.gen_frames - 1) *
                            config.gen_step_cm +
                        2.0;
    tube.length_cm = std::max(tube.length_cm, span);

    const TubeWorld world = make_tube(tube, config.seed);

    std::vector<TrajectoryPlan> plans;
    for (int i = 0; i < config.gen_trajectories; ++i) {
        TrajectoryPlan plan;
        plan.n_frames = static_cast<size_t>(config.gen_frames);
        plan.step_cm = config.gen_step_cm;
        plan.lateral_sigma_cm = config.gen_lateral_sigma_cm;
        plan.angular_sigma_deg = config.gen_angular_sigma_deg;
        plan.start_offset_cm = start_offset;
        plan.seed = mix_seed(config.seed, static_cast<uint64_t>(i) + 1);
        plans.push_back(plan);
    }

    ExportConfig ex;
    ex.scene_id = config.scene_id;
    ex.resolution = config.gen_resolution;
    ex.depth_full_scale_cm = config.depth_full_scale_cm;
    ex.far_plane_cm = std::min(20.0, config.depth_full_scale_cm);
    ex.extra = run_config_to_json(config);

    export_dataset(world, plans, config.out_path, ex);
    std::printf("wrote %d trajectories x %d frames at %dx%d to %s\n",
                config.gen_trajectories, config.gen_frames,
                config.gen_resolution, config.gen_resolution,
                config.out_path.string().c_str());
}

void cmd_report(const RunConfig& config) {
    if (config.in_path.empty()) {
        throw MissingDataError("report needs an input leaderboard (--in)");
    }
    std::ifstream f(config.in_path);
    if (!f) {
        throw IoError("cannot open leaderboard: " + config.in_path.string());
    }
    Leaderboard board;
    try {
        board = leaderboard_from_json(Json::parse(f));
    } catch (const Json::exception& e) {
        throw FormatError("invalid leaderboard JSON: " +
                          std::string(e.what()));
    }

    BoardFormat fmt;
    if (config.format == "json") fmt = BoardFormat::json;
    else if (config.format == "csv") fmt = BoardFormat::csv;
    else if (config.format == "markdown" || config.format == "md")
        fmt = BoardFormat::markdown;
    else
        throw ConsistencyError("unknown format '" + config.format + "'");

    const std::string doc = emit_leaderboard(board, fmt);
    if (config.out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(config.out_path);
        if (!out) {
            throw IoError("cannot write " + config.out_path.string());
        }
        out << doc;
    }
}

}  // namespace colobench
