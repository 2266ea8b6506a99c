#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "colobench/commands.hpp"
#include "colobench/errors.hpp"
#include "colobench/version.hpp"

namespace {

int threads_from_env() {
    const char* env = std::getenv("COLOBENCH_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

void add_common_flags(CLI::App* cmd, colobench::RunConfig& config) {
    cmd->add_option("--threads", config.thread_count,
                    "Worker thread count (0 = all cores; falls back to "
                    "COLOBENCH_THREADS)");
    cmd->add_option("--depth-full-scale", config.depth_full_scale_cm,
                    "Depth PNG full-scale value in cm (default 20)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Depth and camera-pose benchmark evaluator for "
                 "colonoscopy-style trajectory datasets"};
    app.set_version_flag("--version", std::string(colobench::kToolVersion));
    app.require_subcommand(1);

    colobench::RunConfig config;
    config.thread_count = threads_from_env();

    std::string aggregator = "median";
    std::string mode = "rel";
    std::string tie_break;

    auto* eval_depth =
        app.add_subcommand("eval-depth", "Score predicted depth maps "
                                         "against a ground-truth scene");
    eval_depth->add_option("--gt", config.gt_dir, "Ground-truth scene dir")
        ->required();
    eval_depth->add_option("--pred", config.pred_dir,
                           "Prediction scene dir (same layout)")
        ->required();
    eval_depth->add_option("--out", config.out_path, "Report JSON path");
    add_common_flags(eval_depth, config);

    auto* eval_pose = app.add_subcommand(
        "eval-pose", "Score predicted relative poses against ground truth");
    eval_pose->add_option("--gt", config.gt_dir, "Ground-truth scene dir")
        ->required();
    eval_pose
        ->add_option("--pred", config.pred_dir,
                     "Directory of <trajectory>.txt relative-pose files")
        ->required();
    eval_pose->add_option("--out", config.out_path, "Report JSON path");
    eval_pose
        ->add_option("--mode", mode,
                     "Scale fit: rel (relative motions) or abs (absolute "
                     "trajectories)")
        ->check(CLI::IsMember({"rel", "abs"}));
    eval_pose
        ->add_option("--aggregator", aggregator,
                     "Per-frame aggregator: median (default) or mean")
        ->check(CLI::IsMember({"median", "mean"}));
    eval_pose->add_option("--csv-dir", config.csv_dir,
                          "Write per-frame gt/pred position CSVs here");
    add_common_flags(eval_pose, config);

    auto* rank = app.add_subcommand(
        "rank", "Build a leaderboard from a metric table (CSV or JSON)");
    rank->add_option("--task", config.rank_task, "Task number: 1, 2, or 3")
        ->required()
        ->check(CLI::IsMember({1, 2, 3}));
    rank->add_option("--in", config.in_path,
                     "Metric table: CSV (team,scene,metric,value) or JSON")
        ->required();
    rank->add_option("--out", config.out_path,
                     "Output path (default stdout)");
    rank->add_option("--format", config.format,
                     "Output format: json, csv, or markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
    rank->add_option("--tie-break", tie_break,
                     "Comma-separated team order used to resolve exact "
                     "ties (earlier wins)");

    auto* gen = app.add_subcommand(
        "gen", "Generate a synthetic tube scene with depth + pose ground "
               "truth");
    gen->add_option("--out", config.out_path, "Scene output directory")
        ->required();
    gen->add_option("--seed", config.seed, "Master seed");
    gen->add_option("--trajectories", config.gen_trajectories,
                    "Trajectory count (default 3)");
    gen->add_option("--frames", config.gen_frames,
                    "Frames per trajectory (default 200)");
    gen->add_option("--resolution", config.gen_resolution,
                    "Depth map resolution (default 475)");
    gen->add_option("--step", config.gen_step_cm,
                    "Centerline step per frame in cm");
    gen->add_option("--lateral-sigma", config.gen_lateral_sigma_cm,
                    "Lateral perturbation sigma in cm");
    gen->add_option("--angular-sigma", config.gen_angular_sigma_deg,
                    "Angular perturbation sigma in degrees");
    gen->add_option("--scene-id", config.scene_id, "Scene label");
    gen->add_option("--tube-length", config.tube.length_cm,
                    "Tube length in cm (grown to fit the plan)");
    gen->add_option("--tube-radius", config.tube.base_radius_cm,
                    "Base tube radius in cm");
    gen->add_option("--tube-radius-amplitude",
                    config.tube.radius_amplitude_cm,
                    "Radius profile amplitude in cm");
    gen->add_option("--tube-bend", config.tube.bend_max_deg,
                    "Max heading change per control step in degrees");
    add_common_flags(gen, config);

    auto* report = app.add_subcommand(
        "report", "Re-emit a leaderboard JSON as markdown or CSV");
    report->add_option("--in", config.in_path, "Leaderboard JSON path")
        ->required();
    report->add_option("--out", config.out_path,
                       "Output path (default stdout)");
    report->add_option("--format", config.format,
                       "Output format: json, csv, or markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    config.aggregator = aggregator == "mean" ? colobench::Aggregator::mean
                                             : colobench::Aggregator::median;
    if (!tie_break.empty()) {
        std::string token;
        for (char ch : tie_break + ",") {
            if (ch == ',') {
                if (!token.empty()) config.tie_break.push_back(token);
                token.clear();
            } else if (ch != ' ') {
                token.push_back(ch);
            }
        }
    }

    try {
        if (eval_depth->parsed()) {
            config.task = colobench::TaskKind::depth;
            colobench::cmd_eval_depth(config);
        } else if (eval_pose->parsed()) {
            config.task = mode == "abs" ? colobench::TaskKind::pose3
                                        : colobench::TaskKind::pose2;
            colobench::cmd_eval_pose(config);
        } else if (rank->parsed()) {
            config.task = colobench::TaskKind::rank;
            colobench::cmd_rank(config);
        } else if (gen->parsed()) {
            config.task = colobench::TaskKind::gen;
            colobench::cmd_gen(config);
        } else if (report->parsed()) {
            config.task = colobench::TaskKind::report;
            colobench::cmd_report(config);
        }
    } catch (const colobench::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
