#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "colobench/json_util.hpp"
#include "colobench/pose_metrics.hpp"
#include "colobench/synth.hpp"

namespace colobench {

enum class TaskKind { depth, pose2, pose3, rank, gen, report };

const char* to_string(TaskKind t);

/// Everything a batch run needs; embedded verbatim into every report.
struct RunConfig {
    TaskKind task = TaskKind::depth;
    std::filesystem::path gt_dir;
    std::filesystem::path pred_dir;
    std::filesystem::path out_path;
    std::filesystem::path in_path;   // rank/report input
    std::filesystem::path csv_dir;   // optional pose per-frame dumps
    Aggregator aggregator = Aggregator::median;
    double depth_full_scale_cm = kDefaultDepthFullScaleCm;
    uint64_t seed = 0;
    int thread_count = 0;  // 0 = runtime default
    std::string format = "json";
    int rank_task = 1;
    std::vector<std::string> tie_break;

    // gen parameters
    int gen_trajectories = 3;
    int gen_frames = 200;
    int gen_resolution = 475;
    double gen_step_cm = 0.1;
    double gen_lateral_sigma_cm = 0.1;
    double gen_angular_sigma_deg = 1.5;
    std::string scene_id = "synth";
    TubeParams tube;
};

Json run_config_to_json(const RunConfig& config);

/// omp_set_num_threads when n > 0.
void set_thread_count(int n);

/// Command bodies. Validation problems throw colobench::Error subclasses;
/// the CLI front end maps those to exit code 2.
void cmd_eval_depth(const RunConfig& config);
void cmd_eval_pose(const RunConfig& config);
void cmd_rank(const RunConfig& config);
void cmd_gen(const RunConfig& config);
void cmd_report(const RunConfig& config);

}  // namespace colobench
