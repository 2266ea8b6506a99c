#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colobench/json_util.hpp"

namespace colobench {

/// Complete team x scene x metric grid of metric values.
struct MetricTable {
    std::vector<std::string> teams;
    std::vector<std::string> scenes;
    std::vector<std::string> metrics;
    /// Keyed "team/scene/metric".
    std::map<std::string, double> cells;
    /// Per metric; metrics absent from the map default to lower-is-better.
    std::map<std::string, bool> lower_is_better;

    static std::string key(const std::string& team, const std::string& scene,
                           const std::string& metric) {
        return team + "/" + scene + "/" + metric;
    }

    void set(const std::string& team, const std::string& scene,
             const std::string& metric, double value);

    /// Missing cell -> ConsistencyError.
    double cell(const std::string& team, const std::string& scene,
                const std::string& metric) const;

    bool metric_lower_is_better(const std::string& metric) const;

    /// Checks the grid is complete and every value finite.
    void validate() const;
};

struct TieNote {
    std::string scene;
    std::string metric;
    std::vector<std::string> teams;
};

struct LeaderboardEntry {
    std::string team;
    /// Task 1: rank points; task 2: weighted RTE. Unused for task 3.
    double score = 0;
    /// Task 3: {"ate","rte","rot"} means.
    std::map<std::string, double> scores;
    /// Task 1: points per scene; task 2: RTE per scene.
    std::map<std::string, double> per_scene;
    /// Task 3: per-scene metric triples.
    std::map<std::string, std::map<std::string, double>> per_scene_triple;
    /// Task 3: per-metric count of scenes this team wins outright.
    std::map<std::string, int> wins;
    /// "scene/metric" categories in which this team was exactly tied.
    std::vector<std::string> ties;
};

struct Leaderboard {
    int task = 1;
    std::vector<LeaderboardEntry> entries;  // sorted by the task's rule
    std::vector<TieNote> tie_notes;
    std::string aggregator;                  // scoring rule name
    std::map<std::string, double> weights;   // task 2 scene weights
    std::optional<MetricTable> table;        // source grid, kept for display
};

/// Rank-point scoring: per (scene, metric) category the best of n teams
/// receives n points, the next n-1, and so on; the final score sums all
/// categories. Exact ties share the mean of the contested points unless
/// `tie_break_order` lists the tied teams, in which case earlier listed
/// teams place first. Entries are sorted by descending score.
Leaderboard rank_points_task1(
    const MetricTable& table,
    const std::vector<std::string>& tie_break_order = {});

inline const std::vector<std::string>& task2_scene_names() {
    static const std::vector<std::string> names{"SynColI", "SynColII",
                                                "SynColIII"};
    return names;
}

/// Weighted mean RTE with the unseen scene counted twice:
/// (RTE_I + RTE_II + 2 * RTE_III) / 4. Missing scene -> ConsistencyError.
double score_task2(const std::map<std::string, double>& per_scene_rte,
                   const std::map<std::string, double>& weights = {
                       {"SynColI", 1.0}, {"SynColII", 1.0}, {"SynColIII", 2.0}});

/// Table must carry metric "RTE" for the three synthetic scenes.
/// Entries sorted by ascending score.
Leaderboard rank_task2(const MetricTable& table);

struct TaskThreeScore {
    double ate = 0;
    double rte = 0;
    double rot = 0;
};

/// Unweighted per-metric means over the seven real sequences ("1".."7").
/// Missing scene -> ConsistencyError.
TaskThreeScore score_task3(
    const std::map<std::string, TaskThreeScore>& per_scene);

/// Table must carry metrics ATE/RTE/ROT for scenes "1".."7". Primary sort
/// key is mean ATE ascending; per-scene win counts are reported alongside.
Leaderboard rank_task3(const MetricTable& table);

enum class BoardFormat { json, csv, markdown };

/// Deterministic, byte-stable serialization.
std::string emit_leaderboard(const Leaderboard& board, BoardFormat format);

Json leaderboard_to_json(const Leaderboard& board);
Leaderboard leaderboard_from_json(const Json& j);

MetricTable table_from_json(const Json& j);
/// Long-format CSV with header "team,scene,metric,value".
MetricTable table_from_csv(const std::string& text);

}  // namespace colobench
