#include "colobench/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "colobench/errors.hpp"

namespace colobench {

void MetricTable::set(const std::string& team, const std::string& scene,
                      const std::string& metric, double value) {
    if (std::find(teams.begin(), teams.end(), team) == teams.end()) {
        teams.push_back(team);
    }
    if (std::find(scenes.begin(), scenes.end(), scene) == scenes.end()) {
        scenes.push_back(scene);
    }
    if (std::find(metrics.begin(), metrics.end(), metric) == metrics.end()) {
        metrics.push_back(metric);
    }
    cells[key(team, scene, metric)] = value;
}

double MetricTable::cell(const std::string& team, const std::string& scene,
                         const std::string& metric) const {
    const auto it = cells.find(key(team, scene, metric));
    if (it == cells.end()) {
        throw ConsistencyError("metric table is missing cell " +
                               key(team, scene, metric));
    }
    return it->second;
}

bool MetricTable::metric_lower_is_better(const std::string& metric) const {
    const auto it = lower_is_better.find(metric);
    return it == lower_is_better.end() ? true : it->second;
}

void MetricTable::validate() const {
    if (teams.empty() || scenes.empty() || metrics.empty()) {
        throw ConsistencyError("metric table is empty");
    }
    if (std::set<std::string>(teams.begin(), teams.end()).size() !=
        teams.size()) {
        throw ConsistencyError("duplicate team labels in metric table");
    }
    for (const auto& t : teams) {
        for (const auto& s : scenes) {
            for (const auto& m : metrics) {
                const double v = cell(t, s, m);
                if (!std::isfinite(v)) {
                    throw ConsistencyError("non-finite value in cell " +
                                           key(t, s, m));
                }
            }
        }
    }
}

namespace {

int tie_break_rank(const std::vector<std::string>& order,
                   const std::string& team) {
    const auto it = std::find(order.begin(), order.end(), team);
    return it == order.end() ? -1
                             : static_cast<int>(it - order.begin());
}

}  // namespace

Leaderboard rank_points_task1(const MetricTable& table,
                              const std::vector<std::string>& tie_break_order) {
    table.validate();
    const int n = static_cast<int>(table.teams.size());

    std::map<std::string, LeaderboardEntry> by_team;
    for (const auto& t : table.teams) {
        by_team[t].team = t;
        for (const auto& s : table.scenes) by_team[t].per_scene[s] = 0.0;
    }

    Leaderboard board;
    board.task = 1;
    board.aggregator = "rank_points";
    board.table = table;

    for (const auto& scene : table.scenes) {
        for (const auto& metric : table.metrics) {
            std::vector<std::pair<double, std::string>> vals;
            vals.reserve(table.teams.size());
            for (const auto& team : table.teams) {
                vals.emplace_back(table.cell(team, scene, metric), team);
            }
            const bool asc = table.metric_lower_is_better(metric);
            std::sort(vals.begin(), vals.end(),
                      [asc](const auto& a, const auto& b) {
                          if (a.first != b.first) {
                              return asc ? a.first < b.first
                                         : a.first > b.first;
                          }
                          return a.second < b.second;
                      });

            for (size_t i = 0; i < vals.size();) {
                size_t j = i;
                while (j < vals.size() && vals[j].first == vals[i].first) ++j;
                const size_t k = j - i;  // group size
                if (k == 1) {
                    by_team[vals[i].second].per_scene[scene] +=
                        static_cast<double>(n) - static_cast<double>(i);
                    i = j;
                    continue;
                }
                std::vector<std::string> group;
                for (size_t g = i; g < j; ++g) group.push_back(vals[g].second);
                std::sort(group.begin(), group.end());
                board.tie_notes.push_back({scene, metric, group});
                for (const auto& team : group) {
                    by_team[team].ties.push_back(scene + "/" + metric);
                }

                const bool resolvable = std::all_of(
                    group.begin(), group.end(), [&](const std::string& t) {
                        return tie_break_rank(tie_break_order, t) >= 0;
                    });
                if (resolvable) {
                    std::sort(group.begin(), group.end(),
                              [&](const std::string& a, const std::string& b) {
                                  return tie_break_rank(tie_break_order, a) <
                                         tie_break_rank(tie_break_order, b);
                              });
                    for (size_t g = 0; g < group.size(); ++g) {
                        by_team[group[g]].per_scene[scene] +=
                            static_cast<double>(n) -
                            static_cast<double>(i + g);
                    }
                } else {
                    // Mean of the contested point values keeps the category
                    // total at n(n+1)/2 regardless of input order.
                    const double mean_points =
                        static_cast<double>(n) - static_cast<double>(i) -
                        (static_cast<double>(k) - 1.0) / 2.0;
                    for (const auto& team : group) {
                        by_team[team].per_scene[scene] += mean_points;
                    }
                }
                i = j;
            }
        }
    }

    for (auto& [team, entry] : by_team) {
        entry.score = 0.0;
        for (const auto& [scene, pts] : entry.per_scene) entry.score += pts;
        std::sort(entry.ties.begin(), entry.ties.end());
        entry.ties.erase(std::unique(entry.ties.begin(), entry.ties.end()),
                         entry.ties.end());
        board.entries.push_back(entry);
    }
    std::sort(board.entries.begin(), board.entries.end(),
              [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                  if (a.score != b.score) return a.score > b.score;
                  return a.team < b.team;
              });
    return board;
}

double score_task2(const std::map<std::string, double>& per_scene_rte,
                   const std::map<std::string, double>& weights) {
    double num = 0.0, den = 0.0;
    for (const auto& [scene, w] : weights) {
        const auto it = per_scene_rte.find(scene);
        if (it == per_scene_rte.end()) {
            throw ConsistencyError("missing scene '" + scene +
                                   "' in task-2 score input");
        }
        num += w * it->second;
        den += w;
    }
    for (const auto& [scene, v] : per_scene_rte) {
        if (weights.find(scene) == weights.end()) {
            throw ConsistencyError("unexpected scene '" + scene +
                                   "' in task-2 score input");
        }
    }
    return num / den;
}

Leaderboard rank_task2(const MetricTable& table) {
    table.validate();
    if (std::find(table.metrics.begin(), table.metrics.end(), "RTE") ==
        table.metrics.end()) {
        throw ConsistencyError("task-2 table must contain metric 'RTE'");
    }

    Leaderboard board;
    board.task = 2;
    board.aggregator = "weighted_mean_rte";
    board.weights = {{"SynColI", 1.0}, {"SynColII", 1.0}, {"SynColIII", 2.0}};
    board.table = table;

    for (const auto& team : table.teams) {
        LeaderboardEntry e;
        e.team = team;
        for (const auto& scene : task2_scene_names()) {
            e.per_scene[scene] = table.cell(team, scene, "RTE");
        }
        e.score = score_task2(e.per_scene, board.weights);
        board.entries.push_back(std::move(e));
    }
    std::sort(board.entries.begin(), board.entries.end(),
              [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                  if (a.score != b.score) return a.score < b.score;
                  return a.team < b.team;
              });
    return board;
}

TaskThreeScore score_task3(
    const std::map<std::string, TaskThreeScore>& per_scene) {
    TaskThreeScore sum;
    int count = 0;
    for (int i = 1; i <= 7; ++i) {
        const std::string scene = std::to_string(i);
        const auto it = per_scene.find(scene);
        if (it == per_scene.end()) {
            throw ConsistencyError("missing scene '" + scene +
                                   "' in task-3 score input");
        }
        sum.ate += it->second.ate;
        sum.rte += it->second.rte;
        sum.rot += it->second.rot;
        ++count;
    }
    if (per_scene.size() != 7) {
        throw ConsistencyError("task-3 score input must hold exactly the "
                               "seven real sequences");
    }
    sum.ate /= count;
    sum.rte /= count;
    sum.rot /= count;
    return sum;
}

Leaderboard rank_task3(const MetricTable& table) {
    table.validate();
    for (const char* m : {"ATE", "RTE", "ROT"}) {
        if (std::find(table.metrics.begin(), table.metrics.end(), m) ==
            table.metrics.end()) {
            throw ConsistencyError(std::string("task-3 table must contain "
                                               "metric '") +
                                   m + "'");
        }
    }

    Leaderboard board;
    board.task = 3;
    board.aggregator = "mean_per_metric";
    board.table = table;

    for (const auto& team : table.teams) {
        LeaderboardEntry e;
        e.team = team;
        double ate = 0, rte = 0, rot = 0;
        for (const auto& scene : table.scenes) {
            const double a = table.cell(team, scene, "ATE");
            const double r = table.cell(team, scene, "RTE");
            const double o = table.cell(team, scene, "ROT");
            e.per_scene_triple[scene] = {{"ate", a}, {"rte", r}, {"rot", o}};
            ate += a;
            rte += r;
            rot += o;
        }
        const auto n = static_cast<double>(table.scenes.size());
        e.scores = {{"ate", ate / n}, {"rte", rte / n}, {"rot", rot / n}};
        e.wins = {{"ate", 0}, {"rte", 0}, {"rot", 0}};
        board.entries.push_back(std::move(e));
    }

    // Outright per-scene wins, reported alongside the mean-ATE ordering.
    for (const auto& scene : table.scenes) {
        for (const char* m : {"ATE", "RTE", "ROT"}) {
            std::string best_team;
            double best = 0;
            bool unique = false;
            for (const auto& team : table.teams) {
                const double v = table.cell(team, scene, m);
                if (best_team.empty() || v < best) {
                    best_team = team;
                    best = v;
                    unique = true;
                } else if (v == best) {
                    unique = false;
                }
            }
            if (unique) {
                for (auto& e : board.entries) {
                    if (e.team == best_team) {
                        std::string lower(m);
                        for (char& c : lower) c = static_cast<char>(
                            std::tolower(static_cast<unsigned char>(c)));
                        e.wins[lower] += 1;
                    }
                }
            }
        }
    }

    std::sort(board.entries.begin(), board.entries.end(),
              [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
                  const double x = a.scores.at("ate");
                  const double y = b.scores.at("ate");
                  if (x != y) return x < y;
                  return a.team < b.team;
              });
    return board;
}

namespace {

Json table_to_json(const MetricTable& t) {
    Json j;
    j["teams"] = t.teams;
    j["scenes"] = t.scenes;
    j["metrics"] = t.metrics;
    Json cells = Json::object();
    for (const auto& team : t.teams) {
        Json per_scene = Json::object();
        for (const auto& scene : t.scenes) {
            Json per_metric = Json::object();
            for (const auto& metric : t.metrics) {
                per_metric[metric] = sig9(t.cell(team, scene, metric));
            }
            per_scene[scene] = per_metric;
        }
        cells[team] = per_scene;
    }
    j["cells"] = cells;
    Json dirs = Json::object();
    for (const auto& m : t.metrics) {
        dirs[m] = t.metric_lower_is_better(m);
    }
    j["lower_is_better"] = dirs;
    return j;
}

}  // namespace

MetricTable table_from_json(const Json& j) {
    MetricTable t;
    for (const auto& team : j.at("teams")) {
        for (const auto& scene : j.at("scenes")) {
            for (const auto& metric : j.at("metrics")) {
                const double v = j.at("cells")
                                     .at(team.get<std::string>())
                                     .at(scene.get<std::string>())
                                     .at(metric.get<std::string>())
                                     .get<double>();
                t.set(team, scene, metric, v);
            }
        }
    }
    if (j.contains("lower_is_better")) {
        for (const auto& [m, v] : j.at("lower_is_better").items()) {
            t.lower_is_better[m] = v.get<bool>();
        }
    }
    return t;
}

MetricTable table_from_csv(const std::string& text) {
    MetricTable t;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) {
            // trim
            const auto b = field.find_first_not_of(" \t");
            const auto e = field.find_last_not_of(" \t");
            fields.push_back(b == std::string::npos
                                 ? std::string()
                                 : field.substr(b, e - b + 1));
        }
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "team" ||
                fields[1] != "scene" || fields[2] != "metric" ||
                fields[3] != "value") {
                throw FormatError("metric CSV must start with header "
                                  "'team,scene,metric,value'");
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 4) {
            throw FormatError("metric CSV line " + std::to_string(lineno) +
                              " must have 4 fields");
        }
        char* end = nullptr;
        const double v = std::strtod(fields[3].c_str(), &end);
        if (end != fields[3].c_str() + fields[3].size() ||
            fields[3].empty()) {
            throw FormatError("unparsable value at metric CSV line " +
                              std::to_string(lineno));
        }
        t.set(fields[0], fields[1], fields[2], v);
    }
    return t;
}

Json leaderboard_to_json(const Leaderboard& board) {
    Json j;
    j["task"] = board.task;
    Json config;
    config["aggregator"] = board.aggregator;
    Json weights = Json::object();
    for (const auto& [k, v] : board.weights) weights[k] = sig9(v);
    config["weights"] = weights;
    j["config"] = config;

    Json entries = Json::array();
    for (const auto& e : board.entries) {
        Json je;
        je["team"] = e.team;
        if (!e.scores.empty()) {
            Json scores = Json::object();
            for (const auto& [k, v] : e.scores) scores[k] = sig9(v);
            je["scores"] = scores;
        } else {
            je["score"] = sig9(e.score);
        }
        if (!e.per_scene.empty()) {
            Json ps = Json::object();
            for (const auto& [k, v] : e.per_scene) ps[k] = sig9(v);
            je["per_scene"] = ps;
        }
        if (!e.per_scene_triple.empty()) {
            Json ps = Json::object();
            for (const auto& [scene, triple] : e.per_scene_triple) {
                Json jt = Json::object();
                for (const auto& [k, v] : triple) jt[k] = sig9(v);
                ps[scene] = jt;
            }
            je["per_scene"] = ps;
        }
        if (!e.wins.empty()) {
            Json w = Json::object();
            for (const auto& [k, v] : e.wins) w[k] = v;
            je["wins"] = w;
        }
        je["ties"] = e.ties;
        entries.push_back(je);
    }
    j["entries"] = entries;

    Json notes = Json::array();
    for (const auto& n : board.tie_notes) {
        notes.push_back(
            {{"scene", n.scene}, {"metric", n.metric}, {"teams", n.teams}});
    }
    j["tie_notes"] = notes;
    if (board.table) {
        j["table"] = table_to_json(*board.table);
    }
    return j;
}

Leaderboard leaderboard_from_json(const Json& j) {
    Leaderboard board;
    board.task = j.at("task").get<int>();
    board.aggregator = j.at("config").at("aggregator").get<std::string>();
    for (const auto& [k, v] : j.at("config").at("weights").items()) {
        board.weights[k] = v.get<double>();
    }
    for (const auto& je : j.at("entries")) {
        LeaderboardEntry e;
        e.team = je.at("team").get<std::string>();
        if (je.contains("score")) e.score = je.at("score").get<double>();
        if (je.contains("scores")) {
            for (const auto& [k, v] : je.at("scores").items()) {
                e.scores[k] = v.get<double>();
            }
        }
        if (je.contains("per_scene")) {
            for (const auto& [scene, v] : je.at("per_scene").items()) {
                if (v.is_object()) {
                    for (const auto& [m, mv] : v.items()) {
                        e.per_scene_triple[scene][m] = mv.get<double>();
                    }
                } else {
                    e.per_scene[scene] = v.get<double>();
                }
            }
        }
        if (je.contains("wins")) {
            for (const auto& [k, v] : je.at("wins").items()) {
                e.wins[k] = v.get<int>();
            }
        }
        if (je.contains("ties")) {
            for (const auto& t : je.at("ties")) {
                e.ties.push_back(t.get<std::string>());
            }
        }
        board.entries.push_back(std::move(e));
    }
    if (j.contains("tie_notes")) {
        for (const auto& n : j.at("tie_notes")) {
            TieNote note;
            note.scene = n.at("scene").get<std::string>();
            note.metric = n.at("metric").get<std::string>();
            for (const auto& t : n.at("teams")) {
                note.teams.push_back(t.get<std::string>());
            }
            board.tie_notes.push_back(std::move(note));
        }
    }
    if (j.contains("table")) {
        board.table = table_from_json(j.at("table"));
    }
    return board;
}

namespace {

std::string emit_csv(const Leaderboard& board) {
    std::ostringstream out;
    if (board.task == 3) {
        out << "rank,team,ate,rte,rot,ate_wins,rte_wins,rot_wins\n";
        int rank = 1;
        for (const auto& e : board.entries) {
            out << rank++ << ',' << e.team << ','
                << fmt_shortest(sig9(e.scores.at("ate"))) << ','
                << fmt_shortest(sig9(e.scores.at("rte"))) << ','
                << fmt_shortest(sig9(e.scores.at("rot"))) << ','
                << e.wins.at("ate") << ',' << e.wins.at("rte") << ','
                << e.wins.at("rot") << '\n';
        }
        return out.str();
    }
    out << "rank,team,score";
    std::vector<std::string> scene_cols;
    if (!board.entries.empty()) {
        for (const auto& [scene, v] : board.entries.front().per_scene) {
            scene_cols.push_back(scene);
            out << ',' << scene;
        }
    }
    out << '\n';
    int rank = 1;
    for (const auto& e : board.entries) {
        out << rank++ << ',' << e.team << ','
            << fmt_shortest(sig9(e.score));
        for (const auto& scene : scene_cols) {
            out << ',' << fmt_shortest(sig9(e.per_scene.at(scene)));
        }
        out << '\n';
    }
    return out.str();
}

std::string emit_markdown(const Leaderboard& board) {
    std::ostringstream out;
    if (board.task == 1 && board.table) {
        const MetricTable& t = *board.table;
        out << "| Team |";
        for (const auto& s : t.scenes) {
            for (const auto& m : t.metrics) out << ' ' << s << ' ' << m
                                                << " |";
        }
        out << " \xCE\xA31 |\n|---|";
        for (size_t i = 0; i < t.scenes.size() * t.metrics.size(); ++i) {
            out << "---|";
        }
        out << "---|\n";
        for (const auto& e : board.entries) {
            out << "| " << e.team << " |";
            for (const auto& s : t.scenes) {
                for (const auto& m : t.metrics) {
                    out << ' ' << fmt_fixed(t.cell(e.team, s, m), 3) << " |";
                }
            }
            out << ' ' << fmt_shortest(e.score) << " |\n";
        }
        return out.str();
    }
    if (board.task == 2) {
        out << "| Team |";
        for (const auto& s : task2_scene_names()) out << ' ' << s << " RTE |";
        out << " \xCE\xA32 |\n|---|---|---|---|---|\n";
        for (const auto& e : board.entries) {
            out << "| " << e.team << " |";
            for (const auto& s : task2_scene_names()) {
                out << ' ' << fmt_fixed(e.per_scene.at(s), 3) << " |";
            }
            out << ' ' << fmt_fixed(e.score, 3) << " |\n";
        }
        return out.str();
    }
    if (board.task == 3) {
        std::vector<std::string> scenes;
        if (!board.entries.empty()) {
            for (const auto& [scene, v] :
                 board.entries.front().per_scene_triple) {
                scenes.push_back(scene);
            }
        }
        for (const std::string metric : {"ate", "rte", "rot"}) {
            std::string title = metric;
            for (char& c : title) c = static_cast<char>(
                std::toupper(static_cast<unsigned char>(c)));
            out << "### " << title << "\n\n| Team |";
            for (const auto& s : scenes) out << ' ' << s << " |";
            out << " mean |\n|---|";
            for (size_t i = 0; i <= scenes.size(); ++i) out << "---|";
            out << '\n';
            for (const auto& e : board.entries) {
                out << "| " << e.team << " |";
                for (const auto& s : scenes) {
                    out << ' '
                        << fmt_shortest(
                               sig9(e.per_scene_triple.at(s).at(metric)))
                        << " |";
                }
                out << ' ' << fmt_fixed(e.scores.at(metric), 2) << " |\n";
            }
            out << '\n';
        }
        return out.str();
    }
    // Task 1 without a retained table: points per scene only.
    out << "| Team |";
    std::vector<std::string> scene_cols;
    if (!board.entries.empty()) {
        for (const auto& [scene, v] : board.entries.front().per_scene) {
            scene_cols.push_back(scene);
            out << ' ' << scene << " |";
        }
    }
    out << " \xCE\xA31 |\n|---|";
    for (size_t i = 0; i <= scene_cols.size(); ++i) out << "---|";
    out << '\n';
    for (const auto& e : board.entries) {
        out << "| " << e.team << " |";
        for (const auto& s : scene_cols) {
            out << ' ' << fmt_shortest(e.per_scene.at(s)) << " |";
        }
        out << ' ' << fmt_shortest(e.score) << " |\n";
    }
    return out.str();
}

}  // namespace

std::string emit_leaderboard(const Leaderboard& board, BoardFormat format) {
    switch (format) {
        case BoardFormat::json:
            return leaderboard_to_json(board).dump(2) + "\n";
        case BoardFormat::csv:
            return emit_csv(board);
        case BoardFormat::markdown:
            return emit_markdown(board);
    }
    throw Error("unknown leaderboard format");
}

}  // namespace colobench
