#include <algorithm>
#include <filesystem>
#include <vector>

#include "colobench/errors.hpp"
#include "colobench/io.hpp"

namespace colobench {

namespace fs = std::filesystem;

SceneSet load_scene(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw MissingDataError("scene directory does not exist: " +
                               dir.string());
    }

    SceneSet scene;
    scene.scene_id = dir.filename().string();
    if (scene.scene_id.empty()) {
        scene.scene_id = dir.parent_path().filename().string();
    }

    const fs::path intr = dir / "intrinsics.txt";
    if (fs::exists(intr)) {
        scene.intrinsics = load_intrinsics(intr);
    }

    std::vector<fs::path> traj_dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) traj_dirs.push_back(entry.path());
    }
    std::sort(traj_dirs.begin(), traj_dirs.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });
    if (traj_dirs.empty()) {
        throw MissingDataError("scene has no trajectory subdirectories: " +
                               dir.string());
    }

    for (const fs::path& td : traj_dirs) {
        Trajectory traj;
        traj.id = td.filename().string();

        const fs::path pose_file = td / "poses.txt";
        if (!fs::exists(pose_file)) {
            throw MissingDataError("missing pose file: " +
                                   pose_file.string());
        }
        traj.poses = load_pose_file(pose_file);
        if (traj.poses.empty()) {
            throw MissingDataError("pose file is empty: " +
                                   pose_file.string());
        }

        const fs::path depth_dir = td / "depths";
        if (fs::is_directory(depth_dir)) {
            for (const auto& entry : fs::directory_iterator(depth_dir)) {
                if (entry.path().extension() == ".png") {
                    traj.depth_paths.push_back(entry.path());
                }
            }
            std::sort(traj.depth_paths.begin(), traj.depth_paths.end(),
                      [](const fs::path& a, const fs::path& b) {
                          return a.filename().string() < b.filename().string();
                      });
            if (traj.depth_paths.size() != traj.poses.size()) {
                throw ConsistencyError(
                    "trajectory " + traj.id + " has " +
                    std::to_string(traj.poses.size()) + " poses but " +
                    std::to_string(traj.depth_paths.size()) + " depth maps");
            }
        }
        scene.trajectories.push_back(std::move(traj));
    }
    return scene;
}

}  // namespace colobench
