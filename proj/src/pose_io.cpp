#include <array>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "colobench/errors.hpp"
#include "colobench/io.hpp"

namespace colobench {

namespace {

std::string fmt_double(double v) {
    std::array<char, 64> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

bool is_comment_or_blank(const std::string& line) {
    for (char ch : line) {
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        return ch == '#';
    }
    return true;
}

/// Splits a line on whitespace/commas and parses every token as a double.
/// Returns false on any unparsable token.
bool parse_numbers(const std::string& line, std::vector<double>& out) {
    out.clear();
    std::string cleaned = line;
    for (char& ch : cleaned) {
        if (ch == ',') ch = ' ';
    }
    std::istringstream ss(cleaned);
    std::string tok;
    while (ss >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) return false;
        out.push_back(v);
    }
    return true;
}

std::vector<Pose> parse_pose_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open pose file: " + path.string());
    }
    std::vector<Pose> poses;
    std::string line;
    std::vector<double> nums;
    size_t lineno = 0;
    size_t warned = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_comment_or_blank(line)) continue;
        const std::string where =
            path.string() + ":" + std::to_string(lineno);
        if (!parse_numbers(line, nums)) {
            throw FormatError("unparsable number at " + where);
        }
        if (nums.size() != 7) {
            throw FormatError("expected 7 fields, got " +
                              std::to_string(nums.size()) + " at " + where);
        }
        for (double v : nums) {
            if (!std::isfinite(v)) {
                throw FormatError("non-finite value at " + where);
            }
        }
        const double qn = std::sqrt(nums[3] * nums[3] + nums[4] * nums[4] +
                                    nums[5] * nums[5] + nums[6] * nums[6]);
        if (qn == 0.0) {
            throw FormatError("zero quaternion at " + where);
        }
        if (std::abs(qn - 1.0) > 1e-3 && warned++ == 0) {
            std::fprintf(stderr,
                         "warning: quaternion norm %.6f at %s; normalizing\n",
                         qn, where.c_str());
        }
        Pose p;
        p.translation = {nums[0], nums[1], nums[2]};
        p.rotation = Quaternion(nums[3], nums[4], nums[5], nums[6]);
        poses.push_back(p);
    }
    return poses;
}

}  // namespace

std::vector<Pose> load_pose_file(const std::filesystem::path& path) {
    return parse_pose_lines(path);
}

void save_pose_file(const std::vector<Pose>& poses,
                    const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    for (const Pose& p : poses) {
        const Quaternion& q = p.rotation;
        out << fmt_double(p.translation[0]) << ' '
            << fmt_double(p.translation[1]) << ' '
            << fmt_double(p.translation[2]) << ' ' << fmt_double(q.x()) << ' '
            << fmt_double(q.y()) << ' ' << fmt_double(q.z()) << ' '
            << fmt_double(q.w()) << '\n';
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::vector<Pose> load_prediction_rel(const std::filesystem::path& path,
                                      size_t expected_frames) {
    std::vector<Pose> rels = parse_pose_lines(path);
    if (expected_frames == 0 || rels.size() != expected_frames - 1) {
        throw SubmissionError(
            "prediction " + path.string() + " has " +
            std::to_string(rels.size()) + " relative poses, expected " +
            std::to_string(expected_frames == 0 ? 0 : expected_frames - 1) +
            " for a " + std::to_string(expected_frames) +
            "-frame trajectory");
    }
    return rels;
}

Intrinsics load_intrinsics(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open intrinsics file: " + path.string());
    }
    std::vector<double> m;
    std::string line;
    std::vector<double> nums;
    while (std::getline(in, line)) {
        if (is_comment_or_blank(line)) continue;
        if (!parse_numbers(line, nums)) {
            throw FormatError("unparsable intrinsics in " + path.string());
        }
        m.insert(m.end(), nums.begin(), nums.end());
    }
    if (m.size() != 9) {
        throw FormatError("intrinsics must be a 3x3 matrix, got " +
                          std::to_string(m.size()) + " values in " +
                          path.string());
    }
    const double skew_tol = 1e-9;
    if (std::abs(m[1]) > skew_tol || std::abs(m[3]) > skew_tol ||
        std::abs(m[6]) > skew_tol || std::abs(m[7]) > skew_tol) {
        throw FormatError("intrinsics matrix has nonzero skew terms in " +
                          path.string());
    }
    if (std::abs(m[8] - 1.0) > 1e-6) {
        throw FormatError("intrinsics matrix bottom-right entry must be 1 in " +
                          path.string());
    }
    Intrinsics k;
    k.fx = m[0];
    k.fy = m[4];
    k.cx = m[2];
    k.cy = m[5];
    if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
        throw FormatError("nonpositive focal length in " + path.string());
    }
    if (!std::isfinite(k.cx) || !std::isfinite(k.cy) || k.cx < 0 || k.cy < 0) {
        throw FormatError("invalid principal point in " + path.string());
    }
    return k;
}

void save_intrinsics(const Intrinsics& k, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    out << fmt_double(k.fx) << " 0 " << fmt_double(k.cx) << '\n'
        << "0 " << fmt_double(k.fy) << ' ' << fmt_double(k.cy) << '\n'
        << "0 0 1\n";
}

}  // namespace colobench
