#include "egoflow/kitti.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "egoflow/errors.hpp"

namespace fs = std::filesystem;

namespace egoflow {

namespace {

// Devkit field positions within a 30-token OXTS line (0-based).
constexpr int kIdxRoll = 3, kIdxPitch = 4, kIdxYaw = 5;
constexpr int kIdxVf = 8, kIdxVl = 9, kIdxVu = 10;
constexpr int kIdxWx = 17, kIdxWy = 18, kIdxWz = 19;
constexpr int kOxtsFieldCount = 30;

double orthonormality_defect(const Eigen::Matrix3d& r) {
    double defect = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    return std::max(defect, std::abs(r.determinant() - 1.0));
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& r) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d out = svd.matrixU() * svd.matrixV().transpose();
    if (out.determinant() < 0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        out = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return out;
}

std::vector<double> tokens_to_doubles(std::string_view line, const char* what) {
    std::vector<double> vals;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
        while (p < end && (*p == ' ' || *p == '\t' || *p == '\r' || *p == '\n')) ++p;
        if (p >= end) break;
        double v;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc()) {
            throw FormatError(std::string(what) + ": non-numeric token at field index " +
                              std::to_string(vals.size()));
        }
        vals.push_back(v);
        p = next;
    }
    return vals;
}

// Values following a "KEY:" label, one line.
std::vector<double> labeled_row(const std::string& text, const std::string& key,
                                std::size_t expect) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + ":", 0) != 0) continue;
        auto vals = tokens_to_doubles(std::string_view(line).substr(key.size() + 1),
                                      key.c_str());
        if (vals.size() != expect)
            throw FormatError("calibration row " + key + ": expected " +
                              std::to_string(expect) + " values, got " +
                              std::to_string(vals.size()));
        return vals;
    }
    throw FormatError("calibration: missing key " + key);
}

// Days since the Unix epoch for a proleptic Gregorian date.
long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

}  // namespace

RigidTransform::RigidTransform()
    : rotation(Eigen::Matrix3d::Identity()), translation(Eigen::Vector3d::Zero()) {}

RigidTransform::RigidTransform(const Eigen::Matrix3d& r, const Eigen::Vector3d& t)
    : rotation(r), translation(t) {
    if (orthonormality_defect(r) > 1e-6)
        throw ParameterError("rigid transform: rotation is not orthonormal");
}

RigidTransform RigidTransform::compose(const RigidTransform& inner) const {
    RigidTransform out;
    out.rotation = nearest_rotation(rotation * inner.rotation);
    out.translation = rotation * inner.translation + translation;
    return out;
}

RigidTransform RigidTransform::inverse() const {
    RigidTransform out;
    out.rotation = rotation.transpose();
    out.translation = -(rotation.transpose() * translation);
    return out;
}

OxtsRecord parse_oxts_line(std::string_view line) {
    auto vals = tokens_to_doubles(line, "oxts");
    if (vals.size() < kOxtsFieldCount)
        throw FormatError("oxts: expected >= 30 fields, got " + std::to_string(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!std::isfinite(vals[i]))
            throw FormatError("oxts: non-finite value at field index " + std::to_string(i));
    OxtsRecord rec;
    rec.roll = vals[kIdxRoll];
    rec.pitch = vals[kIdxPitch];
    rec.yaw = vals[kIdxYaw];
    rec.forward_vel = vals[kIdxVf];
    rec.left_vel = vals[kIdxVl];
    rec.up_vel = vals[kIdxVu];
    rec.ang_rate_x = vals[kIdxWx];
    rec.ang_rate_y = vals[kIdxWy];
    rec.ang_rate_z = vals[kIdxWz];
    return rec;
}

double parse_kitti_timestamp(std::string_view text) {
    int year, month, day, hour, minute;
    double sec;
    std::string s(text);
    if (std::sscanf(s.c_str(), "%d-%d-%d %d:%d:%lf", &year, &month, &day, &hour, &minute,
                    &sec) != 6)
        throw FormatError("timestamp: expected YYYY-MM-DD HH:MM:SS.fraction, got '" + s + "'");
    return static_cast<double>(days_from_civil(year, month, day)) * 86400.0 + hour * 3600.0 +
           minute * 60.0 + sec;
}

RigidTransform parse_calib_rigid(const std::string& text) {
    auto rv = labeled_row(text, "R", 9);
    auto tv = labeled_row(text, "T", 3);
    Eigen::Matrix3d r;
    r << rv[0], rv[1], rv[2], rv[3], rv[4], rv[5], rv[6], rv[7], rv[8];
    // Published calibrations are orthonormal to ~1e-5; snap to the nearest
    // rotation, reject anything that is not close to one.
    if (orthonormality_defect(r) > 1e-3)
        throw FormatError("calibration: R row is not orthonormal");
    return RigidTransform(nearest_rotation(r), Eigen::Vector3d(tv[0], tv[1], tv[2]));
}

CameraIntrinsics parse_calib_camera(const std::string& text, int camera_index) {
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "_%02d", camera_index);
    auto p = labeled_row(text, "P_rect" + std::string(suffix), 12);
    auto s = labeled_row(text, "S_rect" + std::string(suffix), 2);
    const int width = static_cast<int>(std::lround(s[0]));
    const int height = static_cast<int>(std::lround(s[1]));
    try {
        return CameraIntrinsics(p[0], p[5], p[2], p[6], width, height);
    } catch (const ParameterError& e) {
        throw FormatError(std::string("calibration: bad rectified intrinsics: ") + e.what());
    }
}

KittiCalibration load_calibration(const std::string& imu_to_velo_text,
                                  const std::string& velo_to_cam_text,
                                  const std::string& cam_to_cam_text, int camera_index) {
    RigidTransform imu_to_velo = parse_calib_rigid(imu_to_velo_text);
    RigidTransform velo_to_cam = parse_calib_rigid(velo_to_cam_text);
    KittiCalibration calib{velo_to_cam.compose(imu_to_velo),
                           parse_calib_camera(cam_to_cam_text, camera_index)};
    return calib;
}

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

KittiCalibration load_calibration_dir(const std::string& dir, int camera_index) {
    fs::path base(dir);
    return load_calibration(slurp(base / "calib_imu_to_velo.txt"),
                            slurp(base / "calib_velo_to_cam.txt"),
                            slurp(base / "calib_cam_to_cam.txt"), camera_index);
}

std::vector<OxtsRecord> load_oxts(const std::string& path) {
    std::vector<OxtsRecord> records;
    std::vector<double> timestamps;
    fs::path base(path);

    if (fs::is_directory(base)) {
        fs::path data_dir = fs::is_directory(base / "data") ? base / "data" : base;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(data_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        if (files.empty()) throw FormatError("oxts: no .txt records under " + path);
        for (const auto& f : files) {
            std::string text = slurp(f);
            try {
                records.push_back(parse_oxts_line(text));
            } catch (const FormatError& e) {
                throw FormatError(f.string() + ": " + e.what());
            }
        }
        fs::path ts_file = base / "timestamps.txt";
        if (fs::exists(ts_file)) {
            std::istringstream in(slurp(ts_file));
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                timestamps.push_back(parse_kitti_timestamp(line));
            }
            if (timestamps.size() != records.size())
                throw FormatError("oxts: timestamps.txt has " +
                                  std::to_string(timestamps.size()) + " entries for " +
                                  std::to_string(records.size()) + " records");
        }
    } else if (fs::is_regular_file(base)) {
        std::istringstream in(slurp(base));
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            try {
                records.push_back(parse_oxts_line(line));
            } catch (const FormatError& e) {
                throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (records.empty()) throw FormatError("oxts: no records in " + path);
    } else {
        throw IoError("oxts: no such file or directory: " + path);
    }

    if (timestamps.empty()) {
        std::fprintf(stderr,
                     "egoflow: warning: no timestamps for %s, assuming 0.1 s frame spacing\n",
                     path.c_str());
        for (std::size_t i = 0; i < records.size(); ++i) records[i].timestamp = 0.1 * i;
    } else {
        for (std::size_t i = 0; i < records.size(); ++i) records[i].timestamp = timestamps[i];
    }
    return records;
}

EgoMotion differential_egomotion(const OxtsRecord& prev, const OxtsRecord& curr,
                                 const RigidTransform& imu_to_cam) {
    const double dt = curr.timestamp - prev.timestamp;
    if (!(std::isfinite(dt) && dt > 0.0))
        throw ParameterError("differential ego-motion: frame interval must be positive");
    // Rates and velocities at the start of the interval drive the motion
    // accumulated over [prev, curr].
    Eigen::Vector3d omega_imu(prev.ang_rate_x, prev.ang_rate_y, prev.ang_rate_z);
    Eigen::Vector3d vel_imu(prev.forward_vel, prev.left_vel, prev.up_vel);
    Eigen::Vector3d omega_cam = imu_to_cam.rotation * (omega_imu * dt);
    Eigen::Vector3d trans_cam = imu_to_cam.rotation * (vel_imu * dt);
    return EgoMotion({omega_cam.x(), omega_cam.y(), omega_cam.z()},
                     {trans_cam.x(), trans_cam.y(), trans_cam.z()}, dt);
}

EgoMotion yaw_only(const EgoMotion& ego) {
    return EgoMotion({0.0, ego.omega[1], 0.0}, ego.translation, ego.frame_interval);
}

}  // namespace egoflow
