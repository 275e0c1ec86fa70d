#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>
#include <vector>

#include "egoflow/geometry.hpp"

// KITTI raw-data ingestion: OXTS GPS/IMU records, IMU->camera calibration,
// and per-frame differential ego-motion in the camera frame.

namespace egoflow {

// One OXTS record. Field positions follow the KITTI raw devkit layout
// (30 whitespace-separated values per line); only the fields this pipeline
// consumes are kept. Vehicle frame: x forward, y left, z up.
struct OxtsRecord {
    double roll = 0, pitch = 0, yaw = 0;                      // rad
    double forward_vel = 0, left_vel = 0, up_vel = 0;         // m/s
    double ang_rate_x = 0, ang_rate_y = 0, ang_rate_z = 0;    // rad/s
    double timestamp = 0;                                     // s, from companion file
};

// Rigid transform with an orthonormal rotation (checked to 1e-6).
struct RigidTransform {
    Eigen::Matrix3d rotation;
    Eigen::Vector3d translation;

    RigidTransform();  // identity
    RigidTransform(const Eigen::Matrix3d& r, const Eigen::Vector3d& t);

    RigidTransform compose(const RigidTransform& inner) const;  // this ∘ inner
    RigidTransform inverse() const;
};

// Parses one 30-field OXTS line. The timestamp is left at 0; directory-level
// loaders fill it from the companion timestamps file.
OxtsRecord parse_oxts_line(std::string_view line);

// "YYYY-MM-DD HH:MM:SS.fraction" -> seconds since the Unix epoch.
double parse_kitti_timestamp(std::string_view text);

// Calibration text parsers. Rigid files carry "R:" (9 values) and "T:"
// (3 values) rows; the camera file carries "P_rect_NN:" (3x4) and
// "S_rect_NN:" (width height) rows.
RigidTransform parse_calib_rigid(const std::string& text);
CameraIntrinsics parse_calib_camera(const std::string& text, int camera_index = 2);

struct KittiCalibration {
    RigidTransform imu_to_cam;
    CameraIntrinsics intrinsics;
};

// Composes velo_to_cam ∘ imu_to_velo and reads the rectified intrinsics.
KittiCalibration load_calibration(const std::string& imu_to_velo_text,
                                  const std::string& velo_to_cam_text,
                                  const std::string& cam_to_cam_text,
                                  int camera_index = 2);

// Directory form: expects calib_imu_to_velo.txt, calib_velo_to_cam.txt and
// calib_cam_to_cam.txt inside `dir`.
KittiCalibration load_calibration_dir(const std::string& dir, int camera_index = 2);

// Loads a KITTI raw oxts/ directory: data/*.txt one file per frame plus
// timestamps.txt. Also accepts a single multi-line file (one record per
// line); missing timestamps fall back to a 0.1 s spacing with a warning on
// stderr.
std::vector<OxtsRecord> load_oxts(const std::string& path);

// Differential camera-frame ego-motion between two records: vehicle-frame
// rates and velocities scaled by dt and rotated through imu_to_cam.
EgoMotion differential_egomotion(const OxtsRecord& prev, const OxtsRecord& curr,
                                 const RigidTransform& imu_to_cam);

// Keeps the camera-frame y rotation and the full translation; zeroes the
// x and z rotations. Models steering-angle-only odometry.
EgoMotion yaw_only(const EgoMotion& ego);

}  // namespace egoflow
