#include <doctest.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "egoflow/errors.hpp"
#include "egoflow/kitti.hpp"
#include "egoflow/vmt.hpp"
#include "support/tempdir.hpp"

using namespace egoflow;

namespace {

const std::string kFixture = std::string(EGOFLOW_TEST_DATA_DIR) + "/kitti_fixture";

std::string zeros_line(int n) {
    std::string line;
    for (int i = 0; i < n; ++i) line += i ? " 0" : "0";
    return line;
}

// 30 tokens valued by their index, to pin the devkit field mapping.
std::string indexed_line() {
    std::ostringstream out;
    for (int i = 0; i < 30; ++i) out << (i ? " " : "") << i << ".5";
    return out.str();
}

}  // namespace

TEST_CASE("oxts line parsing") {
    SUBCASE("all-zero record") {
        OxtsRecord rec = parse_oxts_line(zeros_line(30));
        CHECK(rec.roll == 0.0);
        CHECK(rec.yaw == 0.0);
        CHECK(rec.forward_vel == 0.0);
        CHECK(rec.ang_rate_z == 0.0);
    }
    SUBCASE("devkit field positions") {
        OxtsRecord rec = parse_oxts_line(indexed_line());
        CHECK(rec.roll == 3.5);
        CHECK(rec.pitch == 4.5);
        CHECK(rec.yaw == 5.5);
        CHECK(rec.forward_vel == 8.5);
        CHECK(rec.left_vel == 9.5);
        CHECK(rec.up_vel == 10.5);
        CHECK(rec.ang_rate_x == 17.5);
        CHECK(rec.ang_rate_y == 18.5);
        CHECK(rec.ang_rate_z == 19.5);
    }
    SUBCASE("too few tokens") {
        CHECK_THROWS_AS(parse_oxts_line(zeros_line(29)), FormatError);
    }
    SUBCASE("non-numeric token carries the field index") {
        CHECK_THROWS_WITH_AS(parse_oxts_line("0 0 0 x 0 0"), doctest::Contains("index 3"),
                             FormatError);
    }
    SUBCASE("extra tokens are ignored") {
        CHECK_NOTHROW(parse_oxts_line(zeros_line(35)));
    }
}

TEST_CASE("kitti timestamp parsing") {
    CHECK(parse_kitti_timestamp("1970-01-01 00:00:01.5") == 1.5);
    // independent oracle: C++20 calendar
    using namespace std::chrono;
    const auto day = sys_days{year{2011} / September / 26};
    const double expect =
        duration<double>(day.time_since_epoch()).count() + 13 * 3600 + 2 * 60 + 25.9;
    CHECK(parse_kitti_timestamp("2011-09-26 13:02:25.900000000") ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(parse_kitti_timestamp("not a date"), FormatError);
}

TEST_CASE("rigid transform invariants") {
    SUBCASE("identity composition") {
        RigidTransform a, b;
        RigidTransform c = a.compose(b);
        CHECK((c.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK(c.translation.norm() == 0.0);
    }
    SUBCASE("compose with inverse gives identity") {
        Eigen::Matrix3d r =
            Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
        RigidTransform t(r, Eigen::Vector3d(0.4, -2.0, 1.5));
        RigidTransform id = t.compose(t.inverse());
        CHECK((id.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
        CHECK(id.translation.cwiseAbs().maxCoeff() < 1e-9);
    }
    SUBCASE("non-orthonormal rotation rejected") {
        Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
        bad(0, 0) = 1.1;
        CHECK_THROWS_AS(RigidTransform(bad, Eigen::Vector3d::Zero()), ParameterError);
    }
    SUBCASE("orthonormality survives long composition chains") {
        Eigen::Matrix3d r =
            Eigen::AngleAxisd(0.1, Eigen::Vector3d(0.2, 1, 0.3).normalized()).toRotationMatrix();
        RigidTransform step(r, Eigen::Vector3d(0.1, 0, 0));
        RigidTransform acc;
        for (int i = 0; i < 1000; ++i) acc = acc.compose(step);
        Eigen::Matrix3d defect =
            acc.rotation.transpose() * acc.rotation - Eigen::Matrix3d::Identity();
        CHECK(defect.cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("calibration text parsing") {
    const std::string rigid =
        "calib_time: now\n"
        "R: 1 0 0 0 1 0 0 0 1\n"
        "T: 0.5 -0.25 2\n";

    SUBCASE("identity R with translation") {
        RigidTransform t = parse_calib_rigid(rigid);
        CHECK((t.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK(t.translation == Eigen::Vector3d(0.5, -0.25, 2.0));
    }
    SUBCASE("missing key") {
        CHECK_THROWS_AS(parse_calib_rigid("R: 1 0 0 0 1 0 0 0 1\n"), FormatError);
        CHECK_THROWS_AS(parse_calib_rigid("T: 1 2 3\n"), FormatError);
    }
    SUBCASE("wrong value count") {
        CHECK_THROWS_AS(parse_calib_rigid("R: 1 0 0\nT: 1 2 3\n"), FormatError);
    }
    SUBCASE("R far from orthonormal") {
        CHECK_THROWS_AS(parse_calib_rigid("R: 2 0 0 0 2 0 0 0 2\nT: 0 0 0\n"), FormatError);
    }
    SUBCASE("slightly noisy R is snapped to a rotation") {
        RigidTransform t = parse_calib_rigid(
            "R: 1.0001 0 0 0 0.99995 0 0 0 1.00002\nT: 0 0 0\n");
        Eigen::Matrix3d defect =
            t.rotation.transpose() * t.rotation - Eigen::Matrix3d::Identity();
        CHECK(defect.cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("identity transforms compose to identity") {
        const std::string id_text = "R: 1 0 0 0 1 0 0 0 1\nT: 0 0 0\n";
        const std::string cam =
            "P_rect_02: 100 0 50 0 0 100 25 0 0 0 1 0\nS_rect_02: 100 50\n";
        KittiCalibration calib = load_calibration(id_text, id_text, cam);
        CHECK((calib.imu_to_cam.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK(calib.imu_to_cam.translation.norm() == 0.0);
    }
}

TEST_CASE("fixture calibration: rectified intrinsics and axis mapping") {
    KittiCalibration calib = load_calibration_dir(kFixture + "/calib");
    CHECK(calib.intrinsics.focal_x == doctest::Approx(721.5377));
    CHECK(calib.intrinsics.focal_y == doctest::Approx(721.5377));
    CHECK(calib.intrinsics.principal_x == doctest::Approx(609.5593));
    CHECK(calib.intrinsics.principal_y == doctest::Approx(172.854));
    CHECK(calib.intrinsics.width == 1242);
    CHECK(calib.intrinsics.height == 375);

    // IMU x (vehicle forward) must map close to camera +z (optical axis);
    // IMU z (up) near camera -y; IMU y (left) near camera -x.
    Eigen::Vector3d fwd = calib.imu_to_cam.rotation * Eigen::Vector3d::UnitX();
    CHECK(fwd.z() > 0.99);
    Eigen::Vector3d up = calib.imu_to_cam.rotation * Eigen::Vector3d::UnitZ();
    CHECK(up.y() < -0.99);
    Eigen::Vector3d left = calib.imu_to_cam.rotation * Eigen::Vector3d::UnitY();
    CHECK(left.x() < -0.99);
}

TEST_CASE("differential ego-motion") {
    RigidTransform identity;

    SUBCASE("zero rates give zero motion") {
        OxtsRecord a, b;
        a.timestamp = 0.0;
        b.timestamp = 0.1;
        EgoMotion ego = differential_egomotion(a, b, identity);
        CHECK(ego.omega == std::array<double, 3>{0, 0, 0});
        CHECK(ego.translation == std::array<double, 3>{0, 0, 0});
        CHECK(*ego.frame_interval == doctest::Approx(0.1));
    }
    SUBCASE("rate times dt") {
        OxtsRecord a, b;
        a.ang_rate_z = 0.1;
        a.timestamp = 5.0;
        b.timestamp = 5.1;
        EgoMotion ego = differential_egomotion(a, b, identity);
        const double norm = std::sqrt(ego.omega[0] * ego.omega[0] +
                                      ego.omega[1] * ego.omega[1] +
                                      ego.omega[2] * ego.omega[2]);
        CHECK(norm == doctest::Approx(0.01));
        CHECK(ego.omega[2] == doctest::Approx(0.01));
    }
    SUBCASE("velocity times dt") {
        OxtsRecord a, b;
        a.forward_vel = 10.0;
        a.timestamp = 0.0;
        b.timestamp = 0.1;
        EgoMotion ego = differential_egomotion(a, b, identity);
        const double norm = std::sqrt(ego.translation[0] * ego.translation[0] +
                                      ego.translation[1] * ego.translation[1] +
                                      ego.translation[2] * ego.translation[2]);
        CHECK(norm == doctest::Approx(1.0));
        CHECK(ego.translation[0] == doctest::Approx(1.0));  // identity mapping: x forward
    }
    SUBCASE("nonpositive dt rejected") {
        OxtsRecord a, b;
        a.timestamp = 1.0;
        b.timestamp = 1.0;
        CHECK_THROWS_AS(differential_egomotion(a, b, identity), ParameterError);
        b.timestamp = 0.9;
        CHECK_THROWS_AS(differential_egomotion(a, b, identity), ParameterError);
    }
    SUBCASE("time reversal negates the motion") {
        // Traversing the interval backwards (negated rates and velocities)
        // inverts the differential to first order.
        OxtsRecord a;
        a.ang_rate_x = 0.02;
        a.ang_rate_y = -0.05;
        a.ang_rate_z = 0.1;
        a.forward_vel = 7.0;
        a.left_vel = -0.4;
        a.up_vel = 0.1;
        a.timestamp = 0.0;
        OxtsRecord b = a;
        b.timestamp = 0.1;
        OxtsRecord rev = a;
        rev.ang_rate_x = -a.ang_rate_x;
        rev.ang_rate_y = -a.ang_rate_y;
        rev.ang_rate_z = -a.ang_rate_z;
        rev.forward_vel = -a.forward_vel;
        rev.left_vel = -a.left_vel;
        rev.up_vel = -a.up_vel;
        EgoMotion fwd = differential_egomotion(a, b, identity);
        EgoMotion back = differential_egomotion(rev, b, identity);
        for (int i = 0; i < 3; ++i) {
            CHECK(back.omega[i] == doctest::Approx(-fwd.omega[i]).epsilon(1e-12));
            CHECK(back.translation[i] == doctest::Approx(-fwd.translation[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("yaw_only keeps the y rotation and the translation") {
    EgoMotion ego({0.01, 0.02, 0.005}, {0.3, -0.1, 1.2}, 0.1);
    EgoMotion reduced = yaw_only(ego);
    CHECK(reduced.omega == std::array<double, 3>{0.0, 0.02, 0.0});
    CHECK(reduced.translation == ego.translation);
    CHECK(reduced.frame_interval == ego.frame_interval);
    // idempotent
    EgoMotion twice = yaw_only(reduced);
    CHECK(twice.omega == reduced.omega);
    CHECK(twice.translation == reduced.translation);
    // zero stays zero
    EgoMotion zero = yaw_only(EgoMotion());
    CHECK(zero.omega == std::array<double, 3>{0, 0, 0});
}

TEST_CASE("fixture drive: straight frames forward-dominated, turn yaw-dominated") {
    KittiCalibration calib = load_calibration_dir(kFixture + "/calib");
    std::vector<OxtsRecord> records = load_oxts(kFixture + "/oxts");
    REQUIRE(records.size() >= 20);

    int straight_checked = 0;
    for (std::size_t t = 1; t < 25 && t < records.size(); ++t) {
        EgoMotion ego = differential_egomotion(records[t - 1], records[t], calib.imu_to_cam);
        const double tz = std::fabs(ego.translation[2]);
        const double txy = std::sqrt(ego.translation[0] * ego.translation[0] +
                                     ego.translation[1] * ego.translation[1]);
        CHECK(tz > 10.0 * txy);                  // camera-frame motion is along +z
        CHECK(std::fabs(ego.omega[1]) < 0.005);  // rad/frame, straight driving
        ++straight_checked;
    }
    CHECK(straight_checked >= 19);

    // a frame well inside the turn section
    REQUIRE(records.size() >= 42);
    EgoMotion turning = differential_egomotion(records[40], records[41], calib.imu_to_cam);
    CHECK(std::fabs(turning.omega[1]) > 0.02);  // strong yaw, rad/frame
    auto decomp = decompose_vmt(calib.intrinsics, turning, DepthModel(10.0));
    DominantComponent dom = dominant_component(decomp.fields);
    REQUIRE(dom.any);
    CHECK(dom.component == MotionComponent::kRotY);
    // rotation about y carries more energy than the other rotations
    CHECK(dom.energy_fraction[1] > dom.energy_fraction[0]);
    CHECK(dom.energy_fraction[1] > dom.energy_fraction[2]);
}

TEST_CASE("load_oxts single-file mode and timestamp fallback") {
    testsupport::TempDir tmp("oxts");

    SUBCASE("one record per line, no timestamps: 0.1 s fallback") {
        std::ofstream out(tmp.path() / "drive.txt");
        out << zeros_line(30) << "\n" << zeros_line(30) << "\n" << zeros_line(30) << "\n";
        out.close();
        auto records = load_oxts((tmp.path() / "drive.txt").string());
        REQUIRE(records.size() == 3);
        CHECK(records[1].timestamp - records[0].timestamp == doctest::Approx(0.1));
        CHECK(records[2].timestamp - records[1].timestamp == doctest::Approx(0.1));
    }
    SUBCASE("missing path") {
        CHECK_THROWS_AS(load_oxts((tmp.path() / "nope").string()), IoError);
    }
    SUBCASE("timestamp count mismatch") {
        std::filesystem::create_directories(tmp.path() / "oxts" / "data");
        std::ofstream(tmp.path() / "oxts" / "data" / "0000000000.txt") << zeros_line(30) << "\n";
        std::ofstream(tmp.path() / "oxts" / "timestamps.txt")
            << "2011-09-26 13:00:00.0\n2011-09-26 13:00:00.1\n";
        CHECK_THROWS_AS(load_oxts((tmp.path() / "oxts").string()), FormatError);
    }
}
