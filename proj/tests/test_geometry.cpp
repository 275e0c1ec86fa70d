#include <doctest.h>

#include <array>
#include <cmath>

#include "egoflow/errors.hpp"
#include "egoflow/geometry.hpp"
#include "support/random.hpp"
#include "support/reference.hpp"

using namespace egoflow;
using testsupport::Rng;

namespace {

// f = 1 camera with the principal point at (4,4) so centered coordinates in
// [-4,3] are directly addressable.
CameraIntrinsics unit_cam() { return CameraIntrinsics(1.0, 1.0, 4.0, 4.0, 9, 9); }

CameraIntrinsics random_cam(Rng& rng) {
    int w = rng.range(2, 64);
    int h = rng.range(2, 64);
    double fx = rng.uniform(0.5, 1500.0);
    double fy = rng.uniform(0.5, 1500.0);
    double cx = rng.uniform(0.0, w - 0.01);
    double cy = rng.uniform(0.0, h - 0.01);
    return CameraIntrinsics(fx, fy, cx, cy, w, h);
}

std::array<double, 3> random_vec3(Rng& rng, double lim) {
    return {rng.uniform(-lim, lim), rng.uniform(-lim, lim), rng.uniform(-lim, lim)};
}

}  // namespace

TEST_CASE("intrinsics construction validates") {
    CHECK_NOTHROW(CameraIntrinsics(700.0, 700.0, 600.0, 180.0, 1224, 375));
    CHECK_THROWS_AS(CameraIntrinsics(0.0, 700.0, 1.0, 1.0, 10, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(-5.0, 700.0, 1.0, 1.0, 10, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(700.0, NAN, 1.0, 1.0, 10, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(700.0, 700.0, 10.0, 1.0, 10, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(700.0, 700.0, -0.5, 1.0, 10, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(700.0, 700.0, 1.0, 1.0, 0, 10), ParameterError);
    CHECK_THROWS_AS(CameraIntrinsics(700.0, 700.0, 1.0, 1.0, 10, -3), ParameterError);
}

TEST_CASE("ego-motion construction validates") {
    CHECK_NOTHROW(EgoMotion({0.01, 0.0, 0.0}, {0.0, 0.0, 1.0}, 0.1));
    CHECK_THROWS_AS(EgoMotion({NAN, 0, 0}, {0, 0, 0}), ParameterError);
    CHECK_THROWS_AS(EgoMotion({0, 0, 0}, {0, INFINITY, 0}), ParameterError);
    CHECK_THROWS_AS(EgoMotion({0, 0, 0}, {0, 0, 0}, 0.0), ParameterError);
    CHECK_THROWS_AS(EgoMotion({0, 0, 0}, {0, 0, 0}, -0.1), ParameterError);
    CHECK(EgoMotion().omega == std::array<double, 3>{0, 0, 0});
}

TEST_CASE("depth model validates") {
    CHECK(DepthModel().constant_depth == 10.0);
    CHECK_THROWS_AS(DepthModel(0.0), ParameterError);
    CHECK_THROWS_AS(DepthModel(-1.0), ParameterError);
    CHECK_THROWS_AS(DepthModel(NAN), ParameterError);
}

TEST_CASE("rotational field matches hand evaluations") {
    auto intr = unit_cam();

    SUBCASE("zero rotation gives zero field") {
        auto f = rotational_field(intr, {0, 0, 0});
        for (double c : f.u) CHECK(c == 0.0);
        for (double c : f.v) CHECK(c == 0.0);
    }
    SUBCASE("pure yaw about z") {
        auto f = rotational_field(intr, {0, 0, 0.1});
        // centered (2,3) is pixel col=6,row=7
        CHECK(f.u_at(7, 6) == doctest::Approx(0.3));
        CHECK(f.v_at(7, 6) == doctest::Approx(-0.2));
    }
    SUBCASE("pure rotation about y") {
        auto f = rotational_field(intr, {0, 0.1, 0});
        // centered (1,0) is pixel col=5,row=4
        CHECK(f.u_at(4, 5) == doctest::Approx(-0.2));
        CHECK(f.v_at(4, 5) == doctest::Approx(0.0));
    }
    SUBCASE("pure rotation about x at the principal point") {
        auto f = rotational_field(intr, {0.05, 0, 0});
        CHECK(f.u_at(4, 4) == doctest::Approx(0.0));
        CHECK(f.v_at(4, 4) == doctest::Approx(0.05));
    }
    SUBCASE("non-finite rotation rejected") {
        CHECK_THROWS_AS(rotational_field(intr, {0, NAN, 0}), ParameterError);
    }
}

TEST_CASE("translational field matches hand evaluations") {
    auto intr = unit_cam();

    SUBCASE("zero translation gives zero field") {
        auto f = translational_field(intr, {0, 0, 0}, DepthModel(3.0));
        for (double c : f.u) CHECK(c == 0.0);
        for (double c : f.v) CHECK(c == 0.0);
    }
    SUBCASE("pure forward translation") {
        auto f = translational_field(intr, {0, 0, 0.5}, DepthModel(10.0));
        // centered (1,2) is pixel col=5,row=6
        CHECK(f.u_at(6, 5) == doctest::Approx(0.05));
        CHECK(f.v_at(6, 5) == doctest::Approx(0.10));
    }
    SUBCASE("pure lateral translation is a uniform field") {
        auto f = translational_field(intr, {1, 0, 0}, DepthModel(5.0));
        for (std::size_t i = 0; i < f.pixel_count(); ++i) {
            CHECK(f.u[i] == doctest::Approx(-0.2));
            CHECK(f.v[i] == 0.0);
        }
    }
}

TEST_CASE("field composition") {
    auto intr = unit_cam();
    auto rot = rotational_field(intr, {0, 0, 0.1});
    auto trans = translational_field(intr, {0, 0, 0.5}, DepthModel(10.0));

    SUBCASE("example sum at centered (1,2)") {
        auto sum = compose_field(rot, trans);
        CHECK(sum.u_at(6, 5) == doctest::Approx(0.25));
        CHECK(sum.v_at(6, 5) == doctest::Approx(0.0));
    }
    SUBCASE("additive identity") {
        auto zero = rotational_field(intr, {0, 0, 0});
        auto sum = compose_field(zero, trans);
        for (std::size_t i = 0; i < sum.pixel_count(); ++i) {
            CHECK(sum.u[i] == trans.u[i]);
            CHECK(sum.v[i] == trans.v[i]);
        }
    }
    SUBCASE("commutative") {
        auto ab = compose_field(rot, trans);
        auto ba = compose_field(trans, rot);
        for (std::size_t i = 0; i < ab.pixel_count(); ++i) {
            CHECK(ab.u[i] == ba.u[i]);
            CHECK(ab.v[i] == ba.v[i]);
        }
    }
    SUBCASE("dimension mismatch rejected") {
        MotionField small(3, 3);
        CHECK_THROWS_AS(compose_field(rot, small), ParameterError);
    }
}

TEST_CASE("ego_field equals the manual three-step composition bit-for-bit") {
    Rng rng(2024);
    for (int k = 0; k < 50; ++k) {
        auto intr = random_cam(rng);
        EgoMotion ego(random_vec3(rng, 0.2), random_vec3(rng, 2.0));
        DepthModel depth(rng.uniform(0.5, 80.0));
        auto fused = ego_field(intr, ego, depth);
        auto manual = compose_field(rotational_field(intr, ego.omega),
                                    translational_field(intr, ego.translation, depth));
        REQUIRE(fused.same_size(manual));
        for (std::size_t i = 0; i < fused.pixel_count(); ++i) {
            REQUIRE(fused.u[i] == manual.u[i]);
            REQUIRE(fused.v[i] == manual.v[i]);
        }
    }
}

TEST_CASE("ego_field: zero motion and yaw sign convention") {
    auto intr = CameraIntrinsics(100.0, 100.0, 32.0, 24.0, 64, 48);

    SUBCASE("zero ego-motion gives zero field") {
        auto f = ego_field(intr, EgoMotion(), DepthModel());
        for (double c : f.u) CHECK(c == 0.0);
        for (double c : f.v) CHECK(c == 0.0);
    }
    SUBCASE("positive y-rotation moves every pixel left") {
        auto f = ego_field(intr, EgoMotion({0, 0.02, 0}, {0, 0, 0}), DepthModel());
        for (double c : f.u) CHECK(c < 0.0);
    }
}

TEST_CASE("random fields match the direct textbook transcription") {
    Rng rng(99);
    for (int k = 0; k < 200; ++k) {
        int w = rng.range(2, 32), h = rng.range(2, 32);
        double f = rng.uniform(0.5, 1200.0);
        CameraIntrinsics intr(f, f, rng.uniform(0, w - 0.01), rng.uniform(0, h - 0.01), w, h);
        auto omega = random_vec3(rng, 0.3);
        auto t = random_vec3(rng, 3.0);
        DepthModel depth(rng.uniform(0.2, 100.0));
        auto rot = rotational_field(intr, omega);
        auto trans = translational_field(intr, t, depth);
        for (int s = 0; s < 10; ++s) {
            int row = rng.range(0, h - 1), col = rng.range(0, w - 1);
            double x = col - intr.principal_x, y = row - intr.principal_y;
            auto [ur, vr] = testsupport::rotation_eq(omega[0], omega[1], omega[2], f, x, y);
            auto [ut, vt] = testsupport::translation_eq(t[0], t[1], t[2], f,
                                                        depth.constant_depth, x, y);
            // reassociation between the per-component fold and the single
            // textbook expression costs a few ulps of the term magnitudes
            const double z = depth.constant_depth;
            using namespace testsupport;
            REQUIRE(std::fabs(rot.u_at(row, col) - ur) <=
                    ulp_tolerance(rotation_term_scale_u(omega[0], omega[1], omega[2], f, x, y), 4));
            REQUIRE(std::fabs(rot.v_at(row, col) - vr) <=
                    ulp_tolerance(rotation_term_scale_v(omega[0], omega[1], omega[2], f, x, y), 4));
            REQUIRE(std::fabs(trans.u_at(row, col) - ut) <=
                    ulp_tolerance(translation_term_scale_u(t[0], t[2], f, z, x), 4));
            REQUIRE(std::fabs(trans.v_at(row, col) - vt) <=
                    ulp_tolerance(translation_term_scale_v(t[1], t[2], f, z, y), 4));
        }
    }
}

TEST_CASE("anisotropic focal lengths use fx, fy and the geometric-mean cross term") {
    CameraIntrinsics intr(800.0, 400.0, 10.0, 7.0, 21, 15);
    std::array<double, 3> omega{0.04, -0.02, 0.01};
    auto f = rotational_field(intr, omega);
    double fc = std::sqrt(800.0 * 400.0);
    for (int row : {0, 7, 14}) {
        for (int col : {0, 10, 20}) {
            double x = col - 10.0, y = row - 7.0;
            double u = -omega[1] * 800.0 + omega[2] * y + (omega[0] / fc) * x * y -
                       (omega[1] / 800.0) * x * x;
            double v = omega[0] * 400.0 - omega[2] * x - (omega[1] / fc) * x * y +
                       (omega[0] / 400.0) * y * y;
            CHECK(f.u_at(row, col) == doctest::Approx(u).epsilon(1e-15));
            CHECK(f.v_at(row, col) == doctest::Approx(v).epsilon(1e-15));
        }
    }
}

TEST_CASE("normalized coordinate mode reproduces the f=1 convention") {
    CameraIntrinsics intr(250.0, 125.0, 8.0, 6.0, 17, 13);
    std::array<double, 3> omega{0.03, 0.01, -0.02};
    std::array<double, 3> t{0.4, -0.2, 1.0};
    DepthModel depth(12.0);
    auto rot = rotational_field(intr, omega, CoordMode::kNormalized);
    auto trans = translational_field(intr, t, depth, CoordMode::kNormalized);
    for (int row : {0, 6, 12}) {
        for (int col : {0, 8, 16}) {
            double x = (col - 8.0) / 250.0, y = (row - 6.0) / 125.0;
            auto [ur, vr] = testsupport::rotation_eq(omega[0], omega[1], omega[2], 1.0, x, y);
            auto [ut, vt] = testsupport::translation_eq(t[0], t[1], t[2], 1.0, 12.0, x, y);
            using namespace testsupport;
            CHECK(std::fabs(rot.u_at(row, col) - ur) <=
                  ulp_tolerance(rotation_term_scale_u(omega[0], omega[1], omega[2], 1.0, x, y), 4));
            CHECK(std::fabs(rot.v_at(row, col) - vr) <=
                  ulp_tolerance(rotation_term_scale_v(omega[0], omega[1], omega[2], 1.0, x, y), 4));
            CHECK(std::fabs(trans.u_at(row, col) - ut) <=
                  ulp_tolerance(translation_term_scale_u(t[0], t[2], 1.0, 12.0, x), 4));
            CHECK(std::fabs(trans.v_at(row, col) - vt) <=
                  ulp_tolerance(translation_term_scale_v(t[1], t[2], 1.0, 12.0, y), 4));
        }
    }
}

TEST_CASE("property: rotational field is independent of depth by construction") {
    // rotational_field takes no depth input; assert the fused path keeps the
    // rotational component unchanged when only the plane depth varies.
    CameraIntrinsics intr(500.0, 500.0, 20.0, 15.0, 40, 30);
    EgoMotion ego({0.01, -0.02, 0.005}, {0, 0, 0});
    auto a = ego_field(intr, ego, DepthModel(1.0));
    auto b = ego_field(intr, ego, DepthModel(10.0));
    auto c = ego_field(intr, ego, DepthModel(100.0));
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        CHECK(a.u[i] == b.u[i]);
        CHECK(b.u[i] == c.u[i]);
        CHECK(a.v[i] == b.v[i]);
        CHECK(b.v[i] == c.v[i]);
    }
}

TEST_CASE("property: linearity in the motion parameters") {
    Rng rng(4711);
    for (int k = 0; k < 50; ++k) {
        auto intr = random_cam(rng);
        auto w1 = random_vec3(rng, 0.1), w2 = random_vec3(rng, 0.1);
        double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        std::array<double, 3> combo{a * w1[0] + b * w2[0], a * w1[1] + b * w2[1],
                                    a * w1[2] + b * w2[2]};
        auto f1 = rotational_field(intr, w1);
        auto f2 = rotational_field(intr, w2);
        auto fc = rotational_field(intr, combo);
        for (std::size_t i = 0; i < fc.pixel_count(); ++i) {
            double expect = a * f1.u[i] + b * f2.u[i];
            double scale = std::fabs(a * f1.u[i]) + std::fabs(b * f2.u[i]) + std::fabs(fc.u[i]);
            CHECK(std::fabs(fc.u[i] - expect) <= testsupport::ulp_tolerance(scale, 16));
            expect = a * f1.v[i] + b * f2.v[i];
            scale = std::fabs(a * f1.v[i]) + std::fabs(b * f2.v[i]) + std::fabs(fc.v[i]);
            CHECK(std::fabs(fc.v[i] - expect) <= testsupport::ulp_tolerance(scale, 16));
        }
    }
}

TEST_CASE("property: negating the motion negates the field exactly") {
    Rng rng(31337);
    for (int k = 0; k < 30; ++k) {
        auto intr = random_cam(rng);
        auto w = random_vec3(rng, 0.2);
        auto t = random_vec3(rng, 2.0);
        DepthModel depth(rng.uniform(0.5, 50.0));
        auto fw = rotational_field(intr, w);
        auto bw = rotational_field(intr, {-w[0], -w[1], -w[2]});
        auto ft = translational_field(intr, t, depth);
        auto bt = translational_field(intr, {-t[0], -t[1], -t[2]}, depth);
        for (std::size_t i = 0; i < fw.pixel_count(); ++i) {
            CHECK(fw.u[i] == -bw.u[i]);
            CHECK(fw.v[i] == -bw.v[i]);
            CHECK(ft.u[i] == -bt.u[i]);
            CHECK(ft.v[i] == -bt.v[i]);
        }
    }
}

TEST_CASE("property: forward motion expands away from the principal column") {
    CameraIntrinsics intr(720.0, 720.0, 50.0, 20.0, 101, 41);
    auto f = translational_field(intr, {0, 0, 1.5}, DepthModel(25.0));
    for (int row = 0; row < 41; ++row) {
        for (int col = 0; col < 101; ++col) {
            double x = col - 50.0;
            if (x > 0) CHECK(f.u_at(row, col) > 0.0);
            if (x < 0) CHECK(f.u_at(row, col) < 0.0);
            if (x == 0) CHECK(f.u_at(row, col) == 0.0);
        }
    }
}

TEST_CASE("property: doubling the plane depth halves the translational field exactly") {
    Rng rng(555);
    for (int k = 0; k < 20; ++k) {
        auto intr = random_cam(rng);
        auto t = random_vec3(rng, 3.0);
        double z = rng.uniform(0.5, 60.0);
        auto near = translational_field(intr, t, DepthModel(z));
        auto far = translational_field(intr, t, DepthModel(2.0 * z));
        for (std::size_t i = 0; i < near.pixel_count(); ++i) {
            CHECK(far.u[i] == near.u[i] / 2.0);
            CHECK(far.v[i] == near.v[i] / 2.0);
        }
    }
}
