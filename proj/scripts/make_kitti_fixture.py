#!/usr/bin/env python3
"""Regenerates tests/data/kitti_fixture: a KITTI-raw-format drive segment.

45 frames at ~9.7 Hz: 25 frames of straight driving at 30 km/h, a short
deceleration, then a right turn at intersection speed (3 m/s, 0.25 rad/s).
Calibration uses the standard KITTI sensor geometry (velodyne-to-camera
axis permutation, IMU behind and left of the velodyne). Deterministic:
rerunning reproduces the committed files byte for byte.
"""

import math
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "tests", "data", "kitti_fixture")

N_FRAMES = 45
STRAIGHT_END = 25
DECEL_END = 30
DT = 0.10355  # nominal spacing, close to real captures

CALIB_IMU_TO_VELO = """calib_time: 25-May-2012 16:47:16
R: 9.999976e-01 7.553071e-04 -2.035826e-03 -7.854027e-04 9.998898e-01 -1.482298e-02 2.024406e-03 1.482454e-02 9.998881e-01
T: -8.086759e-01 3.195559e-01 -7.997231e-01
"""

CALIB_VELO_TO_CAM = """calib_time: 25-May-2012 16:47:16
R: 7.533745e-03 -9.999714e-01 -6.166020e-04 1.480249e-02 7.280733e-04 -9.998902e-01 9.998621e-01 7.523790e-03 1.480755e-02
T: -4.069766e-03 -7.631618e-02 -2.717806e-01
delta_f: 0.000000e+00 0.000000e+00
delta_c: 0.000000e+00 0.000000e+00
"""

CALIB_CAM_TO_CAM = """calib_time: 09-Jan-2012 13:57:47
corner_dist: 9.950000e-02
S_02: 1.392000e+03 5.120000e+02
K_02: 9.597910e+02 0.000000e+00 6.960217e+02 0.000000e+00 9.569251e+02 2.241806e+02 0.000000e+00 0.000000e+00 1.000000e+00
D_02: -3.691481e-01 1.968681e-01 1.353473e-03 5.677587e-04 -6.770705e-02
R_rect_02: 9.998817e-01 1.511453e-02 -2.841595e-03 -1.511724e-02 9.998853e-01 -9.338510e-04 2.827154e-03 9.766976e-04 9.999955e-01
P_rect_02: 7.215377e+02 0.000000e+00 6.095593e+02 4.485728e+01 0.000000e+00 7.215377e+02 1.728540e+02 2.163791e-01 0.000000e+00 0.000000e+00 1.000000e+00 2.745884e-03
S_rect_02: 1.242000e+03 3.750000e+02
"""


def fmt(v):
    return "%.12g" % v


def main():
    rng = random.Random(20110926)
    os.makedirs(os.path.join(OUT, "calib"), exist_ok=True)
    os.makedirs(os.path.join(OUT, "oxts", "data"), exist_ok=True)

    with open(os.path.join(OUT, "calib", "calib_imu_to_velo.txt"), "w") as f:
        f.write(CALIB_IMU_TO_VELO)
    with open(os.path.join(OUT, "calib", "calib_velo_to_cam.txt"), "w") as f:
        f.write(CALIB_VELO_TO_CAM)
    with open(os.path.join(OUT, "calib", "calib_cam_to_cam.txt"), "w") as f:
        f.write(CALIB_CAM_TO_CAM)

    lat, lon, alt = 49.011212, 8.417291, 115.71
    yaw = 0.5236  # heading NE-ish, rad CCW from east
    roll, pitch = 0.0152, 0.0031
    t = 0.0
    times = []
    lines = []

    for k in range(N_FRAMES):
        if k < STRAIGHT_END:
            vf = 8.33 + rng.uniform(-0.05, 0.05)
            wz = rng.uniform(-0.004, 0.004)
            af = rng.uniform(-0.1, 0.1)
        elif k < DECEL_END:
            vf = 8.33 + (3.0 - 8.33) * (k - STRAIGHT_END + 1) / (DECEL_END - STRAIGHT_END)
            wz = rng.uniform(-0.01, 0.01)
            af = -1.07
        else:
            vf = 3.0 + rng.uniform(-0.08, 0.08)
            wz = -0.25 + rng.uniform(-0.01, 0.01)  # steady right turn
            af = rng.uniform(-0.15, 0.15)

        vl = rng.uniform(-0.02, 0.02)
        vu = rng.uniform(-0.012, 0.012)
        wx = rng.uniform(-0.008, 0.008)
        wy = rng.uniform(-0.008, 0.008)
        roll_k = roll + rng.uniform(-0.004, 0.004)
        pitch_k = pitch + rng.uniform(-0.004, 0.004)

        vn = vf * math.sin(yaw) + vl * math.cos(yaw)
        ve = vf * math.cos(yaw) - vl * math.sin(yaw)
        ax = af
        ay = vf * wz
        az = 9.808 + rng.uniform(-0.05, 0.05)
        al = ay
        au = az - 9.808

        fields = [
            lat, lon, alt,
            roll_k, pitch_k, yaw,
            vn, ve, vf, vl, vu,
            ax, ay, az, af, al, au,
            wx, wy, wz, wx, wy, wz,
            rng.uniform(0.01, 0.03), rng.uniform(0.01, 0.03),
        ]
        ints = [4, rng.randint(8, 11), 5, 5, 6]
        lines.append(" ".join(fmt(v) for v in fields) + " " + " ".join(str(i) for i in ints))

        times.append(t)
        dt = DT + rng.uniform(-0.0008, 0.0008)
        t += dt
        lat += vn * dt / 111320.0
        lon += ve * dt / (111320.0 * math.cos(math.radians(lat)))
        yaw += wz * dt
        if yaw > math.pi:
            yaw -= 2 * math.pi
        if yaw < -math.pi:
            yaw += 2 * math.pi

    for k, line in enumerate(lines):
        with open(os.path.join(OUT, "oxts", "data", "%010d.txt" % k), "w") as f:
            f.write(line + "\n")

    with open(os.path.join(OUT, "oxts", "timestamps.txt"), "w") as f:
        for tk in times:
            secs = 13 * 3600 + 10 * 60 + tk
            h = int(secs // 3600)
            m = int(secs % 3600 // 60)
            s = secs % 60
            f.write("2011-09-26 %02d:%02d:%012.9f\n" % (h, m, s))

    print("wrote %d frames under %s" % (N_FRAMES, os.path.normpath(OUT)))


if __name__ == "__main__":
    main()
