#pragma once

#include <array>
#include <cmath>

#include "uam/mission.hpp"

namespace scenario {

// Ten zero-noise targets spread over the search corridor.
inline uam::MissionConfig standard(int index) {
    struct Spot {
        double x, y, theta_deg;
    };
    static constexpr std::array<Spot, 10> spots{{{1.6, 0.0, 0.0},
                                                 {1.6, 0.0, 45.0},
                                                 {1.2, 0.15, 90.0},
                                                 {1.4, -0.2, 135.0},
                                                 {1.8, 0.25, 30.0},
                                                 {2.0, -0.25, 160.0},
                                                 {2.2, 0.1, 10.0},
                                                 {1.3, -0.05, 75.0},
                                                 {1.9, 0.2, 120.0},
                                                 {2.1, -0.12, 60.0}}};
    const Spot& s = spots.at(static_cast<std::size_t>(index));
    uam::MissionConfig c;
    c.target.position = uam::Vec3(s.x, s.y, 0.10);
    c.target.theta = s.theta_deg * uam::kPi / 180.0;
    return c;
}

// Distance between two angles taken modulo pi.
inline double angle_gap_mod_pi(double a, double b) {
    double d = std::fmod(std::abs(a - b), uam::kPi);
    return std::min(d, uam::kPi - d);
}

}  // namespace scenario
