#include "uam/pid.hpp"

#include <algorithm>

#include "uam/error.hpp"

namespace uam {

double PidController::step(double error, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("PID step needs dt > 0");
    integral_ = std::clamp(integral_ + error * dt, -gains_.integral_limit, gains_.integral_limit);
    const double derivative = has_previous_ ? (error - previous_error_) / dt : 0.0;
    previous_error_ = error;
    has_previous_ = true;
    const double u = gains_.kp * error + gains_.ki * integral_ + gains_.kd * derivative;
    return std::clamp(u, -gains_.output_limit, gains_.output_limit);
}

void PidController::reset() {
    integral_ = 0.0;
    previous_error_ = 0.0;
    has_previous_ = false;
}

}  // namespace uam
