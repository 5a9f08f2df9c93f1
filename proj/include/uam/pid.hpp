#pragma once

#include <limits>

namespace uam {

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
    double integral_limit = std::numeric_limits<double>::infinity();  // anti-windup bound on the integral
    double output_limit = std::numeric_limits<double>::infinity();    // symmetric output clamp
};

/// Discrete PID: kp*e + ki*integral(e) + kd*de/dt, clamped to +-output_limit.
/// The derivative term is zero on the first step after a reset.
class PidController {
public:
    PidController() = default;
    explicit PidController(const PidGains& gains) : gains_(gains) {}

    double step(double error, double dt);
    void reset();

    const PidGains& gains() const noexcept { return gains_; }
    double integral() const noexcept { return integral_; }
    double previous_error() const noexcept { return previous_error_; }

private:
    PidGains gains_;
    double integral_ = 0.0;
    double previous_error_ = 0.0;
    bool has_previous_ = false;
};

}  // namespace uam
