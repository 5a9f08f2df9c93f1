#pragma once

#include <stdexcept>
#include <string>

namespace uam {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates a documented precondition (non-finite field, non-positive size, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A planar target lies outside the arm's reachable annulus.
class OutOfWorkspace : public Error {
public:
    using Error::Error;
};

/// An IK solution exists but violates the limits of one joint.
class JointLimitError : public Error {
public:
    JointLimitError(int joint, double value)
        : Error("joint " + std::to_string(joint + 1) + " limit violated (" + std::to_string(value) + " rad)"),
          joint_(joint), value_(value) {}

    int joint() const noexcept { return joint_; }
    double value() const noexcept { return value_; }

private:
    int joint_;
    double value_;
};

/// The localization window holds no valid depth on some axis.
class NoDepth : public Error {
public:
    using Error::Error;
};

/// Average precision requested with no ground truth anywhere.
class UndefinedRecall : public Error {
public:
    using Error::Error;
};

/// The simulator configuration is inconsistent (bad values, unreachable waypoints).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A file or text stream could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace uam
