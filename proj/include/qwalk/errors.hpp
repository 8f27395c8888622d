#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base class for every error raised by the library. Callers that do not care
// about the category can catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input coin state does not have unit norm.
class NormalizationError : public Error {
public:
    using Error::Error;
};

// Coin dimension, axis count or vector length mismatch.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Requested transfer cannot be realized with the given (d, n, p).
class FeasibilityError : public Error {
public:
    using Error::Error;
};

// Target p = 0 has no closed-form schedule.
class UnsupportedTargetError : public Error {
public:
    using Error::Error;
};

// Two placements land on one (step, position) and compose outside the
// Identity / increment / swap family.
class ScheduleConflictError : public Error {
public:
    using Error::Error;
};

// A schedule or routing plan applied at the wrong step.
class StepError : public Error {
public:
    using Error::Error;
};

// Work requested exceeds the configured enumeration / sweep budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Malformed JSON input (schedule files, plans, coin vectors).
class FormatError : public Error {
public:
    using Error::Error;
};

// The flow-tracking oracle produced a schedule that failed its own check.
// Reaching this is a defect.
class OracleDefect : public Error {
public:
    using Error::Error;
};

}  // namespace qwalk
