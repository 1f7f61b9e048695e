#pragma once

#include <stdexcept>
#include <string>

namespace lpreduce {

/// Bad arguments, malformed input files, inconsistent dimensions.
/// The CLI maps this class to exit code 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A construction loop hit its hard cap without meeting its contract.
/// Carries the best ratio band achieved so the caller can see how close it got.
class construction_error : public std::runtime_error {
public:
    construction_error(const std::string& what, double best_min_ratio, double best_max_ratio)
        : std::runtime_error(what),
          best_min_ratio(best_min_ratio),
          best_max_ratio(best_max_ratio) {}

    double best_min_ratio;
    double best_max_ratio;
};

/// Numerical breakdown inside the barrier iteration (mathematically impossible
/// states). Carries the step number and barrier positions at the failure.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, long step, double lower, double upper)
        : std::runtime_error(what), step(step), lower(lower), upper(upper) {}

    long step = -1;
    double lower = 0.0;
    double upper = 0.0;
};

}  // namespace lpreduce
