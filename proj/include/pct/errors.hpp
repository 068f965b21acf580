#pragma once

#include <stdexcept>
#include <string>

namespace pct {

struct invalid_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct singular_loop_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct invalid_action_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct memory_miss_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_exceeded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_objective_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unknown_input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_fit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pct
