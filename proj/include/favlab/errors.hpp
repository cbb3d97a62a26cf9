#pragma once

#include <stdexcept>
#include <string>

namespace favlab {

// Requested computation exceeds the configured exact-mode budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

// Operation invoked for a model kind it does not support.
struct wrong_model_error : std::runtime_error {
    explicit wrong_model_error(const std::string& what) : std::runtime_error(what) {}
};

// Pair classification requested for a pair of identical cells.
struct degenerate_pair_error : std::runtime_error {
    explicit degenerate_pair_error(const std::string& what) : std::runtime_error(what) {}
};

// Angular sector degenerated to the empty set after clamping.
struct empty_sector_error : std::runtime_error {
    explicit empty_sector_error(const std::string& what) : std::runtime_error(what) {}
};

// Constant fitting asked for with too few table rows.
struct insufficient_data_error : std::runtime_error {
    explicit insufficient_data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace favlab
