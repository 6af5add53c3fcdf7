#pragma once

#include <stdexcept>
#include <string>

namespace vipv {

/// Bad or inconsistent input data (files, configs, graph closure).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (singular inventory system, infeasible design, ...).
class SolveError : public std::runtime_error {
public:
    explicit SolveError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace vipv
