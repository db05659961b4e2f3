#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "rc/io.hpp"

namespace rc::cli {

struct SuiteOptions {
    std::uint64_t seed = 7;
    int count = 0;  // 0 picks the suite's default
};

/// Runs one suite, printing a line per check; returns the number of failures.
int run_suite(const std::string& name, const Instance& inst, const SuiteOptions& opts, std::ostream& os);

}  // namespace rc::cli
