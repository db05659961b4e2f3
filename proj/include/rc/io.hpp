#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rc/core.hpp"
#include "rc/second_period.hpp"

namespace rc {

class InstanceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SolverSettings {
    int resolution = 200;  // share grid for curves and optimal shares
    int x_grid = 801;      // outer grid of the program solver
};

/// A model instance as stored on disk. Known actions keep their per-level
/// weights; the `mean` shorthand is expanded onto {0, grid max} on load.
struct Instance {
    OutputGrid grid;
    Technology known;
    double beta;
    Variant variant = Variant::Baseline;
    SolverSettings solver;

    ModelConfig config() const { return ModelConfig(grid, known, beta); }
};

/// Parses the YAML instance format; every core invariant is re-checked.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

/// YAML text that parses back to a bit-identical instance.
std::string emit_instance(const Instance& inst);

/// Shortest decimal text that round-trips, independent of the locale.
std::string format_number(double x);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace rc
