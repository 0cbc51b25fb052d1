#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "qnls/model.hpp"
#include "qnls/solver.hpp"

namespace qnls {

/// Parse failure with source location, reported to the user as-is.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, int column, const std::string& what);
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

struct RunConfig {
    ProblemSpec problem;
    StepperConfig stepper;
};

/// Sectioned key = value format. Keys may be written dotted at top level
/// (V.c = 1) or inside a [section]. Recognized problem keys: dim, radius,
/// grid_points, dt0, t_end, h.terms, V.{c,m,sign,bounded,epsilon},
/// u0.{amplitude,sigma,chirp}; stepper.* keys tune the integrator.
/// h.terms holds [b, alpha] pairs: h.terms = [1, 0.5], [1, 0.75].
RunConfig parse_config(std::istream& is);
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Render a RunConfig back to config text (used by sweep run manifests).
std::string to_config_text(const RunConfig& cfg);

} // namespace qnls
