#pragma once

#include <stdexcept>
#include <string>

#include "mzp/optics.hpp"

namespace mzp {

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, int column, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

// One element per line:
//   BS <in>[, <in2>] -> <out_r>, <out_t>
//   MIRROR <beam>
//   PHASE <beam> <value>      value: float | [n][*]pi[/m] | phi
//   DETECT <beam> <before|after>
//   VACUUM <beam>
// '#' starts a comment. Routing must form a DAG fed by exactly one non-vacuum
// input beam; each beam is produced once and consumed at most once.
CircuitDescription parse_circuit(const std::string& text);

// Phase grammar shared with configuration files.
double parse_phase_expression(const std::string& text);

}  // namespace mzp
