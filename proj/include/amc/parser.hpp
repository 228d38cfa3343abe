#pragma once

#include <stdexcept>
#include <string>

#include "amc/amas.hpp"

namespace amc {

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) + ", column " +
                           std::to_string(col_) + ")"),
        line(line_),
        column(col_) {}
};

// Parses system source text.  Grammar (free-form whitespace, '#' comments):
//
//   agent <name> {
//     init: <state>;
//     state <s> {
//       props: [p, ...];                 # optional
//       choices: [ {e1, e2}, {e3} ];     # optional; omitted = one singleton
//       on e1 -> <s'>;                   #   choice per outgoing event
//       ...
//     }
//     ...
//   }
//
// Validates the result (see validate) and collects warnings into `diag`.
[[nodiscard]] Amas parse_amas(const std::string& text, Diagnostics* diag = nullptr);

}  // namespace amc
