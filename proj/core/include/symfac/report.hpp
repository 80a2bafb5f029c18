#pragma once

#include <string>

#include "symfac/types.hpp"

namespace symfac {

// Library version, embedded in every report for auditability.
const char* version();

// Shortest round-trip decimal form (printf %.17g trimmed); used everywhere
// a number reaches a report or CSV so repeated runs are byte-identical.
std::string format_number(double v);

// "name=value,name=value" echo of every tolerance, in declaration order.
std::string describe(const Tolerances& tol);

}  // namespace symfac
