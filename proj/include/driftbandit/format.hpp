#pragma once

#include <string>

namespace driftbandit {

// Shortest decimal text that parses back to the same double.
std::string format_shortest(double x);

// 17 significant digits, the CSV convention for bit-stable round trips.
std::string format_exact(double x);

}  // namespace driftbandit
