#pragma once

#include <string>

namespace stochwave {

/// Shortest decimal that round-trips, so CSV and JSON output is byte-stable.
std::string format_real(double v);

}  // namespace stochwave
