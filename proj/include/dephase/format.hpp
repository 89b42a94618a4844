// format.hpp: Fixed, locale-independent float formatting for CSV/JSON output

#pragma once

#include <cstdio>
#include <string>

namespace dephase {

// 17 significant digits round-trips any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace dephase
