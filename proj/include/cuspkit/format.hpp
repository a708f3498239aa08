#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace cuspkit {

// Round to 12 significant digits so that serialized output is stable across runs.
inline double sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace cuspkit
