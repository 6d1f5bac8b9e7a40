#ifndef VGRD_FORMAT_HPP
#define VGRD_FORMAT_HPP

#include <cstdio>
#include <string>

namespace vgrd {

// all numeric output uses 10 significant digits so reruns are byte-identical
inline std::string num10(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

} // namespace vgrd

#endif // VGRD_FORMAT_HPP
