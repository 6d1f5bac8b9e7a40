#ifndef VGRD_SVG_HPP
#define VGRD_SVG_HPP

#include <string>
#include <vector>

namespace vgrd {

// Minimal static line-plot writer: axes, ticks, legend, one polyline per
// series. No external plotting dependency; output is deterministic.
class LinePlot {
public:
    LinePlot(std::string title, std::string xlabel, std::string ylabel)
        : title_(std::move(title)), xlabel_(std::move(xlabel)),
          ylabel_(std::move(ylabel)) {}

    void set_log_y(bool log_y) { log_y_ = log_y; }

    // non-positive y values are dropped when the y axis is logarithmic
    void add_series(const std::string& name, const std::vector<double>& x,
                    const std::vector<double>& y);

    void write(const std::string& path) const;

private:
    struct Series {
        std::string name;
        std::vector<double> x, y;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
    bool log_y_ = false;
};

} // namespace vgrd

#endif // VGRD_SVG_HPP
