#ifndef VGRD_REGION_HPP
#define VGRD_REGION_HPP

#include <utility>
#include <vector>

#include "vgrd/covariance.hpp"

namespace vgrd {

// Bounds on the maximum peripheral correlation rho0^m. The concise pair
// brackets rho0^m as 1 - e2 + c_l/N <= rho0^m <= 1 - e2 + c_u/(N-1).
struct Rho0Bounds {
    double lower_concise = 0.0;
    double lower_sharp = 0.0;
    double upper_concise = 0.0;
    double upper_sharp = 0.0;
    double c_l = 0.0;
    double c_u = 0.0;
    double e3_bar = 0.0; // mean of the sorted e_3..e_N
};

struct Rho0Result {
    double rho0_m = 0.0;
    Rho0Bounds bounds;
    int iterations = 0; // bisection steps (0 for the tied e2 = e3 branch)
};

Rho0Bounds rho0_bounds(const DistortionConstraints& e);

// Maximum peripheral correlation keeping the SDC satisfiable at rho1 = 0:
// the root of f(rho0) = g(rho0) on (1 - e2, 1 - e3), found by bisection
// (1 - e2 exactly when the largest peripheral constraint is tied).
Rho0Result rho0_max(const DistortionConstraints& e);

// Largest rho1 keeping condition E1 satisfied at the given rho0.
// N = 2 reduces to sqrt((1 - e1)(1 - e2)).
double rho1_max(const DistortionConstraints& e, double rho0);

// (rho0, rho1_max) pairs on a uniform rho0 grid over [0, rho0_m].
std::vector<std::pair<double, double>> region_boundary(const DistortionConstraints& e,
                                                       int samples);

} // namespace vgrd

#endif // VGRD_REGION_HPP
