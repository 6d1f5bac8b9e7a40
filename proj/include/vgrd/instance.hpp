#ifndef VGRD_INSTANCE_HPP
#define VGRD_INSTANCE_HPP

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "vgrd/covariance.hpp"

namespace vgrd {

// Parsed problem instance. Covariance comes either as 2TC parameters
// {"n", "rho0", "rho1"} or an explicit {"matrix": [[...]]}; distortions either
// directly as {"e": [...]} or as {"raw_distortions": [...]} (with optional
// {"raw_variances": [...]} for the 2TC form), which triggers variance
// normalization.
struct Instance {
    std::optional<TwoTypeCorrelation> tc; // set when given in 2TC form
    Matrix k;
    DistortionConstraints e;
    bool normalized = false;
};

Instance parse_instance(const nlohmann::json& j);
Instance load_instance(const std::string& path);

} // namespace vgrd

#endif // VGRD_INSTANCE_HPP
