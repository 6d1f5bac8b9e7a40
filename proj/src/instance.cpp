#include "vgrd/instance.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "vgrd/errors.hpp"

namespace vgrd {

namespace {

using nlohmann::json;

Vector parse_vector(const json& j, const char* name) {
    if (!j.is_array() || j.empty())
        throw InvalidInput(std::string(name) + " must be a non-empty array");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw InvalidInput(std::string(name) + " entries must be numbers");
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
        if (!std::isfinite(v[static_cast<Eigen::Index>(i)]))
            throw InvalidInput(std::string(name) + " entries must be finite");
    }
    return v;
}

Matrix parse_matrix(const json& j) {
    if (!j.is_array() || j.empty())
        throw InvalidInput("matrix must be a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = parse_vector(j[i], "matrix row");
        if (static_cast<std::size_t>(row.size()) != n)
            throw InvalidInput("matrix must be square");
        m.row(static_cast<Eigen::Index>(i)) = row;
    }
    if (!is_symmetric(m, 1e-12 * std::max(1.0, inf_norm(m))))
        throw InvalidInput("matrix must be symmetric");
    return 0.5 * (m + m.transpose());
}

} // namespace

Instance parse_instance(const json& j) {
    if (!j.is_object()) throw InvalidInput("instance must be a JSON object");

    const bool has_tc = j.contains("n") || j.contains("rho0") || j.contains("rho1");
    const bool has_matrix = j.contains("matrix");
    if (has_tc == has_matrix)
        throw InvalidInput(
            "exactly one covariance form required: {n, rho0, rho1} or {matrix}");

    Instance inst;
    if (has_tc) {
        if (!(j.contains("n") && j.contains("rho0") && j.contains("rho1")))
            throw InvalidInput("2TC form requires all of n, rho0, rho1");
        TwoTypeCorrelation tc;
        tc.n = j.at("n").get<int>();
        tc.rho0 = j.at("rho0").get<double>();
        tc.rho1 = j.at("rho1").get<double>();
        inst.tc = tc;
        inst.k = build_2tc(tc);
    } else {
        inst.k = parse_matrix(j.at("matrix"));
    }

    const bool has_e = j.contains("e");
    const bool has_raw = j.contains("raw_distortions");
    if (has_e == has_raw)
        throw InvalidInput("exactly one distortion form required: e or raw_distortions");

    const int n = static_cast<int>(inst.k.rows());
    if (has_e) {
        if (j.contains("raw_variances"))
            throw InvalidInput("raw_variances only combines with raw_distortions");
        const Vector e = parse_vector(j.at("e"), "e");
        if (e.size() != n) throw InvalidInput("e dimension does not match covariance");
        for (int i = 0; i < n; ++i)
            if (std::abs(inst.k(i, i) - 1.0) > 1e-12)
                throw InvalidInput("covariance must have unit diagonal when e is given "
                                   "(use raw_distortions for unnormalized sources)");
        inst.e = DistortionConstraints::from_vector(e);
    } else {
        const Vector dtilde = parse_vector(j.at("raw_distortions"), "raw_distortions");
        if (dtilde.size() != n)
            throw InvalidInput("raw_distortions dimension does not match covariance");
        Matrix sigma = inst.k;
        if (j.contains("raw_variances")) {
            if (!has_tc)
                throw InvalidInput("raw_variances only combines with the 2TC form; an "
                                   "explicit matrix already carries its variances");
            const Vector var = parse_vector(j.at("raw_variances"), "raw_variances");
            if (var.size() != n)
                throw InvalidInput("raw_variances dimension does not match covariance");
            const Vector sd = var.cwiseSqrt();
            sigma = sd.asDiagonal() * inst.k * sd.asDiagonal();
            sigma = Matrix(0.5 * (sigma + sigma.transpose().eval()));
        }
        auto [k, e] = normalize_source(sigma, dtilde);
        inst.k = std::move(k);
        inst.e = std::move(e);
        inst.normalized = true;
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw InvalidInput("malformed JSON in " + path + ": " + err.what());
    }
    return parse_instance(j);
}

} // namespace vgrd
