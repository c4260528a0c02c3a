#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hr {

using cplx = std::complex<double>;
using PlanarPoint = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

// cube root of unity e^{2πi/3}
inline const cplx jroot = std::polar(1.0, 2.0 * pi / 3.0);

// Failure with a taxonomy tag (NoConvergence, SingularJacobian, SmallDivisor, ...)
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

inline PlanarPoint point(cplx z, cplx w) {
    PlanarPoint p;
    p << z, w;
    return p;
}

// principal branch of x^(p/q) through exp/log
inline cplx principal_pow(cplx x, double e) {
    if (x == cplx(0)) return 0;
    return std::exp(e * std::log(x));
}

}  // namespace hr
