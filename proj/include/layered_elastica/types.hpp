#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace le {

using cplx = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using CVec2 = Eigen::Vector2cd;
using CVec3 = Eigen::Vector3cd;
using CMat2 = Eigen::Matrix2cd;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorCode {
    invalid_medium,
    branch_cut,
    degenerate_denominator,
    coincident_points,
    slow_decay,
    budget_exceeded,
    grazing_direction,
    domain_error,
    singular_system,
    invalid_key,
    overflow,
    singular_origin,
    invalid_input,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

enum class Side { plus, minus };
enum class Wave { p, s };

inline Side side_of(double height) { return height >= 0.0 ? Side::plus : Side::minus; }

}  // namespace le
