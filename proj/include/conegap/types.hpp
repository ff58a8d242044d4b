#pragma once

#include <complex>

#include <Eigen/Dense>

namespace conegap {

template <typename Scalar>
using ComplexOf = std::complex<Scalar>;

template <typename Scalar>
using MatrixOf = Eigen::Matrix<ComplexOf<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorOf = Eigen::Matrix<ComplexOf<Scalar>, Eigen::Dynamic, 1>;

using Complex = ComplexOf<double>;
using CMatrix = MatrixOf<double>;
using CVector = VectorOf<double>;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

}  // namespace conegap
