// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "hamlearn/core/errors.hpp"

namespace hamlearn {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Number of qubits for a power-of-two dimension, or -1.
inline int qubits_for_dim(Eigen::Index dim) {
    if (dim < 1) return -1;
    int q = 0;
    while ((Eigen::Index{1} << q) < dim) ++q;
    return (Eigen::Index{1} << q) == dim ? q : -1;
}

/// Square complex matrix whose dimension is 2^k, k >= 1.
class DenseOperator {
   public:
    DenseOperator() = default;
    explicit DenseOperator(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw DimensionMismatch("DenseOperator must be square");
        q_ = qubits_for_dim(m_.rows());
        if (q_ < 1) throw DimensionMismatch("DenseOperator dimension must be 2^k with k >= 1");
    }

    static DenseOperator identity(int qubits) {
        return DenseOperator(Matrix::Identity(Eigen::Index{1} << qubits, Eigen::Index{1} << qubits));
    }
    static DenseOperator zero(int qubits) {
        return DenseOperator(Matrix::Zero(Eigen::Index{1} << qubits, Eigen::Index{1} << qubits));
    }

    int qubits() const { return q_; }
    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

   private:
    Matrix m_;
    int q_ = 0;
};

/// Complex vector of dimension 2^k.
class StateVector {
   public:
    StateVector() = default;
    explicit StateVector(Vector v) : v_(std::move(v)) {
        q_ = qubits_for_dim(v_.size());
        if (q_ < 1) throw DimensionMismatch("StateVector dimension must be 2^k with k >= 1");
    }

    int qubits() const { return q_; }
    Eigen::Index dim() const { return v_.size(); }
    const Vector& amplitudes() const { return v_; }
    bool is_normalized(double tol = 1e-10) const { return std::abs(v_.norm() - 1.0) <= tol; }

   private:
    Vector v_;
    int q_ = 0;
};

/// Spectral norm.
inline double operator_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

/// Schatten-1 norm of a Hermitian matrix.
inline double trace_norm_hermitian(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
    Matrix d = u.adjoint() * u - Matrix::Identity(u.cols(), u.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
Matrix hermitian_function(const Matrix& h, F&& f) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& w = es.eigenvalues();
    Eigen::VectorXcd fw(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) fw(i) = f(w(i));
    return es.eigenvectors() * fw.asDiagonal() * es.eigenvectors().adjoint();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
inline Matrix psd_sqrt(const Matrix& a) {
    Matrix h = 0.5 * (a + a.adjoint());
    return hermitian_function(h, [](double x) { return cplx(std::sqrt(std::max(x, 0.0)), 0.0); });
}

}  // namespace hamlearn
