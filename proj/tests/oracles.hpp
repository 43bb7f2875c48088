// Copyright 2026 The effdepth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force reference implementations. Everything here builds full 2^n
// matrices with Kronecker products and never calls the library kernels.

#ifndef EFFDEPTH_TESTS_ORACLES_HPP
#define EFFDEPTH_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(int idx) {
    Mat m(2, 2);
    switch (idx) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1;
    }
    return m;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++)
        for (Eigen::Index j = 0; j < a.cols(); j++) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

/// Full operator for per-qubit factors; factor[q] acts on bit q of the index.
inline Mat tensor(const std::vector<Mat> &factors) {
    Mat r = Mat::Identity(1, 1);
    for (std::size_t q = 0; q < factors.size(); q++) r = kron(factors[q], r);
    return r;
}

/// Pauli from a string like "XIZ" (character q acts on qubit q), with optional sign.
inline Mat pauli_string(const std::string &s) {
    std::string body = s;
    double sign = 1;
    if (!body.empty() && body[0] == '-') {
        sign = -1;
        body = body.substr(1);
    }
    std::vector<Mat> f;
    for (char ch : body) f.push_back(pauli(ch == 'X' ? 1 : ch == 'Y' ? 2 : ch == 'Z' ? 3 : 0));
    return sign * tensor(f);
}

/// Full matrix of a 4x4 gate on qubits (a, b), local index 2*bit(a) + bit(b).
inline Mat embed2(const Mat &u, int n, int a, int b) {
    const Eigen::Index d = Eigen::Index(1) << n;
    Mat full = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; i++)
        for (Eigen::Index j = 0; j < d; j++) {
            if ((i & ~((1 << a) | (1 << b))) != (j & ~((1 << a) | (1 << b)))) continue;
            int li = 2 * ((i >> a) & 1) + ((i >> b) & 1);
            int lj = 2 * ((j >> a) & 1) + ((j >> b) & 1);
            full(i, j) = u(li, lj);
        }
    return full;
}

inline Mat embed1(const Mat &u, int n, int q) {
    std::vector<Mat> f(n, Mat::Identity(2, 2));
    f[q] = u;
    return tensor(f);
}

/// Applies Kraus operators on qubit q of a full density matrix.
inline Mat apply_kraus(const Mat &rho, const std::vector<Mat> &kraus, int n, int q) {
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const Mat &k : kraus) {
        Mat e = embed1(k, n, q);
        out += e * rho * e.adjoint();
    }
    return out;
}

inline Mat adjoint_kraus(const Mat &o, const std::vector<Mat> &kraus, int n, int q) {
    Mat out = Mat::Zero(o.rows(), o.cols());
    for (const Mat &k : kraus) {
        Mat e = embed1(k, n, q);
        out += e.adjoint() * o * e;
    }
    return out;
}

/// Partial trace onto qubit q.
inline Mat reduce(const Mat &rho, int n, int q) {
    Mat r = Mat::Zero(2, 2);
    for (Eigen::Index i = 0; i < rho.rows(); i++)
        for (Eigen::Index j = 0; j < rho.cols(); j++)
            if ((i & ~(Eigen::Index(1) << q)) == (j & ~(Eigen::Index(1) << q))) r((i >> q) & 1, (j >> q) & 1) += rho(i, j);
    (void)n;
    return r;
}

/// Matrix exponential exp(-i t H) of a Hermitian H.
inline Mat expmi(const Mat &h, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < ph.size(); k++) ph(k) = std::exp(cplx(0, -t * es.eigenvalues()(k)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace oracle

#endif
