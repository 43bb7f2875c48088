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

#ifndef EFFDEPTH_DENSE_SIM_HPP
#define EFFDEPTH_DENSE_SIM_HPP

#include <Eigen/Eigenvalues>

#include "effdepth/circuit.hpp"

namespace effdepth {

inline constexpr int kDefaultDenseCap = 10;

// Kernels on a 2^k x 2^k matrix. Qubit q is bit q of the row/column index.
namespace kernels {

/// m <- (u on qubit q) m
inline void left_1q(MatX &m, const Mat2 &u, int q) {
    const Eigen::Index dim = m.rows(), bit = Eigen::Index(1) << q;
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        cplx *c = m.col(col).data();
        for (Eigen::Index r = 0; r < dim; r++) {
            if (r & bit) continue;
            cplx a = c[r], b = c[r | bit];
            c[r] = u(0, 0) * a + u(0, 1) * b;
            c[r | bit] = u(1, 0) * a + u(1, 1) * b;
        }
    }
}

/// m <- m (u on qubit q)^dagger
inline void right_1q_adj(MatX &m, const Mat2 &u, int q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        if (col & bit) continue;
        auto a = m.col(col), b = m.col(col | bit);
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            cplx x = a(r), y = b(r);
            a(r) = x * std::conj(u(0, 0)) + y * std::conj(u(0, 1));
            b(r) = x * std::conj(u(1, 0)) + y * std::conj(u(1, 1));
        }
    }
}

/// m <- (u on qubits a, b) m, local index 2*bit(a) + bit(b).
inline void left_2q(MatX &m, const Mat4 &u, int qa, int qb) {
    const Eigen::Index dim = m.rows(), ba = Eigen::Index(1) << qa, bb = Eigen::Index(1) << qb;
    const Eigen::Index off[4] = {0, bb, ba, ba | bb};
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        cplx *c = m.col(col).data();
        for (Eigen::Index r = 0; r < dim; r++) {
            if (r & (ba | bb)) continue;
            cplx v[4] = {c[r], c[r | off[1]], c[r | off[2]], c[r | off[3]]};
            for (int k = 0; k < 4; k++)
                c[r | off[k]] = u(k, 0) * v[0] + u(k, 1) * v[1] + u(k, 2) * v[2] + u(k, 3) * v[3];
        }
    }
}

/// m <- m (u on qubits a, b)^dagger
inline void right_2q_adj(MatX &m, const Mat4 &u, int qa, int qb) {
    const Eigen::Index ba = Eigen::Index(1) << qa, bb = Eigen::Index(1) << qb;
    const Eigen::Index off[4] = {0, bb, ba, ba | bb};
    Mat4 uc = u.conjugate();
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        if (col & (ba | bb)) continue;
        cplx *c[4] = {m.col(col).data(), m.col(col | off[1]).data(), m.col(col | off[2]).data(),
                      m.col(col | off[3]).data()};
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            cplx v[4] = {c[0][r], c[1][r], c[2][r], c[3][r]};
            for (int k = 0; k < 4; k++)
                c[k][r] = v[0] * uc(k, 0) + v[1] * uc(k, 1) + v[2] * uc(k, 2) + v[3] * uc(k, 3);
        }
    }
}

inline void conjugate_1q(MatX &m, const Mat2 &u, int q) {
    left_1q(m, u, q);
    right_1q_adj(m, u, q);
}

inline void conjugate_2q(MatX &m, const Mat4 &u, int qa, int qb) {
    left_2q(m, u, qa, qb);
    right_2q_adj(m, u, qa, qb);
}

/// Applies a single-qubit superoperator (row-major vectorisation) to qubit q.
inline void superop_1q(MatX &m, const Mat4 &s, int q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    for (Eigen::Index col = 0; col < m.cols(); col++) {
        if (col & bit) continue;
        cplx *c0 = m.col(col).data(), *c1 = m.col(col | bit).data();
        for (Eigen::Index r = 0; r < m.rows(); r++) {
            if (r & bit) continue;
            cplx v[4] = {c0[r], c1[r], c0[r | bit], c1[r | bit]};
            cplx w[4];
            for (int k = 0; k < 4; k++) w[k] = s(k, 0) * v[0] + s(k, 1) * v[1] + s(k, 2) * v[2] + s(k, 3) * v[3];
            c0[r] = w[0];
            c1[r] = w[1];
            c0[r | bit] = w[2];
            c1[r | bit] = w[3];
        }
    }
}

}  // namespace kernels

class DensityMatrix {
   public:
    DensityMatrix() = default;
    DensityMatrix(int n, MatX m) : n_(n), m_(std::move(m)) {
        if (m_.rows() != (Eigen::Index(1) << n) || m_.cols() != m_.rows())
            throw std::invalid_argument("density matrix dimension mismatch");
    }

    /// |0...0><0...0|
    static DensityMatrix zero_state(int n, int cap = kDefaultDenseCap) {
        check_cap(n, cap);
        MatX m = MatX::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
        m(0, 0) = 1;
        return {n, std::move(m)};
    }

    static DensityMatrix maximally_mixed(int n, int cap = kDefaultDenseCap) {
        check_cap(n, cap);
        Eigen::Index d = Eigen::Index(1) << n;
        return {n, MatX::Identity(d, d) / double(d)};
    }

    static DensityMatrix pure(int n, const Eigen::VectorXcd &psi) {
        Eigen::VectorXcd v = psi.normalized();
        return {n, v * v.adjoint()};
    }

    static void check_cap(int n, int cap) {
        if (n > cap)
            throw ResourceCapError("dense simulation of " + std::to_string(n) + " qubits exceeds cap " +
                                   std::to_string(cap));
    }

    int num_qubits() const { return n_; }
    const MatX &matrix() const { return m_; }
    MatX &matrix() { return m_; }

    /// Trace 1, Hermitian, smallest eigenvalue >= -1e-9.
    bool is_valid(double tol = 1e-10) const {
        if (std::abs(m_.trace() - cplx(1)) > tol) return false;
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
        Eigen::SelfAdjointEigenSolver<MatX> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -1e-9;
    }

   private:
    int n_ = 0;
    MatX m_;
};

inline void apply_noise_layer(MatX &m, int n, const Mat4 &superop) {
    for (int q = 0; q < n; q++) kernels::superop_1q(m, superop, q);
}

inline void apply_layer(MatX &m, int n, const Layer &layer, const Mat4 &noise_superop) {
    for (std::size_t g = 0; g < layer.gates.size(); g++)
        kernels::conjugate_2q(m, gate_unitary(layer.gates[g]), layer.pairs[g].first, layer.pairs[g].second);
    for (const auto &op : layer.singles) kernels::conjugate_1q(m, op.unitary(), op.qubit);
    if (layer.noisy) apply_noise_layer(m, n, noise_superop);
}

/// Phi(rho) for the whole circuit.
inline DensityMatrix run(const NoisyCircuit &c, const DensityMatrix &rho, int cap = kDefaultDenseCap) {
    DensityMatrix::check_cap(c.n, cap);
    if (rho.num_qubits() != c.n) throw std::invalid_argument("state and circuit sizes differ");
    MatX m = rho.matrix();
    Mat4 s = c.noise.superoperator();
    for (const Layer &layer : c.layers) apply_layer(m, c.n, layer, s);
    for (int q = 0; q < int(c.final_layer.size()); q++) kernels::conjugate_1q(m, c.final_layer[q], q);
    return {c.n, std::move(m)};
}

/// Tr(P rho), real part (P is Hermitian).
inline double expectation(const DensityMatrix &rho, const PauliString &p) {
    if (int(p.num_qubits()) != rho.num_qubits()) throw std::invalid_argument("Pauli size mismatch");
    const uint64_t xm = p.x_mask(), zm = p.z_mask();
    const int ny = std::popcount(xm & zm);
    static const cplx ipow[4] = {1, cplx(0, 1), -1, cplx(0, -1)};
    const MatX &m = rho.matrix();
    cplx acc = 0;
    for (Eigen::Index k = 0; k < m.rows(); k++) {
        double s = (std::popcount(uint64_t(k) & zm) & 1) ? -1.0 : 1.0;
        acc += s * m(k, Eigen::Index(uint64_t(k) ^ xm));
    }
    return (ipow[ny % 4] * acc).real() * p.sign();
}

inline double purity(const DensityMatrix &rho) { return rho.matrix().cwiseAbs2().sum(); }

/// Schatten-1 norm of rho - sigma.
inline double trace_norm_distance(const MatX &a, const MatX &b) {
    MatX d = a - b;
    MatX h = 0.5 * (d + d.adjoint());
    Eigen::SelfAdjointEigenSolver<MatX> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
}

inline double trace_distance(const DensityMatrix &a, const DensityMatrix &b) {
    return trace_norm_distance(a.matrix(), b.matrix());
}

inline Mat2 reduced_1q(const DensityMatrix &rho, int q) {
    const MatX &m = rho.matrix();
    const Eigen::Index bit = Eigen::Index(1) << q;
    Mat2 r = Mat2::Zero();
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        if (i & bit) continue;
        r(0, 0) += m(i, i);
        r(0, 1) += m(i, i | bit);
        r(1, 0) += m(i | bit, i);
        r(1, 1) += m(i | bit, i | bit);
    }
    return r;
}

/// Exact state in the Pauli basis: r[P] = Tr(P rho), with two bits per qubit
/// holding the (I, X, Y, Z) index. Clifford gates act as signed permutations.
class PauliVector {
   public:
    explicit PauliVector(int n, int cap = kDefaultDenseCap) : n_(n) {
        DensityMatrix::check_cap(n, cap);
        r_.assign(std::size_t(1) << (2 * n), 0.0);
    }

    /// |0...0>: r[P] = 1 iff P contains only I and Z.
    static PauliVector zero_state(int n, int cap = kDefaultDenseCap) {
        PauliVector v(n, cap);
        for (std::size_t idx = 0; idx < v.r_.size(); idx++) {
            bool ok = true;
            for (int q = 0; q < n && ok; q++) {
                int code = (idx >> (2 * q)) & 3;
                ok = code == 0 || code == 3;
            }
            v.r_[idx] = ok ? 1.0 : 0.0;
        }
        return v;
    }

    int num_qubits() const { return n_; }
    const std::vector<double> &coeffs() const { return r_; }

    static std::size_t index_of(const PauliString &p) {
        std::size_t idx = 0;
        for (std::size_t q = 0; q < p.num_qubits(); q++) idx |= std::size_t(p.index(q)) << (2 * q);
        return idx;
    }

    double expectation(const PauliString &p) const { return p.sign() * r_[index_of(p)]; }

    /// Single-qubit channel with PTM t on qubit q: r'[Q] = sum_P T(Q,P) r[P].
    void apply_ptm_1q(const Real44 &t, int q) {
        const std::size_t stride = std::size_t(1) << (2 * q);
        for (std::size_t base = 0; base < r_.size(); base++) {
            if ((base >> (2 * q)) & 3) continue;
            double v[4] = {r_[base], r_[base + stride], r_[base + 2 * stride], r_[base + 3 * stride]};
            for (int k = 0; k < 4; k++) {
                double acc = 0;
                for (int j = 0; j < 4; j++) acc += t(k, j) * v[j];
                r_[base + k * stride] = acc;
            }
        }
    }

    /// Clifford on (a, b) as a signed permutation of local Pauli indices.
    void apply_clifford(const CliffordTableau2 &c, int a, int b) {
        int target[16];
        double sign[16];
        for (int code = 0; code < 16; code++) {
            PauliString p(2);
            p.set(0, code & 3);
            p.set(1, code >> 2);
            PauliString img = c.apply_local(p);
            target[code] = img.index(0) | (img.index(1) << 2);
            sign[code] = img.sign();
        }
        const int sa = 2 * a, sb = 2 * b;
        const std::size_t mask = (std::size_t(3) << sa) | (std::size_t(3) << sb);
        double v[16];
        for (std::size_t base = 0; base < r_.size(); base++) {
            if (base & mask) continue;
            for (int code = 0; code < 16; code++)
                v[code] = r_[base | (std::size_t(code & 3) << sa) | (std::size_t(code >> 2) << sb)];
            for (int code = 0; code < 16; code++) {
                int t = target[code];
                r_[base | (std::size_t(t & 3) << sa) | (std::size_t(t >> 2) << sb)] = sign[code] * v[code];
            }
        }
    }

    /// General two-qubit unitary through its 16x16 PTM.
    void apply_unitary_2q(const Mat4 &u, int a, int b) {
        Eigen::Matrix<double, 16, 16> t;
        for (int q = 0; q < 16; q++)
            for (int p = 0; p < 16; p++) {
                Mat4 pq = kron(pauli_matrix(q & 3), pauli_matrix(q >> 2));
                Mat4 pp = kron(pauli_matrix(p & 3), pauli_matrix(p >> 2));
                t(q, p) = 0.25 * (pq * u * pp * u.adjoint()).trace().real();
            }
        const int sa = 2 * a, sb = 2 * b;
        const std::size_t mask = (std::size_t(3) << sa) | (std::size_t(3) << sb);
        Eigen::Matrix<double, 16, 1> v;
        for (std::size_t base = 0; base < r_.size(); base++) {
            if (base & mask) continue;
            for (int code = 0; code < 16; code++)
                v(code) = r_[base | (std::size_t(code & 3) << sa) | (std::size_t(code >> 2) << sb)];
            Eigen::Matrix<double, 16, 1> w = t * v;
            for (int code = 0; code < 16; code++)
                r_[base | (std::size_t(code & 3) << sa) | (std::size_t(code >> 2) << sb)] = w(code);
        }
    }

   private:
    int n_;
    std::vector<double> r_;
};

/// Phi applied in the Pauli basis. Two-qubit Cliffords use the permutation path.
inline PauliVector run_pauli(const NoisyCircuit &c, PauliVector v) {
    const Real44 &noise = c.noise.matrix();
    for (const Layer &layer : c.layers) {
        for (std::size_t g = 0; g < layer.gates.size(); g++) {
            auto [a, b] = layer.pairs[g];
            if (auto *cl = std::get_if<Clifford2Gate>(&layer.gates[g]))
                v.apply_clifford(cl->tableau, a, b);
            else
                v.apply_unitary_2q(gate_unitary(layer.gates[g]), a, b);
        }
        std::vector<Real44> local(c.n, Real44::Identity());
        for (const auto &op : layer.singles) local[op.qubit] = ptm_of_unitary(op.unitary()).matrix();
        for (int q = 0; q < c.n; q++) {
            Real44 t = layer.noisy ? Real44(noise * local[q]) : local[q];
            if (!t.isIdentity(0)) v.apply_ptm_1q(t, q);
        }
    }
    for (int q = 0; q < int(c.final_layer.size()); q++) v.apply_ptm_1q(ptm_of_unitary(c.final_layer[q]).matrix(), q);
    return v;
}

}  // namespace effdepth

#endif
