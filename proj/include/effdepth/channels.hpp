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

#ifndef EFFDEPTH_CHANNELS_HPP
#define EFFDEPTH_CHANNELS_HPP

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <optional>

#include "effdepth/common.hpp"

namespace effdepth {

/// Kraus representation of a single-qubit channel.
struct KrausChannel {
    std::vector<Mat2> ops;

    void validate(double tol = 1e-10) const {
        if (ops.empty()) throw ConfigError("Kraus channel needs at least one operator");
        Mat2 s = Mat2::Zero();
        for (const Mat2 &k : ops) s += k.adjoint() * k;
        if ((s - Mat2::Identity()).cwiseAbs().maxCoeff() > tol)
            throw ConfigError("Kraus operators are not trace preserving");
    }
};

/// Real 4x4 Pauli transfer matrix, T(Q,P) = Tr(Q N(P)) / 2 with order I, X, Y, Z.
class PauliTransferMatrix {
   public:
    PauliTransferMatrix() : m_(Real44::Identity()) {}
    explicit PauliTransferMatrix(const Real44 &m, double tol = 1e-10) : m_(m) {
        if (std::abs(m(0, 0) - 1) > tol || std::abs(m(0, 1)) > tol || std::abs(m(0, 2)) > tol ||
            std::abs(m(0, 3)) > tol)
            throw ConfigError("PTM first row must be (1,0,0,0)");
        if (m.cwiseAbs().maxCoeff() > 1 + tol) throw ConfigError("PTM entries must lie in [-1,1]");
        m_.row(0) << 1, 0, 0, 0;
    }

    const Real44 &matrix() const { return m_; }
    double operator()(int q, int p) const { return m_(q, p); }
    PauliTransferMatrix adjoint() const {
        PauliTransferMatrix r;
        r.m_ = m_.transpose();
        return r;
    }

    /// Superoperator acting on the row-major vectorisation (rho00, rho01, rho10, rho11).
    Mat4 superoperator() const {
        Mat4 s = Mat4::Zero();
        for (int i = 0; i < 2; i++)
            for (int j = 0; j < 2; j++)
                for (int k = 0; k < 2; k++)
                    for (int l = 0; l < 2; l++) {
                        cplx acc = 0;
                        for (int p = 0; p < 4; p++) {
                            cplx plk = pauli_matrix(p)(l, k);
                            if (plk == cplx(0)) continue;
                            for (int q = 0; q < 4; q++) acc += 0.5 * plk * m_(q, p) * pauli_matrix(q)(i, j);
                        }
                        s(2 * i + j, 2 * k + l) = acc;
                    }
        return s;
    }

   private:
    Real44 m_;
};

inline PauliTransferMatrix ptm_from_kraus(const KrausChannel &channel) {
    channel.validate();
    Real44 m;
    for (int q = 0; q < 4; q++)
        for (int p = 0; p < 4; p++) {
            Mat2 out = Mat2::Zero();
            for (const Mat2 &k : channel.ops) out += k * pauli_matrix(p) * k.adjoint();
            m(q, p) = 0.5 * (pauli_matrix(q) * out).trace().real();
        }
    return PauliTransferMatrix(m);
}

inline PauliTransferMatrix ptm_of_unitary(const Mat2 &u) {
    return ptm_from_kraus(KrausChannel{{u}});
}

/// T(A o B): B is applied first.
inline PauliTransferMatrix compose(const PauliTransferMatrix &a, const PauliTransferMatrix &b) {
    return PauliTransferMatrix(a.matrix() * b.matrix());
}

inline KrausChannel depolarizing(double p) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("depolarizing p must be in [0,1]");
    KrausChannel k;
    k.ops.push_back(std::sqrt(1 - 0.75 * p) * pauli_matrix(0));
    for (int i = 1; i < 4; i++) k.ops.push_back(std::sqrt(0.25 * p) * pauli_matrix(i));
    return k;
}

inline KrausChannel amplitude_damping(double q) {
    if (!(q >= 0 && q <= 1)) throw ConfigError("amplitude damping q must be in [0,1]");
    Mat2 k0 = (Mat2() << 1, 0, 0, std::sqrt(1 - q)).finished();
    Mat2 k1 = (Mat2() << 0, std::sqrt(q), 0, 0).finished();
    return KrausChannel{{k0, k1}};
}

inline KrausChannel dephasing(double p) {
    if (!(p >= 0 && p <= 1)) throw ConfigError("dephasing p must be in [0,1]");
    return KrausChannel{{std::sqrt(1 - 0.5 * p) * pauli_matrix(0), std::sqrt(0.5 * p) * pauli_matrix(3)}};
}

/// Depolarizing applied after amplitude damping.
inline PauliTransferMatrix dep_after_amp(double p, double q) {
    return compose(ptm_from_kraus(depolarizing(p)), ptm_from_kraus(amplitude_damping(q)));
}

/// SU(2) element whose adjoint action on Bloch vectors is the rotation r.
inline Mat2 su2_from_rotation(const Real33 &r) {
    Eigen::Quaterniond quat(r);
    quat.normalize();
    return quat.w() * pauli_matrix(0) -
           cplx(0, 1) * (quat.x() * pauli_matrix(1) + quat.y() * pauli_matrix(2) + quat.z() * pauli_matrix(3));
}

/// N(rho) = U N'(V^dag rho V) U^dag with N' having PTM [[1,0],[t,diag(D)]].
struct ChannelNormalForm {
    Mat2 u;
    Mat2 v;
    Real33 r1;
    Real33 r2;
    Real3 t;
    Real3 d;

    /// PTM of the inner channel N'.
    Real44 inner_ptm() const {
        Real44 m = Real44::Zero();
        m(0, 0) = 1;
        m.block<3, 1>(1, 0) = t;
        m.block<3, 3>(1, 1) = d.asDiagonal();
        return m;
    }

    /// PTM rebuilt from the rotations, r1 * inner * r2^T.
    Real44 reconstructed_ptm() const {
        Real44 a = Real44::Identity(), b = Real44::Identity();
        a.block<3, 3>(1, 1) = r1;
        b.block<3, 3>(1, 1) = r2.transpose();
        return a * inner_ptm() * b;
    }
};

inline ChannelNormalForm normal_form(const PauliTransferMatrix &ptm) {
    const Real44 &m = ptm.matrix();
    Real33 block = m.block<3, 3>(1, 1);
    Real3 b = m.block<3, 1>(1, 0);
    Eigen::JacobiSVD<Real33> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
    ChannelNormalForm nf;
    nf.r1 = svd.matrixU();
    nf.r2 = svd.matrixV();
    nf.d = svd.singularValues();
    if (nf.r1.determinant() < 0) {
        nf.r1 = -nf.r1;
        nf.d = -nf.d;
    }
    if (nf.r2.determinant() < 0) {
        nf.r2 = -nf.r2;
        nf.d = -nf.d;
    }
    nf.t = nf.r1.transpose() * b;
    nf.u = su2_from_rotation(nf.r1);
    nf.v = su2_from_rotation(nf.r2);
    return nf;
}

/// c = (|t|^2 + |D|^2) / 3.
inline double contraction_c(const ChannelNormalForm &nf) {
    return (nf.t.squaredNorm() + nf.d.squaredNorm()) / 3.0;
}

inline bool is_unitary(const ChannelNormalForm &nf) { return std::abs(contraction_c(nf) - 1.0) < 1e-9; }

/// (t_Q, D_Q) with N'^*(Q) = t_Q I + D_Q Q for Q in {X=1, Y=2, Z=3}.
inline std::pair<double, double> adjoint_coeffs(const ChannelNormalForm &nf, int q) {
    if (q < 1 || q > 3) throw std::invalid_argument("axis must be X, Y or Z");
    return {nf.t(q - 1), nf.d(q - 1)};
}

/// 12 max_P |D_P| / (1 - |D_P|); empty when some |D_P| >= 1.
inline std::optional<double> w1_factor(const ChannelNormalForm &nf) {
    double worst = 0;
    for (int i = 0; i < 3; i++) {
        double a = std::abs(nf.d(i));
        if (a >= 1) return std::nullopt;
        worst = std::max(worst, a / (1 - a));
    }
    return 12 * worst;
}

struct ContractionParams {
    double c;
    double t_norm;
    double t_norm_sq;
    double d_norm_sq;
    double b_worst;  ///< +inf when no finite W1 factor exists.
};

inline ContractionParams contraction_params(const ChannelNormalForm &nf) {
    auto b = w1_factor(nf);
    return {contraction_c(nf), nf.t.norm(), nf.t.squaredNorm(), nf.d.squaredNorm(),
            b ? *b : std::numeric_limits<double>::infinity()};
}

/// Random channel from a Haar-random isometry C^2 -> C^2 (x) C^env.
inline KrausChannel random_channel(Rng &rng, int env_dim = 4) {
    MatX g(2 * env_dim, 2);
    for (Eigen::Index i = 0; i < g.rows(); i++)
        for (Eigen::Index j = 0; j < g.cols(); j++) g(i, j) = cplx(standard_normal(rng), standard_normal(rng));
    Eigen::HouseholderQR<MatX> qr(g);
    MatX iso = qr.householderQ() * MatX::Identity(2 * env_dim, 2);
    KrausChannel k;
    for (int e = 0; e < env_dim; e++) k.ops.push_back(iso.block<2, 2>(2 * e, 0));
    return k;
}

}  // namespace effdepth

#endif
