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

#ifndef EFFDEPTH_LIGHTCONE_HPP
#define EFFDEPTH_LIGHTCONE_HPP

#include <chrono>
#include <cmath>
#include <json.hpp>

#include "effdepth/dense_sim.hpp"

namespace effdepth {

inline constexpr int kDefaultSupportCap = 12;

/// offset * I + M (x) I, with M a dense Hermitian matrix on `support` (local
/// bit k of M's index is qubit support[k]). M is kept traceless.
class PropagatedObservable {
   public:
    static PropagatedObservable from_pauli(const PauliString &p) {
        PropagatedObservable o;
        o.support_.clear();
        for (std::size_t q : p.support()) o.support_.push_back(int(q));
        o.m_ = MatX::Identity(1, 1);
        for (std::size_t k = 0; k < o.support_.size(); k++) {
            MatX next(o.m_.rows() * 2, o.m_.cols() * 2);
            const Mat2 &s = pauli_matrix(p.index(o.support_[k]));
            for (int a = 0; a < 2; a++)
                for (int b = 0; b < 2; b++) next.block(a * o.m_.rows(), b * o.m_.cols(), o.m_.rows(), o.m_.cols()) = s(a, b) * o.m_;
            o.m_ = std::move(next);
        }
        o.m_ *= double(p.sign());
        o.normalize();
        return o;
    }

    const std::vector<int> &support() const { return support_; }
    const MatX &matrix() const { return m_; }
    double identity_offset() const { return offset_; }

    /// Tr(O |0^n><0^n|).
    double value_on_zero_state() const { return offset_ + m_(0, 0).real(); }

    /// Half the spectral spread of M.
    double certificate() const {
        if (support_.empty()) return 0.0;
        MatX h = 0.5 * (m_ + m_.adjoint());
        Eigen::SelfAdjointEigenSolver<MatX> es(h, Eigen::EigenvaluesOnly);
        return 0.5 * (es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff());
    }

    /// Dense operator on all n qubits.
    MatX full_matrix(int n) const {
        Eigen::Index d = Eigen::Index(1) << n;
        MatX out = offset_ * MatX::Identity(d, d);
        for (Eigen::Index i = 0; i < d; i++)
            for (Eigen::Index j = 0; j < d; j++) {
                bool same_rest = true;
                Eigen::Index li = 0, lj = 0;
                for (int q = 0; q < n; q++) {
                    int k = local_index(q);
                    bool bi = (i >> q) & 1, bj = (j >> q) & 1;
                    if (k < 0) {
                        same_rest = same_rest && bi == bj;
                    } else {
                        li |= Eigen::Index(bi) << k;
                        lj |= Eigen::Index(bj) << k;
                    }
                }
                if (same_rest) out(i, j) += m_(li, lj);
            }
        return out;
    }

    int local_index(int qubit) const {
        for (std::size_t k = 0; k < support_.size(); k++)
            if (support_[k] == qubit) return int(k);
        return -1;
    }

    /// Appends qubit as the new most significant local bit: M -> I (x) M.
    int extend(int qubit, int cap) {
        int k = local_index(qubit);
        if (k >= 0) return k;
        if (int(support_.size()) + 1 > cap)
            throw ResourceCapError("light-cone support exceeds cap " + std::to_string(cap));
        Eigen::Index d = m_.rows();
        MatX next = MatX::Zero(2 * d, 2 * d);
        next.topLeftCorner(d, d) = m_;
        next.bottomRightCorner(d, d) = m_;
        m_ = std::move(next);
        support_.push_back(qubit);
        return int(support_.size()) - 1;
    }

    MatX &mutable_matrix() { return m_; }

    /// Moves the trace into the offset and drops qubits where M acts as identity.
    void normalize(double tol = 1e-13) {
        double tr = m_.trace().real() / double(m_.rows());
        offset_ += tr;
        m_ -= tr * MatX::Identity(m_.rows(), m_.cols());
        for (int k = int(support_.size()) - 1; k >= 0; k--) drop_if_trivial(k, tol);
    }

   private:
    void drop_if_trivial(int k, double tol) {
        const Eigen::Index bit = Eigen::Index(1) << k, d = m_.rows();
        for (Eigen::Index i = 0; i < d; i++) {
            if (i & bit) continue;
            for (Eigen::Index j = 0; j < d; j++) {
                if (j & bit) continue;
                if (std::abs(m_(i, j) - m_(i | bit, j | bit)) > tol || std::abs(m_(i | bit, j)) > tol ||
                    std::abs(m_(i, j | bit)) > tol)
                    return;
            }
        }
        MatX next(d / 2, d / 2);
        auto squeeze = [&](Eigen::Index x) { return (x & (bit - 1)) | ((x >> 1) & ~(bit - 1)); };
        for (Eigen::Index i = 0; i < d; i++) {
            if (i & bit) continue;
            for (Eigen::Index j = 0; j < d; j++)
                if (!(j & bit)) next(squeeze(i), squeeze(j)) = m_(i, j);
        }
        m_ = std::move(next);
        support_.erase(support_.begin() + k);
    }

    std::vector<int> support_;
    MatX m_ = MatX::Zero(1, 1);
    double offset_ = 0;
};

/// Heisenberg step through circuit layer `layer` (0-based), including the
/// final single-qubit layer when `with_final` is set.
inline void backpropagate_step(PropagatedObservable &o, const NoisyCircuit &c, std::size_t layer, bool with_final,
                               int cap = kDefaultSupportCap) {
    if (with_final)
        for (std::size_t k = 0; k < o.support().size(); k++)
            kernels::conjugate_1q(o.mutable_matrix(), c.final_layer[o.support()[k]].adjoint(), int(k));
    const Layer &l = c.layers.at(layer);
    if (l.noisy) {
        Mat4 s = c.noise.adjoint().superoperator();
        for (std::size_t k = 0; k < o.support().size(); k++) kernels::superop_1q(o.mutable_matrix(), s, int(k));
    }
    for (const auto &op : l.singles) {
        int k = o.local_index(op.qubit);
        if (k >= 0) kernels::conjugate_1q(o.mutable_matrix(), op.unitary().adjoint(), k);
    }
    for (std::size_t g = 0; g < l.gates.size(); g++) {
        auto [a, b] = l.pairs[g];
        if (o.local_index(a) < 0 && o.local_index(b) < 0) continue;
        int ka = o.extend(a, cap), kb = o.extend(b, cap);
        kernels::conjugate_2q(o.mutable_matrix(), gate_unitary(l.gates[g]).adjoint(), ka, kb);
    }
    o.normalize();
}

/// Phi*_[L-steps+1, L](P).
inline PropagatedObservable backpropagate(const NoisyCircuit &c, const PauliString &p, std::size_t steps,
                                          int cap = kDefaultSupportCap) {
    auto o = PropagatedObservable::from_pauli(p);
    steps = std::min(steps, c.depth());
    for (std::size_t t = 1; t <= steps; t++)
        backpropagate_step(o, c, c.depth() - t, t == 1 && c.has_final_layer(), cap);
    return o;
}

/// Tr(P Phi_[L-t+1, L](|0><0|)) for t = 0..steps.
inline std::vector<double> truncated_values(const NoisyCircuit &c, const PauliString &p, std::size_t steps,
                                            int cap = kDefaultSupportCap) {
    auto o = PropagatedObservable::from_pauli(p);
    std::vector<double> out{o.value_on_zero_state()};
    steps = std::min(steps, c.depth());
    for (std::size_t t = 1; t <= steps; t++) {
        backpropagate_step(o, c, c.depth() - t, t == 1 && c.has_final_layer(), cap);
        out.push_back(o.value_on_zero_state());
    }
    return out;
}

/// ceil(log(4 / (delta eps^2)) / log(1/c)), at least 1.
inline std::size_t truncation_depth(double c, double eps, double delta) {
    if (!(eps > 0) || !(delta > 0) || !(delta <= 1)) throw ConfigError("eps and delta must be positive, delta <= 1");
    if (c >= 1) throw ConfigError("no finite truncation depth for unitary noise (c >= 1)");
    if (c <= 0) return 1;
    double l = std::ceil(std::log(4.0 / (delta * eps * eps)) / std::log(1.0 / c));
    return std::size_t(std::max(1.0, l));
}

/// True when c^|P| / eps^2 <= delta, so outputting 0 meets the guarantee.
inline bool zero_rule(double c, std::size_t weight, double eps, double delta) {
    return std::pow(c, double(weight)) / (eps * eps) <= delta;
}

struct EstimateReport {
    double value = 0;
    std::size_t l_theoretical = 0;
    std::size_t steps_executed = 0;
    bool early_break = false;
    double certificate = 0;  ///< E_t at the last executed step
    std::size_t support_peak = 0;
    double c = 0;
    double wall_ms = 0;

    nlohmann::json to_json() const {
        return {{"value", value},
                {"l_theoretical", l_theoretical},
                {"steps_executed", steps_executed},
                {"early_break", early_break},
                {"certificate", certificate},
                {"support_peak", support_peak},
                {"c", c},
                {"wall_ms", wall_ms}};
    }
};

struct EstimateOptions {
    int support_cap = kDefaultSupportCap;
    bool allow_early_break = true;
};

/// Truncated Heisenberg estimate of Tr(P Phi(|0^n><0^n|)).
inline EstimateReport estimate(const NoisyCircuit &c, const PauliString &p, double eps, double delta,
                               const EstimateOptions &opts = {}) {
    auto start = std::chrono::steady_clock::now();
    if (int(p.num_qubits()) != c.n) throw ConfigError("Pauli length differs from circuit width");
    if (p.weight() == 0) throw ConfigError("estimate needs a non-identity Pauli");
    EstimateReport r;
    r.c = contraction_c(normal_form(c.noise));
    r.l_theoretical = truncation_depth(r.c, eps, delta);
    auto o = PropagatedObservable::from_pauli(p);
    r.support_peak = o.support().size();
    std::size_t steps = std::min(r.l_theoretical, c.depth());
    for (std::size_t t = 1; t <= steps; t++) {
        backpropagate_step(o, c, c.depth() - t, t == 1 && c.has_final_layer(), opts.support_cap);
        r.support_peak = std::max(r.support_peak, o.support().size());
        r.steps_executed = t;
        r.certificate = o.certificate();
        if (opts.allow_early_break && 2 * r.certificate <= eps) {
            r.early_break = true;
            break;
        }
    }
    r.value = o.value_on_zero_state();
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace effdepth

#endif
