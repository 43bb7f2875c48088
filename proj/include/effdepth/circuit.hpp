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

#ifndef EFFDEPTH_CIRCUIT_HPP
#define EFFDEPTH_CIRCUIT_HPP

#include <numbers>
#include <optional>
#include <set>
#include <utility>
#include <variant>

#include "effdepth/channels.hpp"
#include "effdepth/pauli.hpp"

namespace effdepth {

using QubitPair = std::pair<int, int>;

/// Per-layer lists of disjoint qubit pairs.
struct CouplingGraph {
    int n = 0;
    std::vector<std::vector<QubitPair>> layers;

    std::size_t depth() const { return layers.size(); }

    void validate() const {
        if (n < 1) throw ConfigError("graph needs at least one qubit");
        for (const auto &layer : layers) {
            std::set<int> used;
            for (auto [a, b] : layer) {
                if (a < 0 || b < 0 || a >= n || b >= n || a == b)
                    throw ConfigError("bad qubit pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
                if (!used.insert(a).second || !used.insert(b).second)
                    throw ConfigError("pairs within a layer must be disjoint");
            }
        }
    }
};

/// Open-boundary brickwork. Layer 1 holds (0,1),(2,3),...; layer 2 holds
/// (1,2),(3,4),...; `shifted` swaps the two. With n = 2 every layer is {(0,1)}.
inline CouplingGraph brickwork_1d(int n, int depth, bool shifted = false) {
    if (n < 2) throw ConfigError("brickwork needs n >= 2");
    if (depth < 0) throw ConfigError("depth must be non-negative");
    CouplingGraph g{n, {}};
    for (int layer = 0; layer < depth; layer++) {
        int start = ((layer % 2 == 1) != shifted) ? 1 : 0;
        if (n == 2) start = 0;
        std::vector<QubitPair> pairs;
        for (int a = start; a + 1 < n; a += 2) pairs.emplace_back(a, a + 1);
        g.layers.push_back(std::move(pairs));
    }
    return g;
}

inline Mat2 rx(double theta) {
    return std::cos(theta / 2) * pauli_matrix(0) - cplx(0, std::sin(theta / 2)) * pauli_matrix(1);
}
inline Mat2 ry(double theta) {
    return std::cos(theta / 2) * pauli_matrix(0) - cplx(0, std::sin(theta / 2)) * pauli_matrix(2);
}
inline Mat2 hadamard() { return (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0); }

inline Mat4 cnot_matrix() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

/// Haar-random unitary via QR of a complex Ginibre matrix with phase fix.
inline MatX haar_unitary(int dim, Rng &rng) {
    MatX g(dim, dim);
    for (int i = 0; i < dim; i++)
        for (int j = 0; j < dim; j++) g(i, j) = cplx(standard_normal(rng), standard_normal(rng)) / std::sqrt(2.0);
    Eigen::HouseholderQR<MatX> qr(g);
    MatX q = qr.householderQ();
    MatX r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; j++) {
        cplx d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

struct Haar2Gate {
    Mat4 u;
};
struct Clifford2Gate {
    CliffordTableau2 tableau;
};
/// (RY(t4) x RY(t3)) CNOT (RX(t2) x RX(t1)), with t2 and t4 on the first qubit.
struct HweGate {
    std::array<double, 4> theta{};
};
/// exp(-i gamma Z x Z).
struct ZZGate {
    double gamma = 0;
};
using GateSpec = std::variant<Haar2Gate, Clifford2Gate, HweGate, ZZGate>;

inline Mat4 hwe_unitary(const std::array<double, 4> &t) {
    return kron(ry(t[3]), ry(t[2])) * cnot_matrix() * kron(rx(t[1]), rx(t[0]));
}

inline Mat4 gate_unitary(const GateSpec &g) {
    return std::visit(
        [](const auto &x) -> Mat4 {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Haar2Gate>) return x.u;
            if constexpr (std::is_same_v<T, Clifford2Gate>) return x.tableau.unitary();
            if constexpr (std::is_same_v<T, HweGate>) return hwe_unitary(x.theta);
            if constexpr (std::is_same_v<T, ZZGate>) {
                Mat4 m = Mat4::Zero();
                cplx a = std::exp(cplx(0, -x.gamma)), b = std::exp(cplx(0, x.gamma));
                m(0, 0) = a;
                m(1, 1) = b;
                m(2, 2) = b;
                m(3, 3) = a;
                return m;
            }
        },
        g);
}

struct FixedOneQubit {
    Mat2 u;
};
/// exp(-i beta X).
struct XRotation {
    double beta = 0;
};
struct OneQubitOp {
    int qubit = 0;
    std::variant<FixedOneQubit, XRotation> op;

    Mat2 unitary() const {
        if (auto *f = std::get_if<FixedOneQubit>(&op)) return f->u;
        double beta = std::get<XRotation>(op).beta;
        return std::cos(beta) * pauli_matrix(0) - cplx(0, std::sin(beta)) * pauli_matrix(1);
    }
};

/// Two-qubit gates, then single-qubit ops, then (if noisy) the noise channel on every qubit.
struct Layer {
    std::vector<QubitPair> pairs;
    std::vector<GateSpec> gates;
    std::vector<OneQubitOp> singles;
    bool noisy = true;
};

struct NoisyCircuit {
    int n = 0;
    std::vector<Layer> layers;
    PauliTransferMatrix noise;
    std::vector<Mat2> final_layer;  ///< Empty or one unitary per qubit, applied last.

    std::size_t depth() const { return layers.size(); }
    bool has_final_layer() const { return !final_layer.empty(); }

    CouplingGraph graph() const {
        CouplingGraph g{n, {}};
        for (const Layer &l : layers) g.layers.push_back(l.pairs);
        return g;
    }

    /// Layers first..last (1-indexed, inclusive). The final layer is kept when last == depth().
    NoisyCircuit layer_range(std::size_t first, std::size_t last) const {
        if (first < 1 || last > depth() || first > last + 1) throw std::out_of_range("bad layer range");
        NoisyCircuit c{n, {}, noise, {}};
        for (std::size_t k = first; k <= last; k++) c.layers.push_back(layers[k - 1]);
        if (last == depth()) c.final_layer = final_layer;
        return c;
    }

    /// The last l layers.
    NoisyCircuit last_layers(std::size_t l) const {
        if (l > depth()) throw std::out_of_range("truncation longer than circuit");
        return layer_range(depth() - l + 1, depth());
    }

    void validate() const {
        graph().validate();
        for (const Layer &l : layers) {
            if (l.pairs.size() != l.gates.size()) throw ConfigError("pairs and gates disagree in size");
            std::set<int> used;
            for (const auto &op : l.singles)
                if (op.qubit < 0 || op.qubit >= n || !used.insert(op.qubit).second)
                    throw ConfigError("bad single-qubit op placement");
        }
        if (!final_layer.empty() && int(final_layer.size()) != n)
            throw ConfigError("final layer must hold one unitary per qubit");
    }
};

/// Locates a continuous parameter. `slot` indexes theta for HWE gates.
struct ParamRef {
    std::size_t layer = 0;  ///< 0-based
    std::size_t op = 0;     ///< gate index, or single-qubit op index when `single`
    int slot = 0;
    bool single = false;
};

inline double &param_slot(NoisyCircuit &c, const ParamRef &ref) {
    Layer &l = c.layers.at(ref.layer);
    if (ref.single) {
        auto *x = std::get_if<XRotation>(&l.singles.at(ref.op).op);
        if (!x) throw std::invalid_argument("single-qubit op has no parameter");
        return x->beta;
    }
    GateSpec &g = l.gates.at(ref.op);
    if (auto *h = std::get_if<HweGate>(&g)) return h->theta.at(ref.slot);
    if (auto *z = std::get_if<ZZGate>(&g)) return z->gamma;
    throw std::invalid_argument("gate has no parameter");
}

inline double get_param(const NoisyCircuit &c, const ParamRef &ref) {
    return param_slot(const_cast<NoisyCircuit &>(c), ref);
}

inline void set_param(NoisyCircuit &c, const ParamRef &ref, double value) { param_slot(c, ref) = value; }

/// Half the eigenvalue gap r of the generator G in exp(-i theta G).
inline double generator_half_gap(const NoisyCircuit &c, const ParamRef &ref) {
    if (ref.single) return 1.0;
    return std::holds_alternative<HweGate>(c.layers.at(ref.layer).gates.at(ref.op)) ? 0.5 : 1.0;
}

/// Hermitian generator H with gate = exp(-i theta H), as a dense operator on its qubits.
inline MatX generator_matrix(const NoisyCircuit &c, const ParamRef &ref) {
    if (ref.single) return pauli_matrix(1);
    const GateSpec &g = c.layers.at(ref.layer).gates.at(ref.op);
    if (std::holds_alternative<ZZGate>(g)) return kron(pauli_matrix(3), pauli_matrix(3));
    static const int axis[4] = {1, 1, 2, 2};
    bool first = ref.slot == 1 || ref.slot == 3;
    Mat2 s = 0.5 * pauli_matrix(axis[ref.slot]);
    return first ? kron(s, pauli_matrix(0)) : kron(pauli_matrix(0), s);
}

enum class GateMode { Haar, Clifford, HardwareEfficient, Qaoa };

inline GateMode parse_gate_mode(const std::string &s) {
    if (s == "haar") return GateMode::Haar;
    if (s == "clifford") return GateMode::Clifford;
    if (s == "hwe") return GateMode::HardwareEfficient;
    if (s == "qaoa") return GateMode::Qaoa;
    throw ConfigError("unknown gate_mode '" + s + "'");
}

inline std::string gate_mode_name(GateMode m) {
    switch (m) {
        case GateMode::Haar: return "haar";
        case GateMode::Clifford: return "clifford";
        case GateMode::HardwareEfficient: return "hwe";
        case GateMode::Qaoa: return "qaoa";
    }
    return "?";
}

struct QaoaLayout {
    std::vector<std::vector<ParamRef>> gamma;  ///< occurrences of gamma_i
    std::vector<std::vector<ParamRef>> beta;
};

/// |+>^n via a noiseless Hadamard layer, then per round exp(-i beta H_x) exp(-i gamma H_z)
/// followed by one noise step. H_z sums Z_i Z_{i+1} (open chain). A round is two layers:
/// even bonds (noiseless), then odd bonds with the X rotations (noisy).
inline NoisyCircuit qaoa_circuit(int n, const std::vector<double> &gammas, const std::vector<double> &betas,
                                 const PauliTransferMatrix &noise, QaoaLayout *layout = nullptr) {
    if (n < 2) throw ConfigError("QAOA needs n >= 2");
    if (gammas.size() != betas.size()) throw ConfigError("gamma and beta counts differ");
    NoisyCircuit c{n, {}, noise, {}};
    Layer prep;
    prep.noisy = false;
    for (int q = 0; q < n; q++) prep.singles.push_back({q, FixedOneQubit{hadamard()}});
    c.layers.push_back(prep);
    QaoaLayout lay;
    for (std::size_t i = 0; i < gammas.size(); i++) {
        lay.gamma.emplace_back();
        lay.beta.emplace_back();
        for (int parity = 0; parity < 2; parity++) {
            Layer zz;
            zz.noisy = parity == 1;
            for (int a = parity; a + 1 < n; a += 2) {
                lay.gamma.back().push_back({c.layers.size(), zz.gates.size(), 0, false});
                zz.pairs.emplace_back(a, a + 1);
                zz.gates.push_back(ZZGate{gammas[i]});
            }
            if (parity == 1)
                for (int q = 0; q < n; q++) {
                    lay.beta.back().push_back({c.layers.size(), std::size_t(q), 0, true});
                    zz.singles.push_back({q, XRotation{betas[i]}});
                }
            c.layers.push_back(zz);
        }
    }
    if (layout) *layout = std::move(lay);
    return c;
}

/// Sampling recipe for a random circuit family.
struct CircuitConfig {
    int n = 2;
    int depth = 1;
    std::string geometry = "brickwork1d";
    std::vector<std::vector<QubitPair>> pairs;  ///< used when geometry == "pairs"
    bool shifted = false;
    GateMode mode = GateMode::Haar;
    PauliTransferMatrix noise;
    bool final_layer = true;
    bool single_qubit_layers = false;
    uint64_t seed = 0;

    CouplingGraph graph() const {
        if (geometry == "brickwork1d") return brickwork_1d(n, depth, shifted);
        if (geometry == "pairs") {
            CouplingGraph g{n, pairs};
            if (int(g.depth()) != depth) throw ConfigError("pairs list length must equal depth");
            g.validate();
            return g;
        }
        throw ConfigError("unknown geometry '" + geometry + "'");
    }
};

inline Mat2 sample_single(GateMode mode, Rng &rng) {
    if (mode == GateMode::Clifford) return sample_clifford1(rng);
    return haar_unitary(2, rng);
}

inline NoisyCircuit sample_circuit(const CircuitConfig &cfg, Rng &rng) {
    const double two_pi = 2 * std::numbers::pi;
    if (cfg.mode == GateMode::Qaoa) {
        std::vector<double> g(cfg.depth), b(cfg.depth);
        for (int i = 0; i < cfg.depth; i++) {
            g[i] = two_pi * uniform01(rng);
            b[i] = two_pi * uniform01(rng);
        }
        return qaoa_circuit(cfg.n, g, b, cfg.noise);
    }
    CouplingGraph graph = cfg.graph();
    NoisyCircuit c{cfg.n, {}, cfg.noise, {}};
    for (const auto &pairs : graph.layers) {
        Layer layer;
        layer.pairs = pairs;
        for (std::size_t k = 0; k < pairs.size(); k++) {
            switch (cfg.mode) {
                case GateMode::Haar: layer.gates.push_back(Haar2Gate{haar_unitary(4, rng)}); break;
                case GateMode::Clifford: layer.gates.push_back(Clifford2Gate{sample_clifford2(rng)}); break;
                default: {
                    HweGate h;
                    for (double &t : h.theta) t = two_pi * uniform01(rng);
                    layer.gates.push_back(h);
                }
            }
        }
        if (cfg.single_qubit_layers)
            for (int q = 0; q < cfg.n; q++) layer.singles.push_back({q, FixedOneQubit{sample_single(cfg.mode, rng)}});
        c.layers.push_back(std::move(layer));
    }
    if (cfg.final_layer)
        for (int q = 0; q < cfg.n; q++) c.final_layer.push_back(sample_single(cfg.mode, rng));
    return c;
}

}  // namespace effdepth

#endif
