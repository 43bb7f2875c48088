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

#ifndef EFFDEPTH_MOMENTS_HPP
#define EFFDEPTH_MOMENTS_HPP

#include <functional>

#include "effdepth/lightcone.hpp"

namespace effdepth {

inline constexpr double kClifford2Order = 11520;
inline constexpr int kExactMomentCap = 24;

/// Sample statistics with jackknife error bars.
struct MCStat {
    double mean = 0;
    double variance = 0;  ///< unbiased sample variance
    double stderr_mean = 0;
    double stderr_var = 0;
    double mean_sq = 0;  ///< mean of x^2
    double stderr_mean_sq = 0;
    std::size_t samples = 0;
    uint64_t seed = 0;

    static MCStat from_samples(const std::vector<double> &xs, uint64_t seed = 0) {
        MCStat s;
        s.samples = xs.size();
        s.seed = seed;
        const double n = double(xs.size());
        if (xs.size() < 2) {
            s.mean = xs.empty() ? 0 : xs[0];
            s.mean_sq = s.mean * s.mean;
            return s;
        }
        double s1 = 0, s2 = 0, s4 = 0;
        for (double x : xs) {
            s1 += x;
            s2 += x * x;
            s4 += x * x * x * x;
        }
        s.mean = s1 / n;
        s.mean_sq = s2 / n;
        s.variance = std::max(0.0, (s2 - s1 * s1 / n) / (n - 1));
        s.stderr_mean = std::sqrt(s.variance / n);
        s.stderr_mean_sq = std::sqrt(std::max(0.0, (s4 - s2 * s2 / n) / (n - 1)) / n);
        if (xs.size() >= 3) {
            std::vector<double> loo(xs.size());
            double avg = 0;
            for (std::size_t i = 0; i < xs.size(); i++) {
                double a = s1 - xs[i], b = s2 - xs[i] * xs[i];
                loo[i] = (b - a * a / (n - 1)) / (n - 2);
                avg += loo[i];
            }
            avg /= n;
            double acc = 0;
            for (double v : loo) acc += (v - avg) * (v - avg);
            s.stderr_var = std::sqrt((n - 1) / n * acc);
        }
        return s;
    }
};

enum class Backend { Dense, PauliBasis };

/// Tr(P Phi(|0^n><0^n|)) for one circuit.
inline double circuit_expectation(const NoisyCircuit &c, const PauliString &p, Backend backend = Backend::Dense,
                                  int cap = kDefaultDenseCap) {
    if (backend == Backend::PauliBasis) return run_pauli(c, PauliVector::zero_state(c.n, cap)).expectation(p);
    return expectation(run(c, DensityMatrix::zero_state(c.n, cap), cap), p);
}

struct MCOptions {
    std::size_t samples = 1000;
    uint64_t seed = 0;
    int threads = 1;
    Backend backend = Backend::Dense;
    int cap = kDefaultDenseCap;
};

/// Tr(P Phi(rho0)) sampled over circuits from `cfg`, one RNG stream per sample.
inline std::vector<double> mc_expectation_samples(const CircuitConfig &cfg, const PauliString &p,
                                                  const MCOptions &o) {
    DensityMatrix::check_cap(cfg.n, o.cap);
    return parallel_map<double>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        return circuit_expectation(sample_circuit(cfg, rng), p, o.backend, o.cap);
    });
}

inline MCStat mc_variance(const CircuitConfig &cfg, const PauliString &p, const MCOptions &o) {
    if (o.samples < 2) throw ConfigError("need at least 2 samples");
    return MCStat::from_samples(mc_expectation_samples(cfg, p, o), o.seed);
}

/// Second-moment samples at every depth 1..cfg.depth from one deep circuit per
/// sample; each depth gets a fresh final single-qubit layer when cfg.final_layer.
inline std::vector<MCStat> mc_moment_depth_sweep(const CircuitConfig &cfg, const PauliString &p,
                                                 const MCOptions &o) {
    CircuitConfig inner = cfg;
    inner.final_layer = false;
    std::size_t depth = std::size_t(cfg.depth);
    auto per_sample = parallel_map<std::vector<double>>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        NoisyCircuit c = sample_circuit(inner, rng);
        std::vector<double> out;
        auto support = p.support();
        PauliVector v = PauliVector::zero_state(c.n, o.cap);
        for (std::size_t l = 0; l < depth; l++) {
            v = run_pauli(c.layer_range(l + 1, l + 1), v);
            if (!cfg.final_layer) {
                out.push_back(v.expectation(p));
                continue;
            }
            PauliVector w = v;
            for (std::size_t q : support)
                w.apply_ptm_1q(ptm_of_unitary(sample_single(cfg.mode, rng)).matrix(), int(q));
            out.push_back(w.expectation(p));
        }
        return out;
    });
    std::vector<MCStat> stats;
    for (std::size_t l = 0; l < depth; l++) {
        std::vector<double> xs;
        for (const auto &s : per_sample) xs.push_back(s[l]);
        stats.push_back(MCStat::from_samples(xs, o.seed));
    }
    return stats;
}

/// E[Tr(P Phi(rho0))^2] for 2-design two-qubit gates with a single-qubit
/// 2-design layer before every noise layer. rho0 is a product state given by
/// per-qubit Bloch vectors (default |0>). The weights live on supports only.
inline double exact_second_moment(const CouplingGraph &graph, const ChannelNormalForm &nf, const PauliString &p,
                                  bool final_layer = true, const std::vector<Real3> &bloch = {}) {
    graph.validate();
    const int n = graph.n;
    if (int(p.num_qubits()) != n) throw ConfigError("Pauli length differs from graph width");
    if (n > kExactMomentCap) throw ResourceCapError("exact second moment limited to " + std::to_string(kExactMomentCap) + " qubits");
    if (!bloch.empty() && int(bloch.size()) != n) throw ConfigError("need one Bloch vector per qubit");
    const std::size_t size = std::size_t(1) << n;
    std::vector<double> w(size, 0.0);
    uint64_t start = 0;
    for (std::size_t q : p.support()) start |= uint64_t{1} << q;
    w[start] = 1.0;

    const double drop = nf.t.squaredNorm() / 3, keep = nf.d.squaredNorm() / 3;
    for (std::size_t step = 0; step < graph.depth(); step++) {
        const auto &pairs = graph.layers[graph.depth() - 1 - step];
        for (int j = 0; j < n; j++) {
            const std::size_t bit = std::size_t(1) << j;
            double a = drop, b = keep;
            if (step == 0 && !final_layer && p.index(j) != 0) {
                auto [t, d] = adjoint_coeffs(nf, p.index(j));
                a = t * t;
                b = d * d;
            }
            for (std::size_t s = 0; s < size; s++) {
                if (!(s & bit) || w[s] == 0) continue;
                w[s ^ bit] += a * w[s];
                w[s] *= b;
            }
        }
        for (auto [qa, qb] : pairs) {
            const std::size_t ba = std::size_t(1) << qa, bb = std::size_t(1) << qb;
            for (std::size_t s = 0; s < size; s++) {
                if (s & (ba | bb)) continue;
                double m = w[s | ba] + w[s | bb] + w[s | ba | bb];
                w[s | ba] = m * 3 / 15;
                w[s | bb] = m * 3 / 15;
                w[s | ba | bb] = m * 9 / 15;
            }
        }
    }
    if (graph.depth() == 0 && !final_layer) throw ConfigError("depth 0 needs the final layer");
    std::vector<double> site(n, 1.0 / 3);
    for (int j = 0; j < int(bloch.size()); j++) site[j] = bloch[j].squaredNorm() / 3;
    double total = 0;
    for (std::size_t s = 0; s < size; s++) {
        if (w[s] == 0) continue;
        double f = 1;
        for (int j = 0; j < n; j++)
            if (s >> j & 1) f *= site[j];
        total += w[s] * f;
    }
    return total;
}

struct BoundInputs {
    ChannelNormalForm nf;
    int n = 1;
    int weight = 1;  ///< |P|
    int depth = 1;   ///< L
    int layer = 1;   ///< k
    double h_norm = 1;  ///< ||H_mu||_inf
    std::optional<double> p_dep;
    std::optional<double> t_norm_override;  ///< ||t|| of the non-depolarizing part, for delta_L
};

struct BoundSet {
    double var_lower, var_upper, trunc_sq, grad_upper, grad_lower, purity_lower, purity_upper, avg_trace_distance;
    std::optional<double> delta_l, sdpi_td, wc_td;
};

inline BoundSet bounds(const BoundInputs &in) {
    const ChannelNormalForm &nf = in.nf;
    const double c = contraction_c(nf), t2 = nf.t.squaredNorm(), d2 = nf.d.squaredNorm();
    const double P = in.weight, L = in.depth, k = in.layer, n = in.n;
    BoundSet b{};
    b.var_lower = std::pow(t2 / 3, P);
    b.var_upper = std::pow(c, P);
    b.trunc_sq = 4 * std::pow(c, P + L - 1);
    b.grad_upper = 4 * std::pow(c, P + L - k - 1);
    b.grad_lower = 0;
    for (int q = 0; q < 3; q++)
        b.grad_lower += 0.5 * std::pow(nf.d(q) * nf.d(q) * t2 / (3 * kClifford2Order), P * (L - k + 1)) * in.h_norm;
    b.purity_lower = std::pow((1 + t2) / 2, n);
    b.purity_upper = std::pow((1 + t2 + d2) / 2, n);
    b.avg_trace_distance = std::pow(2.0, n + 1) * std::pow(c, (L - 1) / 2);
    if (in.p_dep) {
        const double p = *in.p_dep, decay = std::pow(1 - p, 2 * L);
        const double tn = in.t_norm_override ? *in.t_norm_override : nf.t.norm();
        b.delta_l = decay + tn * (1 - decay) / (2 * p - p * p);
        b.sdpi_td = std::sqrt(2 * n) * std::pow(1 - p, L);
    }
    if (auto w = w1_factor(nf)) b.wc_td = n * std::pow(*w, L);
    return b;
}

inline double deviation_bound(double var, double sup_abs) { return var / (8 * sup_abs * sup_abs); }
inline double first_moment_bound(double mean, double sup_abs) { return mean / (2 * sup_abs); }

enum class DerivativeMethod { Auto, ParameterShift, CentralDifference };

inline constexpr double kFiniteDifferenceStep = 1e-4;

/// d/dtheta of Tr(P Phi(|0><0|)) where theta is shared by all `refs`.
inline double partial_derivative(const NoisyCircuit &c, const PauliString &p, const std::vector<ParamRef> &refs,
                                 DerivativeMethod method = DerivativeMethod::Auto, int cap = kDefaultDenseCap) {
    if (refs.empty()) throw std::invalid_argument("no parameter to differentiate");
    auto f = [&](const NoisyCircuit &x) { return circuit_expectation(x, p, Backend::Dense, cap); };
    if (method == DerivativeMethod::CentralDifference) {
        NoisyCircuit plus = c, minus = c;
        for (const auto &r : refs) {
            set_param(plus, r, get_param(c, r) + kFiniteDifferenceStep);
            set_param(minus, r, get_param(c, r) - kFiniteDifferenceStep);
        }
        return (f(plus) - f(minus)) / (2 * kFiniteDifferenceStep);
    }
    double total = 0;
    for (const auto &r : refs) {
        const double gap = generator_half_gap(c, r), shift = std::numbers::pi / (4 * gap);
        NoisyCircuit plus = c, minus = c;
        set_param(plus, r, get_param(c, r) + shift);
        set_param(minus, r, get_param(c, r) - shift);
        total += gap * (f(plus) - f(minus));
    }
    return total;
}

/// Derivative samples of parameters chosen by `select` over random draws from `cfg`.
/// Returns samples[k][i] for each entry k of the selection.
inline std::vector<std::vector<double>> derivative_samples(
    const CircuitConfig &cfg, const PauliString &p,
    const std::function<std::vector<std::vector<ParamRef>>(const NoisyCircuit &)> &select, const MCOptions &o,
    DerivativeMethod method = DerivativeMethod::Auto) {
    auto per_sample = parallel_map<std::vector<double>>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        NoisyCircuit c = sample_circuit(cfg, rng);
        std::vector<double> out;
        for (const auto &refs : select(c)) out.push_back(partial_derivative(c, p, refs, method, o.cap));
        return out;
    });
    std::vector<std::vector<double>> out;
    if (per_sample.empty()) return out;
    out.resize(per_sample[0].size());
    for (const auto &s : per_sample)
        for (std::size_t k = 0; k < s.size(); k++) out[k].push_back(s[k]);
    return out;
}

inline MCStat purity_mc(const CircuitConfig &cfg, const MCOptions &o) {
    DensityMatrix::check_cap(cfg.n, o.cap);
    auto xs = parallel_map<double>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        return purity(run(sample_circuit(cfg, rng), DensityMatrix::zero_state(cfg.n, o.cap), o.cap));
    });
    return MCStat::from_samples(xs, o.seed);
}

struct KernelStats {
    MCStat fidelity;
    MCStat projected_q;  ///< sum_k ||rho_k - rho'_k||_2^2
    MCStat projected_per_qubit;
};

inline KernelStats kernel_mc(const CircuitConfig &cfg, const MCOptions &o) {
    DensityMatrix::check_cap(cfg.n, o.cap);
    auto rows = parallel_map<std::array<double, 2>>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        auto a = run(sample_circuit(cfg, rng), DensityMatrix::zero_state(cfg.n, o.cap), o.cap);
        auto b = run(sample_circuit(cfg, rng), DensityMatrix::zero_state(cfg.n, o.cap), o.cap);
        double fid = (a.matrix().adjoint() * b.matrix()).trace().real();
        double q = 0;
        for (int k = 0; k < cfg.n; k++) q += (reduced_1q(a, k) - reduced_1q(b, k)).cwiseAbs2().sum();
        return std::array<double, 2>{fid, q};
    });
    std::vector<double> f, q, qn;
    for (const auto &r : rows) {
        f.push_back(r[0]);
        q.push_back(r[1]);
        qn.push_back(r[1] / cfg.n);
    }
    return {MCStat::from_samples(f, o.seed), MCStat::from_samples(q, o.seed), MCStat::from_samples(qn, o.seed)};
}

/// ||Phi(rho) - Phi(sigma)||_1 over circuits from `cfg`.
inline MCStat trace_distance_decay_mc(const CircuitConfig &cfg, const DensityMatrix &rho, const DensityMatrix &sigma,
                                      const MCOptions &o) {
    DensityMatrix::check_cap(cfg.n, o.cap);
    auto xs = parallel_map<double>(o.samples, o.threads, [&](std::size_t i) {
        Rng rng = make_rng(o.seed, i);
        NoisyCircuit c = sample_circuit(cfg, rng);
        return trace_distance(run(c, rho, o.cap), run(c, sigma, o.cap));
    });
    return MCStat::from_samples(xs, o.seed);
}

}  // namespace effdepth

#endif
