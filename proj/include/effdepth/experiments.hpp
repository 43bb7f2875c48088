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

#ifndef EFFDEPTH_EXPERIMENTS_HPP
#define EFFDEPTH_EXPERIMENTS_HPP

#include <fstream>
#include <iomanip>
#include <sstream>

#include "effdepth/moments.hpp"

namespace effdepth {

using json = nlohmann::json;

template <typename T>
T json_get(const json &j, const char *key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

inline PauliTransferMatrix channel_from_json(const json &j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("channel needs a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    auto rate = [&](const char *key) {
        if (!j.contains(key)) throw ConfigError(kind + " channel needs '" + key + "'");
        return j.at(key).get<double>();
    };
    if (kind == "depolarizing") return ptm_from_kraus(depolarizing(rate("p")));
    if (kind == "amplitude_damping") return ptm_from_kraus(amplitude_damping(rate("q")));
    if (kind == "dephasing") return ptm_from_kraus(dephasing(rate("p")));
    if (kind == "kraus") {
        KrausChannel k;
        for (const auto &op : j.at("ops")) {
            if (op.size() != 4) throw ConfigError("Kraus operator needs 4 row-major complex entries");
            Mat2 m;
            for (int e = 0; e < 4; e++) m(e / 2, e % 2) = cplx(op[e].at(0).get<double>(), op[e].at(1).get<double>());
            k.ops.push_back(m);
        }
        return ptm_from_kraus(k);
    }
    if (kind == "composed") {
        PauliTransferMatrix acc;
        for (const auto &c : j.at("channels")) acc = compose(channel_from_json(c), acc);
        return acc;
    }
    throw ConfigError("unknown channel kind '" + kind + "'");
}

/// dep(p) applied after amp(q).
inline json dep_after_amp_json(double p, double q) {
    return {{"kind", "composed"},
            {"channels", json::array({{{"kind", "amplitude_damping"}, {"q", q}}, {{"kind", "depolarizing"}, {"p", p}}})}};
}

inline CircuitConfig circuit_config_from_json(const json &j) {
    if (!j.is_object()) throw ConfigError("circuit config must be an object");
    CircuitConfig c;
    c.n = json_get<int>(j, "n", 2);
    c.depth = json_get<int>(j, "depth", 1);
    c.geometry = json_get<std::string>(j, "geometry", "brickwork1d");
    if (c.geometry == "pairs-list") c.geometry = "pairs";
    if (j.contains("pairs")) {
        for (const auto &layer : j.at("pairs")) {
            std::vector<QubitPair> l;
            for (const auto &pr : layer) l.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
            c.pairs.push_back(l);
        }
    }
    c.shifted = json_get<bool>(j, "shifted", false);
    c.mode = parse_gate_mode(json_get<std::string>(j, "gate_mode", "haar"));
    c.noise = channel_from_json(j.contains("noise") ? j.at("noise") : dep_after_amp_json(0.2, 0.2));
    c.final_layer = json_get<bool>(j, "final_layer", true);
    c.single_qubit_layers = json_get<bool>(j, "single_qubit_layers", false);
    c.seed = json_get<uint64_t>(j, "seed", 0);
    if (c.n < 1 || c.depth < 0) throw ConfigError("n must be >= 1 and depth >= 0");
    if (c.mode != GateMode::Qaoa) c.graph();
    return c;
}

inline json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }
}

inline std::string format_real(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

/// Result table written as CSV after '#'-prefixed metadata lines.
struct Table {
    std::string experiment;
    json config;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    template <typename... Ts>
    void add(const Ts &...values) {
        std::vector<std::string> row;
        (row.push_back(cell(values)), ...);
        if (row.size() != columns.size()) throw std::logic_error("row width differs from header");
        rows.push_back(std::move(row));
    }

    std::string csv() const {
        std::ostringstream s;
        s << "# effdepth " << kVersion << "\n";
        s << "# experiment: " << experiment << "\n";
        s << "# config: " << config.dump() << "\n";
        for (std::size_t k = 0; k < columns.size(); k++) s << (k ? "," : "") << columns[k];
        s << "\n";
        for (const auto &r : rows) {
            for (std::size_t k = 0; k < r.size(); k++) s << (k ? "," : "") << r[k];
            s << "\n";
        }
        return s.str();
    }

    std::size_t column(const std::string &name) const {
        for (std::size_t k = 0; k < columns.size(); k++)
            if (columns[k] == name) return k;
        throw std::out_of_range("no column " + name);
    }

   private:
    static std::string cell(double x) { return format_real(x); }
    static std::string cell(const std::string &x) { return x; }
    static std::string cell(const char *x) { return x; }
    template <typename T>
        requires std::is_integral_v<T>
    static std::string cell(T x) {
        return std::to_string(x);
    }
};

/// Least-squares fit y = a + b x; returns (slope, r_squared).
inline std::pair<double, double> linear_fit(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double cxx = sxx - sx * sx / n, cxy = sxy - sx * sy / n, cyy = syy - sy * sy / n;
    const double slope = cxy / cxx;
    return {slope, cyy > 0 ? cxy * cxy / (cxx * cyy) : 1.0};
}

struct RunOptions {
    uint64_t seed = 0;
    int threads = 1;
};

/// Gradient ansatz shared by the figure experiments.
struct AnsatzSpec {
    GateMode mode = GateMode::HardwareEfficient;
    int n = 5;
    int depth = 10;
    PauliTransferMatrix noise = dep_after_amp(0.2, 0.2);
    int param_slot = 1;  ///< theta_2 for HWE gates

    /// HWE: brickwork oriented so the last layer touches qubit 0, no final layer.
    CircuitConfig circuit() const {
        CircuitConfig c;
        c.n = n;
        c.depth = depth;
        c.mode = mode;
        c.noise = noise;
        c.final_layer = false;
        c.shifted = depth % 2 == 0;
        return c;
    }

    /// Observable: Z on qubit 0 for HWE, X on qubit 0 for QAOA.
    PauliString observable() const { return PauliString::single(n, 0, mode == GateMode::Qaoa ? 1 : 3); }

    /// Parameter of layer (or round) k, 1-based.
    std::vector<ParamRef> param(const NoisyCircuit &c, int k) const {
        if (mode == GateMode::Qaoa) {
            // Layer 0 prepares |+>; round k spans layers 2k-1 and 2k.
            std::vector<ParamRef> out;
            for (int layer : {2 * k - 1, 2 * k})
                for (std::size_t g = 0; g < c.layers[layer].gates.size(); g++)
                    out.push_back({std::size_t(layer), g, 0, false});
            return out;
        }
        return {{std::size_t(k - 1), 0, param_slot, false}};
    }
};

/// Var[dC] for every layer k of the ansatz.
inline std::vector<MCStat> layer_scan(const AnsatzSpec &a, std::size_t samples, const RunOptions &o) {
    MCOptions mo{samples, o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    auto select = [&](const NoisyCircuit &c) {
        std::vector<std::vector<ParamRef>> refs;
        for (int k = 1; k <= a.depth; k++) refs.push_back(a.param(c, k));
        return refs;
    };
    auto samples_k = derivative_samples(a.circuit(), a.observable(), select, mo);
    std::vector<MCStat> out;
    for (const auto &xs : samples_k) out.push_back(MCStat::from_samples(xs, o.seed));
    return out;
}

/// Var[dC] for the last layer only.
inline MCStat last_layer_variance(const AnsatzSpec &a, std::size_t samples, const RunOptions &o) {
    MCOptions mo{samples, o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    auto select = [&](const NoisyCircuit &c) { return std::vector<std::vector<ParamRef>>{a.param(c, a.depth)}; };
    return MCStat::from_samples(derivative_samples(a.circuit(), a.observable(), select, mo)[0], o.seed);
}

struct FigureConfig {
    int n = 5;
    int depth = 10;
    double p = 0.2;
    double q = 0.2;
    std::size_t samples = 100;
    int n_min = 2;
    int n_max = 6;
    std::vector<double> q_values{0.2, 0.0};

    static FigureConfig from_json(const json &j) {
        FigureConfig f;
        f.n = json_get<int>(j, "n", f.n);
        f.depth = json_get<int>(j, "depth", f.depth);
        f.p = json_get<double>(j, "p", f.p);
        f.q = json_get<double>(j, "q", f.q);
        f.samples = json_get<std::size_t>(j, "samples", f.samples);
        f.n_min = json_get<int>(j, "n_min", f.n_min);
        f.n_max = json_get<int>(j, "n_max", f.n_max);
        f.q_values = json_get<std::vector<double>>(j, "q_values", f.q_values);
        if (f.samples < 2 || f.n_min < 2 || f.n_max < f.n_min || f.depth < 1) throw ConfigError("bad figure config");
        return f;
    }

    json to_json() const {
        return {{"n", n}, {"depth", depth}, {"p", p}, {"q", q}, {"samples", samples},
                {"n_min", n_min}, {"n_max", n_max}, {"q_values", q_values}};
    }
};

inline const std::vector<std::string> kLayerScanColumns{
    "ansatz", "n", "depth", "p", "q", "k", "depth_minus_k", "samples", "seed", "mean", "stderr_mean",
    "variance", "stderr_var", "grad_upper"};

inline Table fig_layer(const FigureConfig &f, GateMode mode, const RunOptions &o) {
    Table t{"fig-layer", f.to_json(), kLayerScanColumns, {}};
    t.config["ansatz"] = gate_mode_name(mode);
    AnsatzSpec a{mode, f.n, f.depth, dep_after_amp(f.p, f.q)};
    auto stats = layer_scan(a, f.samples, o);
    auto nf = normal_form(a.noise);
    for (int k = 1; k <= f.depth; k++) {
        const MCStat &s = stats[k - 1];
        BoundInputs in{nf, f.n, 1, f.depth, k};
        t.add(gate_mode_name(mode), f.n, f.depth, f.p, f.q, k, f.depth - k, s.samples, o.seed, s.mean, s.stderr_mean,
              s.variance, s.stderr_var, bounds(in).grad_upper);
    }
    return t;
}

inline const std::vector<std::string> kQubitScanColumns{
    "ansatz", "n", "depth", "p", "q", "samples", "seed", "mean", "stderr_mean", "variance", "stderr_var", "grad_upper"};

inline Table fig_qubits(const FigureConfig &f, GateMode mode, const RunOptions &o) {
    Table t{"fig-qubits", f.to_json(), kQubitScanColumns, {}};
    t.config["ansatz"] = gate_mode_name(mode);
    for (double q : f.q_values) {
        for (int n = f.n_min; n <= f.n_max; n++) {
            AnsatzSpec a{mode, n, 2 * n, dep_after_amp(f.p, q)};
            MCStat s = last_layer_variance(a, f.samples, o);
            BoundInputs in{normal_form(a.noise), n, 1, 2 * n, 2 * n};
            t.add(gate_mode_name(mode), n, 2 * n, f.p, q, s.samples, o.seed, s.mean, s.stderr_mean, s.variance,
                  s.stderr_var, bounds(in).grad_upper);
        }
    }
    return t;
}

/// Both scans for the QAOA ansatz, tagged by a `scan` column.
inline Table fig_qaoa(const FigureConfig &f, const RunOptions &o) {
    Table layer = fig_layer(f, GateMode::Qaoa, o);
    Table qubits = fig_qubits(f, GateMode::Qaoa, o);
    Table t{"fig-qaoa", f.to_json(), {"scan", "n", "depth", "p", "q", "k", "samples", "seed", "mean", "stderr_mean",
                                       "variance", "stderr_var", "grad_upper"}, {}};
    auto col = [](const Table &x, const std::vector<std::string> &r, const char *name) { return r[x.column(name)]; };
    for (const auto &r : layer.rows)
        t.rows.push_back({"layer", col(layer, r, "n"), col(layer, r, "depth"), col(layer, r, "p"), col(layer, r, "q"),
                          col(layer, r, "k"), col(layer, r, "samples"), col(layer, r, "seed"), col(layer, r, "mean"),
                          col(layer, r, "stderr_mean"), col(layer, r, "variance"), col(layer, r, "stderr_var"),
                          col(layer, r, "grad_upper")});
    for (const auto &r : qubits.rows)
        t.rows.push_back({"qubits", col(qubits, r, "n"), col(qubits, r, "depth"), col(qubits, r, "p"),
                          col(qubits, r, "q"), col(qubits, r, "depth"), col(qubits, r, "samples"),
                          col(qubits, r, "seed"), col(qubits, r, "mean"), col(qubits, r, "stderr_mean"),
                          col(qubits, r, "variance"), col(qubits, r, "stderr_var"), col(qubits, r, "grad_upper")});
    return t;
}

inline PauliString observable_from_json(const json &j, int n) {
    std::string s = json_get<std::string>(j, "pauli", "");
    if (s.empty()) return PauliString::single(n, 0, 3);
    PauliString p = PauliString::from_string(s);
    if (int(p.num_qubits()) != n) throw ConfigError("observable length differs from n");
    return p;
}

/// Sample count from config, falling back to `fallback`.
inline std::size_t samples_from_json(const json &j, std::size_t fallback) {
    auto n = json_get<std::size_t>(j, "samples", fallback);
    if (n < 2) throw ConfigError("samples must be >= 2");
    return n;
}

inline const json &circuit_section(const json &j) {
    if (!j.contains("circuit")) throw ConfigError("config needs a 'circuit' section");
    return j.at("circuit");
}

inline Table run_variance(const json &j, const RunOptions &o) {
    CircuitConfig c = circuit_config_from_json(circuit_section(j));
    PauliString p = observable_from_json(j, c.n);
    MCOptions mo{samples_from_json(j, 1000), o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    MCStat s = mc_variance(c, p, mo);
    auto nf = normal_form(c.noise);
    BoundInputs in{nf, c.n, int(p.weight()), c.depth, c.depth};
    BoundSet b = bounds(in);
    std::string exact = "nan";
    if (c.mode != GateMode::Qaoa && c.mode != GateMode::HardwareEfficient && c.single_qubit_layers && c.n <= kExactMomentCap)
        exact = format_real(exact_second_moment(c.graph(), nf, p, c.final_layer));
    Table t{"variance", j, {"n", "depth", "pauli", "samples", "seed", "mean", "stderr_mean", "mean_sq",
                            "stderr_mean_sq", "variance", "stderr_var", "exact_second_moment", "var_lower",
                            "var_upper"}, {}};
    t.add(c.n, c.depth, p.str(), s.samples, o.seed, s.mean, s.stderr_mean, s.mean_sq, s.stderr_mean_sq, s.variance,
          s.stderr_var, exact, b.var_lower, b.var_upper);
    return t;
}

inline Table run_gradscan(const json &j, const RunOptions &o) {
    FigureConfig f = FigureConfig::from_json(j);
    GateMode mode = parse_gate_mode(json_get<std::string>(j, "ansatz", "hwe"));
    if (mode != GateMode::HardwareEfficient && mode != GateMode::Qaoa) throw ConfigError("gradscan needs hwe or qaoa");
    Table t = fig_layer(f, mode, o);
    t.experiment = "gradscan";
    return t;
}

inline Table run_purity(const json &j, const RunOptions &o) {
    CircuitConfig c = circuit_config_from_json(circuit_section(j));
    MCOptions mo{samples_from_json(j, 2000), o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    MCStat s = purity_mc(c, mo);
    BoundSet b = bounds({normal_form(c.noise), c.n, 1, c.depth, c.depth});
    Table t{"purity", j, {"n", "depth", "samples", "seed", "mean", "stderr_mean", "variance", "purity_lower",
                          "purity_upper"}, {}};
    t.add(c.n, c.depth, s.samples, o.seed, s.mean, s.stderr_mean, s.variance, b.purity_lower, b.purity_upper);
    return t;
}

inline Table run_kernel(const json &j, const RunOptions &o) {
    CircuitConfig c = circuit_config_from_json(circuit_section(j));
    MCOptions mo{samples_from_json(j, 1000), o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    KernelStats k = kernel_mc(c, mo);
    auto nf = normal_form(c.noise);
    BoundSet b = bounds({nf, c.n, 1, c.depth, c.depth});
    Table t{"kernel", j, {"n", "depth", "samples", "seed", "fidelity_mean", "fidelity_stderr", "fidelity_upper",
                          "projected_per_qubit_mean", "projected_per_qubit_stderr", "projected_lower",
                          "projected_upper"}, {}};
    t.add(c.n, c.depth, k.fidelity.samples, o.seed, k.fidelity.mean, k.fidelity.stderr_mean, b.purity_upper,
          k.projected_per_qubit.mean, k.projected_per_qubit.stderr_mean, nf.t.squaredNorm(),
          nf.t.squaredNorm() + nf.d.squaredNorm());
    return t;
}

inline Table run_bounds(const json &j) {
    PauliTransferMatrix noise = channel_from_json(j.contains("noise") ? j.at("noise") : dep_after_amp_json(0.2, 0.2));
    BoundInputs in{normal_form(noise), json_get<int>(j, "n", 4), json_get<int>(j, "weight", 1),
                   json_get<int>(j, "depth", 10), json_get<int>(j, "k", 1), json_get<double>(j, "h_norm", 1.0)};
    if (j.contains("p_dep")) in.p_dep = j.at("p_dep").get<double>();
    if (j.contains("t_norm")) in.t_norm_override = j.at("t_norm").get<double>();
    BoundSet b = bounds(in);
    auto opt = [](const std::optional<double> &x) { return x ? format_real(*x) : std::string("nan"); };
    Table t{"bounds", j, {"c", "var_lower", "var_upper", "trunc_sq", "grad_upper", "grad_lower", "purity_lower",
                          "purity_upper", "avg_trace_distance", "delta_l", "sdpi_td", "wc_td"}, {}};
    t.add(contraction_c(in.nf), b.var_lower, b.var_upper, b.trunc_sq, b.grad_upper, b.grad_lower, b.purity_lower,
          b.purity_upper, b.avg_trace_distance, opt(b.delta_l), opt(b.sdpi_td), opt(b.wc_td));
    return t;
}

inline Table run_tracedist(const json &j, const RunOptions &o) {
    CircuitConfig c = circuit_config_from_json(circuit_section(j));
    MCOptions mo{samples_from_json(j, 200), o.seed, o.threads, Backend::Dense, kDefaultDenseCap};
    DensityMatrix rho = DensityMatrix::zero_state(c.n, mo.cap);
    Eigen::VectorXcd ones = Eigen::VectorXcd::Zero(Eigen::Index(1) << c.n);
    ones(ones.size() - 1) = 1;
    DensityMatrix sigma = DensityMatrix::pure(c.n, ones);
    MCStat s = trace_distance_decay_mc(c, rho, sigma, mo);
    BoundSet b = bounds({normal_form(c.noise), c.n, 1, c.depth, c.depth});
    Table t{"tracedist", j, {"n", "depth", "samples", "seed", "mean", "stderr_mean", "avg_bound"}, {}};
    t.add(c.n, c.depth, s.samples, o.seed, s.mean, s.stderr_mean, b.avg_trace_distance);
    return t;
}

/// Estimator timing over widths; the dense oracle column is filled when n fits the dense cap.
inline Table run_bench(const json &j, const RunOptions &o) {
    std::vector<int> widths = json_get<std::vector<int>>(j, "n_values", {20, 40, 80});
    int depth = json_get<int>(j, "depth", 20);
    double eps = json_get<double>(j, "eps", 0.3), delta = json_get<double>(j, "delta", 0.3);
    double p = json_get<double>(j, "p", 0.4), q = json_get<double>(j, "q", 0.4);
    std::size_t reps = json_get<std::size_t>(j, "repeats", 3);
    Table t{"bench", j, {"n", "depth", "repeat", "l_theoretical", "steps_executed", "early_break", "support_peak",
                         "wall_ms", "value", "abs_error"}, {}};
    for (int n : widths) {
        for (std::size_t r = 0; r < reps; r++) {
            CircuitConfig c;
            c.n = n;
            c.depth = depth;
            c.noise = dep_after_amp(p, q);
            Rng rng = make_rng(o.seed, uint64_t(n) * 1000 + r);
            NoisyCircuit circ = sample_circuit(c, rng);
            PauliString obs = PauliString::single(n, n / 2, 3);
            EstimateReport rep = estimate(circ, obs, eps, delta);
            std::string err = "nan";
            if (n <= kDefaultDenseCap) err = format_real(std::abs(rep.value - circuit_expectation(circ, obs)));
            t.add(n, depth, r, rep.l_theoretical, rep.steps_executed, int(rep.early_break), rep.support_peak,
                  rep.wall_ms, rep.value, err);
        }
    }
    return t;
}

}  // namespace effdepth

#endif
