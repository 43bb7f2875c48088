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

#include <CLI11.hpp>
#include <iostream>

#include "effdepth/experiments.hpp"

using namespace effdepth;

namespace {

void emit(const std::string &text, const std::string &out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    f << text;
}

json optional_config(const std::string &path) { return path.empty() ? json::object() : load_json_file(path); }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Noisy random-circuit analysis toolkit"};
    app.require_subcommand(1);
    uint64_t seed = 0;
    int threads = 1;
    std::string out;
    app.add_option("--seed", seed, "Base RNG seed")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Output path (default stdout)");

    std::string pauli, circuit_path;
    double eps = 0.1, delta = 0.1;
    int support_cap = kDefaultSupportCap;
    auto *est = app.add_subcommand("estimate", "Light-cone estimate of Tr(P Phi(|0><0|))");
    est->add_option("--pauli", pauli, "Pauli string, qubit 0 first")->required();
    est->add_option("--eps", eps)->required();
    est->add_option("--delta", delta)->required();
    est->add_option("--circuit", circuit_path, "Circuit config (JSON)")->required();
    est->add_option("--support-cap", support_cap)->capture_default_str();

    std::string config_path;
    std::vector<std::pair<std::string, CLI::App *>> subs;
    const std::vector<std::pair<std::string, std::string>> names{
        {"variance", "MC variance vs exact second moment and bounds"},
        {"gradscan", "Gradient variance per layer"},
        {"purity", "MC purity vs bounds"},
        {"kernel", "Fidelity and projected kernels"},
        {"bounds", "Closed-form bound calculators"},
        {"tracedist", "Trace distance decay"},
        {"fig-layer", "Layer scan figure data"},
        {"fig-qubits", "Qubit scan figure data"},
        {"fig-qaoa", "QAOA scans figure data"},
        {"bench", "Estimator timing"}};
    for (const auto &[name, help] : names) {
        auto *s = app.add_subcommand(name, help);
        s->add_option("--config", config_path, "Experiment config (JSON)");
        subs.emplace_back(name, s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunOptions opts{seed, threads};
    try {
        if (est->parsed()) {
            json cj = load_json_file(circuit_path);
            CircuitConfig cfg = circuit_config_from_json(cj);
            Rng rng = make_rng(cfg.seed, 0);
            NoisyCircuit circ = sample_circuit(cfg, rng);
            PauliString p = PauliString::from_string(pauli);
            EstimateReport r = estimate(circ, p, eps, delta, {support_cap, true});
            json j = r.to_json();
            j["pauli"] = p.str();
            j["eps"] = eps;
            j["delta"] = delta;
            j["circuit"] = cj;
            j["version"] = kVersion;
            emit(j.dump(2) + "\n", out);
            return 0;
        }
        for (const auto &[name, s] : subs) {
            if (!s->parsed()) continue;
            json cfg = optional_config(config_path);
            Table t;
            if (name == "variance") t = run_variance(cfg, opts);
            else if (name == "gradscan") t = run_gradscan(cfg, opts);
            else if (name == "purity") t = run_purity(cfg, opts);
            else if (name == "kernel") t = run_kernel(cfg, opts);
            else if (name == "bounds") t = run_bounds(cfg);
            else if (name == "tracedist") t = run_tracedist(cfg, opts);
            else if (name == "fig-layer") t = fig_layer(FigureConfig::from_json(cfg), GateMode::HardwareEfficient, opts);
            else if (name == "fig-qubits") t = fig_qubits(FigureConfig::from_json(cfg), GateMode::HardwareEfficient, opts);
            else if (name == "fig-qaoa") t = fig_qaoa(FigureConfig::from_json(cfg), opts);
            else t = run_bench(cfg, opts);
            t.config["seed"] = seed;
            emit(t.csv(), out);
            return 0;
        }
    } catch (const ResourceCapError &e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
