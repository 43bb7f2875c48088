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

#include <gtest/gtest.h>

#include "effdepth/dense_sim.hpp"
#include "oracles.hpp"

using namespace effdepth;

TEST(Brickwork, layouts) {
    auto g = brickwork_1d(4, 2);
    ASSERT_EQ(g.layers.size(), 2u);
    ASSERT_EQ(g.layers[0], (std::vector<QubitPair>{{0, 1}, {2, 3}}));
    ASSERT_EQ(g.layers[1], (std::vector<QubitPair>{{1, 2}}));
    auto two = brickwork_1d(2, 3);
    for (const auto &l : two.layers) ASSERT_EQ(l, (std::vector<QubitPair>{{0, 1}}));
    auto five = brickwork_1d(5, 2, true);
    ASSERT_EQ(five.layers[0], (std::vector<QubitPair>{{1, 2}, {3, 4}}));
    ASSERT_EQ(five.layers[1], (std::vector<QubitPair>{{0, 1}, {2, 3}}));
    ASSERT_THROW(brickwork_1d(1, 2), ConfigError);
}

TEST(CouplingGraph, validation) {
    CouplingGraph g{4, {{{0, 1}, {1, 2}}}};
    ASSERT_THROW(g.validate(), ConfigError);
    CouplingGraph h{3, {{{0, 3}}}};
    ASSERT_THROW(h.validate(), ConfigError);
    CouplingGraph ok{3, {{{2, 0}}}};
    ok.validate();
}

TEST(Haar, unitary_and_second_moment) {
    Rng rng = make_rng(21, 0);
    const int draws = 20000;
    std::vector<double> x2, x4;
    for (int k = 0; k < draws; k++) {
        MatX u = haar_unitary(4, rng);
        ASSERT_LT((u.adjoint() * u - MatX::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
        double a = std::norm(u(0, 0));
        x2.push_back(a);
        x4.push_back(a * a);
    }
    auto mean_se = [](const std::vector<double> &v) {
        double m = 0, s = 0;
        for (double x : v) m += x;
        m /= v.size();
        for (double x : v) s += (x - m) * (x - m);
        return std::pair{m, std::sqrt(s / (v.size() - 1) / v.size())};
    };
    // E|U00|^2 = 1/d, E|U00|^4 = 2/(d(d+1)).
    auto [m2, s2] = mean_se(x2);
    auto [m4, s4] = mean_se(x4);
    ASSERT_NEAR(m2, 0.25, 3 * s2);
    ASSERT_NEAR(m4, 0.1, 3 * s4);
}

TEST(Gates, hwe_matches_explicit_product) {
    std::array<double, 4> t{0.3, 1.1, -0.7, 2.5};
    oracle::Mat rx1 = oracle::expmi(oracle::pauli(1) / 2, t[0]), rx2 = oracle::expmi(oracle::pauli(1) / 2, t[1]);
    oracle::Mat ry3 = oracle::expmi(oracle::pauli(2) / 2, t[2]), ry4 = oracle::expmi(oracle::pauli(2) / 2, t[3]);
    oracle::Mat cx = oracle::Mat::Zero(4, 4);
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1;
    oracle::Mat expected = oracle::kron(ry4, ry3) * cx * oracle::kron(rx2, rx1);
    ASSERT_LT((gate_unitary(HweGate{t}) - expected).cwiseAbs().maxCoeff(), 1e-14);
    oracle::Mat zz = oracle::expmi(oracle::kron(oracle::pauli(3), oracle::pauli(3)), 0.4);
    ASSERT_LT((gate_unitary(ZZGate{0.4}) - zz).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gates, params_roundtrip) {
    Rng rng = make_rng(22, 0);
    CircuitConfig cfg;
    cfg.n = 4;
    cfg.depth = 3;
    cfg.mode = GateMode::HardwareEfficient;
    auto c = sample_circuit(cfg, rng);
    ParamRef r{1, 0, 2, false};
    set_param(c, r, 0.125);
    ASSERT_EQ(get_param(c, r), 0.125);
    ASSERT_EQ(std::get<HweGate>(c.layers[1].gates[0]).theta[2], 0.125);
    ASSERT_EQ(generator_half_gap(c, r), 0.5);
    cfg.mode = GateMode::Haar;
    auto h = sample_circuit(cfg, rng);
    ASSERT_THROW(get_param(h, r), std::invalid_argument);
}

// QAOA with noiseless "noise" against explicit exponentials of H_z and H_x.
TEST(Qaoa, matches_explicit_exponentials) {
    const int n = 4;
    std::vector<double> g{0.3, 1.2}, b{0.7, -0.4};
    QaoaLayout layout;
    auto c = qaoa_circuit(n, g, b, PauliTransferMatrix(), &layout);
    ASSERT_EQ(c.depth(), 5u);
    ASSERT_FALSE(c.layers[3].noisy);
    ASSERT_TRUE(c.layers[4].noisy);
    ASSERT_EQ(layout.gamma.size(), 2u);
    ASSERT_EQ(layout.gamma[0].size(), 3u);
    ASSERT_EQ(layout.beta[1].size(), 4u);

    const Eigen::Index d = 1 << n;
    oracle::Mat hz = oracle::Mat::Zero(d, d), hx = oracle::Mat::Zero(d, d);
    for (int i = 0; i + 1 < n; i++) {
        std::string s(n, 'I');
        s[i] = s[i + 1] = 'Z';
        hz += oracle::pauli_string(s);
    }
    for (int i = 0; i < n; i++) {
        std::string s(n, 'I');
        s[i] = 'X';
        hx += oracle::pauli_string(s);
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(d, 1.0 / std::sqrt(double(d)));
    for (std::size_t i = 0; i < g.size(); i++) psi = oracle::expmi(hx, b[i]) * oracle::expmi(hz, g[i]) * psi;
    oracle::Mat expected = psi * psi.adjoint();
    auto rho = run(c, DensityMatrix::zero_state(n));
    ASSERT_LT((rho.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qaoa, zero_rounds_is_plus_state) {
    auto c = qaoa_circuit(3, {}, {}, dep_after_amp(0.2, 0.2));
    auto rho = run(c, DensityMatrix::zero_state(3));
    ASSERT_NEAR(expectation(rho, PauliString::from_string("XII")), 1, 1e-14);
}

TEST(NoisyCircuit, layer_ranges_compose) {
    Rng rng = make_rng(23, 0);
    CircuitConfig cfg;
    cfg.n = 4;
    cfg.depth = 5;
    cfg.noise = dep_after_amp(0.1, 0.3);
    auto c = sample_circuit(cfg, rng);
    c.validate();
    auto rho0 = DensityMatrix::zero_state(4);
    auto full = run(c, rho0);
    for (std::size_t k = 1; k <= c.depth(); k++) {
        auto split = run(c.layer_range(k, c.depth()), run(c.layer_range(1, k - 1), rho0));
        ASSERT_LT((split.matrix() - full.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    }
    ASSERT_EQ(c.last_layers(2).depth(), 2u);
    ASSERT_TRUE(c.last_layers(2).has_final_layer());
    ASSERT_FALSE(c.layer_range(1, 2).has_final_layer());
    ASSERT_THROW(c.last_layers(6), std::out_of_range);
}

TEST(CircuitConfig, sampling_is_seeded) {
    CircuitConfig cfg;
    cfg.n = 3;
    cfg.depth = 2;
    Rng a = make_rng(5, 9), b = make_rng(5, 9), other = make_rng(5, 10);
    auto ca = sample_circuit(cfg, a), cb = sample_circuit(cfg, b), cc = sample_circuit(cfg, other);
    auto ua = gate_unitary(ca.layers[0].gates[0]);
    ASSERT_EQ(ua, gate_unitary(cb.layers[0].gates[0]));
    ASSERT_NE(ua, gate_unitary(cc.layers[0].gates[0]));
    ASSERT_EQ(ca.final_layer.size(), 3u);
}

TEST(CircuitConfig, pairs_geometry) {
    CircuitConfig cfg;
    cfg.n = 3;
    cfg.depth = 2;
    cfg.geometry = "pairs";
    cfg.pairs = {{{0, 2}}, {{1, 2}}};
    ASSERT_EQ(cfg.graph().layers[0], (std::vector<QubitPair>{{0, 2}}));
    cfg.depth = 3;
    ASSERT_THROW(cfg.graph(), ConfigError);
    cfg.geometry = "torus";
    ASSERT_THROW(cfg.graph(), ConfigError);
}
