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

#include "effdepth/lightcone.hpp"
#include "oracles.hpp"

using namespace effdepth;

namespace {

NoisyCircuit random_circuit(Rng &rng, int n, int depth, const PauliTransferMatrix &noise, bool singles = false) {
    CircuitConfig cfg;
    cfg.n = n;
    cfg.depth = depth;
    cfg.noise = noise;
    cfg.single_qubit_layers = singles;
    return sample_circuit(cfg, rng);
}

PauliString random_pauli(Rng &rng, int n) {
    PauliString p(n);
    while (p.weight() == 0)
        for (int q = 0; q < n; q++) p.set(q, uniform_int(rng, 0, 3) * (uniform01(rng) < 0.4));
    return p;
}

}  // namespace

TEST(TruncationDepth, examples) {
    ASSERT_EQ(truncation_depth(0.5, 0.1, 0.25), 11u);
    ASSERT_EQ(truncation_depth(0.64, 0.05, 0.1), 22u);
    ASSERT_EQ(truncation_depth(0.01, 1.0, 1.0), 1u);
    ASSERT_EQ(truncation_depth(0.0, 0.1, 0.1), 1u);
    ASSERT_THROW(truncation_depth(1.0, 0.1, 0.1), ConfigError);
    ASSERT_THROW(truncation_depth(0.5, 0.0, 0.1), ConfigError);
}

TEST(ZeroRule, examples) {
    ASSERT_FALSE(zero_rule(0.9, 1, 0.1, 0.1));  // 0.9 / 0.01 = 90
    ASSERT_TRUE(zero_rule(0.1, 3, 0.5, 0.1));   // 0.001 / 0.25 = 0.004
}

TEST(PropagatedObservable, from_pauli_is_dense_pauli) {
    auto p = PauliString::from_string("-IXIZY");
    auto o = PropagatedObservable::from_pauli(p);
    ASSERT_EQ(o.support(), (std::vector<int>{1, 3, 4}));
    ASSERT_LT((o.full_matrix(5) - oracle::pauli_string("-IXIZY")).cwiseAbs().maxCoeff(), 1e-15);
}

// Full-depth backpropagation against the Heisenberg picture built from Kraus operators.
TEST(Backpropagate, matches_dense_heisenberg) {
    Rng rng = make_rng(41, 0);
    for (int trial = 0; trial < 10; trial++) {
        int n = uniform_int(rng, 2, 4);
        KrausChannel k = random_channel(rng);
        auto c = random_circuit(rng, n, uniform_int(rng, 1, 3), ptm_from_kraus(k), trial % 2 == 0);
        auto p = random_pauli(rng, n);
        auto o = backpropagate(c, p, c.depth());
        // Oracle: O = Phi^*(P) via adjoints of each layer in reverse.
        oracle::Mat m = oracle::pauli_string(p.str());
        std::vector<oracle::Mat> kraus(k.ops.begin(), k.ops.end());
        for (int q = 0; q < int(c.final_layer.size()); q++) {
            oracle::Mat u = oracle::embed1(c.final_layer[q], n, q);
            m = u.adjoint() * m * u;
        }
        for (int l = int(c.depth()) - 1; l >= 0; l--) {
            const Layer &layer = c.layers[l];
            if (layer.noisy)
                for (int q = 0; q < n; q++) m = oracle::adjoint_kraus(m, kraus, n, q);
            for (const auto &op : layer.singles) {
                oracle::Mat u = oracle::embed1(op.unitary(), n, op.qubit);
                m = u.adjoint() * m * u;
            }
            for (std::size_t g = 0; g < layer.gates.size(); g++) {
                oracle::Mat u = oracle::embed2(gate_unitary(layer.gates[g]), n, layer.pairs[g].first, layer.pairs[g].second);
                m = u.adjoint() * m * u;
            }
        }
        ASSERT_LT((o.full_matrix(n) - m).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(Backpropagate, heisenberg_consistency) {
    Rng rng = make_rng(42, 0);
    for (int trial = 0; trial < 30; trial++) {
        int n = uniform_int(rng, 2, 6);
        auto c = random_circuit(rng, n, uniform_int(rng, 1, 6), ptm_from_kraus(random_channel(rng)));
        auto p = random_pauli(rng, n);
        double dense = expectation(run(c, DensityMatrix::zero_state(n)), p);
        ASSERT_NEAR(backpropagate(c, p, c.depth()).value_on_zero_state(), dense, 1e-10);
    }
}

TEST(Backpropagate, truncated_values_match_dense_on_suffix) {
    Rng rng = make_rng(43, 0);
    auto c = random_circuit(rng, 5, 6, dep_after_amp(0.2, 0.2));
    auto p = PauliString::from_string("IIZII");
    auto vals = truncated_values(c, p, 6);
    ASSERT_EQ(vals.size(), 7u);
    ASSERT_NEAR(vals[0], 1.0, 1e-15);
    for (std::size_t l = 1; l <= 6; l++)
        ASSERT_NEAR(vals[l], expectation(run(c.last_layers(l), DensityMatrix::zero_state(5)), p), 1e-11);
}

TEST(Backpropagate, identity_offset_under_replacer) {
    // Replacer onto the Bloch vector (0, 0, 0.6): every Pauli collapses to its t component.
    Real44 m = Real44::Zero();
    m(0, 0) = 1;
    m(3, 0) = 0.6;
    Rng rng = make_rng(44, 0);
    auto c = random_circuit(rng, 4, 3, PauliTransferMatrix(m));
    c.final_layer.clear();
    auto o = backpropagate(c, PauliString::from_string("IZII"), 1);
    ASSERT_TRUE(o.support().empty());
    ASSERT_NEAR(o.identity_offset(), 0.6, 1e-14);
    ASSERT_EQ(o.certificate(), 0.0);
    auto x = backpropagate(c, PauliString::from_string("XIII"), 1);
    ASSERT_NEAR(x.value_on_zero_state(), 0.0, 1e-14);
}

TEST(Backpropagate, support_cap) {
    Rng rng = make_rng(45, 0);
    auto c = random_circuit(rng, 8, 6, dep_after_amp(0.01, 0.01));
    ASSERT_THROW(backpropagate(c, PauliString::from_string("IIIZIIII"), 6, 3), ResourceCapError);
}

TEST(Estimate, exact_when_truncation_covers_circuit) {
    Rng rng = make_rng(46, 0);
    for (int trial = 0; trial < 20; trial++) {
        int n = uniform_int(rng, 2, 6);
        auto c = random_circuit(rng, n, uniform_int(rng, 1, 4), ptm_from_kraus(random_channel(rng)));
        auto p = random_pauli(rng, n);
        auto r = estimate(c, p, 0.01, 0.01, {kDefaultSupportCap, false});
        ASSERT_GE(r.l_theoretical, c.depth());
        ASSERT_EQ(r.steps_executed, c.depth());
        ASSERT_NEAR(r.value, expectation(run(c, DensityMatrix::zero_state(n)), p), 1e-10);
    }
}

TEST(Estimate, early_break_is_sound) {
    Rng rng = make_rng(47, 0);
    int breaks = 0;
    for (int trial = 0; trial < 60; trial++) {
        auto c = random_circuit(rng, 6, 12, dep_after_amp(0.3, 0.3));
        auto p = PauliString::single(6, uniform_int(rng, 0, 5), uniform_int(rng, 1, 3));
        auto r = estimate(c, p, 0.1, 0.1);
        ASSERT_LE(r.steps_executed, r.l_theoretical);
        if (!r.early_break) continue;
        breaks++;
        ASSERT_LE(2 * r.certificate, 0.1);
        double exact = expectation(run(c, DensityMatrix::zero_state(6)), p);
        ASSERT_LE(std::abs(r.value - exact), 0.1);
    }
    ASSERT_GT(breaks, 0);
}

TEST(Estimate, rejects_bad_inputs) {
    Rng rng = make_rng(48, 0);
    auto c = random_circuit(rng, 3, 2, dep_after_amp(0.1, 0.1));
    ASSERT_THROW(estimate(c, PauliString::from_string("III"), 0.1, 0.1), ConfigError);
    ASSERT_THROW(estimate(c, PauliString::from_string("II"), 0.1, 0.1), ConfigError);
    auto unitary = random_circuit(rng, 3, 2, PauliTransferMatrix());
    ASSERT_THROW(estimate(unitary, PauliString::from_string("IZI"), 0.1, 0.1), ConfigError);
}

TEST(Estimate, report_json) {
    Rng rng = make_rng(49, 0);
    auto c = random_circuit(rng, 4, 5, dep_after_amp(0.2, 0.2));
    auto j = estimate(c, PauliString::from_string("ZIII"), 0.2, 0.2).to_json();
    for (const char *key : {"value", "l_theoretical", "steps_executed", "early_break", "certificate", "support_peak"})
        ASSERT_TRUE(j.contains(key)) << key;
    ASSERT_EQ(j["l_theoretical"].get<int>(), 9);
}

// Width independence: the cone never touches far-away qubits.
TEST(Estimate, wide_circuits) {
    for (int n : {20, 80}) {
        CircuitConfig cfg;
        cfg.n = n;
        cfg.depth = 20;
        cfg.noise = dep_after_amp(0.4, 0.4);
        Rng rng = make_rng(50, n);
        auto c = sample_circuit(cfg, rng);
        auto r = estimate(c, PauliString::single(n, n / 2, 3), 0.3, 0.3);
        ASSERT_LE(r.support_peak, 2 * r.l_theoretical + 2);
    }
}
