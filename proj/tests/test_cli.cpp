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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "effdepth/experiments.hpp"

using namespace effdepth;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

fs::path scratch() {
    fs::path d = fs::temp_directory_path() / ("effdepth_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string write_json(const std::string &name, const json &j) {
    fs::path p = scratch() / name;
    std::ofstream(p) << j.dump();
    return p.string();
}

Result run(const std::string &args) {
    fs::path out = scratch() / "stdout.txt";
    std::string cmd = std::string(EFFDEPTH_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream s;
    s << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream s(text);
    for (std::string l; std::getline(s, l);) out.push_back(l);
    return out;
}

std::string join(const std::vector<std::string> &cols) {
    std::string s;
    for (std::size_t k = 0; k < cols.size(); k++) s += (k ? "," : "") + cols[k];
    return s;
}

json small_circuit() {
    return {{"n", 4}, {"depth", 3}, {"noise", dep_after_amp_json(0.2, 0.2)}, {"seed", 3}};
}

}  // namespace

TEST(Cli, estimate_reports_json) {
    auto path = write_json("circ.json", small_circuit());
    Result r = run("estimate --pauli IZII --eps 0.2 --delta 0.2 --circuit " + path);
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    for (const char *key : {"value", "l_theoretical", "steps_executed", "early_break", "certificate", "support_peak",
                            "c", "pauli", "circuit", "version"})
        ASSERT_TRUE(j.contains(key)) << key;
    // Same circuit in-process.
    CircuitConfig cfg = circuit_config_from_json(small_circuit());
    Rng rng = make_rng(cfg.seed, 0);
    auto c = sample_circuit(cfg, rng);
    ASSERT_NEAR(j["value"].get<double>(), estimate(c, PauliString::from_string("IZII"), 0.2, 0.2).value, 1e-15);
}

TEST(Cli, exit_codes) {
    auto path = write_json("circ.json", small_circuit());
    ASSERT_EQ(run("estimate --pauli IZ --eps 0.2 --delta 0.2 --circuit " + path).code, 2);
    ASSERT_EQ(run("estimate --pauli IQII --eps 0.2 --delta 0.2 --circuit " + path).code, 2);
    ASSERT_EQ(run("estimate --pauli IZII --eps 0.2 --delta 0.2 --circuit /nonexistent.json").code, 2);
    ASSERT_EQ(run("estimate --pauli IZII --eps 0.2").code, 2);
    ASSERT_EQ(run("nosuchcommand").code, 2);
    auto bad_noise = write_json("bad.json", {{"n", 4}, {"depth", 2}, {"noise", {{"kind", "bitflip"}}}});
    ASSERT_EQ(run("estimate --pauli IZII --eps 0.2 --delta 0.2 --circuit " + bad_noise).code, 2);
    auto not_json = scratch() / "garbage.json";
    std::ofstream(not_json) << "{ n: ";
    ASSERT_EQ(run("variance --config " + not_json.string()).code, 2);

    auto wide = write_json("wide.json", {{"n", 10}, {"depth", 8}, {"noise", dep_after_amp_json(0.01, 0.01)}});
    ASSERT_EQ(run("estimate --pauli IIIIZIIIII --eps 0.01 --delta 0.01 --support-cap 2 --circuit " + wide).code, 3);
    auto dense = write_json("dense.json", {{"circuit", {{"n", 11}, {"depth", 1}}}, {"samples", 2}});
    ASSERT_EQ(run("purity --config " + dense).code, 3);
}

// The figure CSVs are the interface consumed by the plotting scripts.
TEST(Cli, figure_csv_schema) {
    auto cfg = write_json("fig.json", {{"n", 3}, {"depth", 4}, {"samples", 10}});
    Result r = run("--seed 4 fig-layer --config " + cfg);
    ASSERT_EQ(r.code, 0);
    auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 4u + 4u);
    ASSERT_EQ(ls[0], std::string("# effdepth ") + kVersion);
    ASSERT_EQ(ls[1], "# experiment: fig-layer");
    ASSERT_EQ(ls[2].rfind("# config: ", 0), 0u);
    json meta = json::parse(ls[2].substr(10));
    ASSERT_EQ(meta["seed"].get<int>(), 4);
    ASSERT_EQ(meta["n"].get<int>(), 3);
    ASSERT_EQ(ls[3], join(kLayerScanColumns));
    for (std::size_t i = 4; i < ls.size(); i++) {
        auto cells = std::count(ls[i].begin(), ls[i].end(), ',');
        ASSERT_EQ(std::size_t(cells) + 1, kLayerScanColumns.size());
        ASSERT_EQ(ls[i].rfind("hwe,3,4,", 0), 0u);
    }

    auto qcfg = write_json("figq.json", {{"n_min", 2}, {"n_max", 3}, {"samples", 5}, {"q_values", {0.2}}});
    Result q = run("fig-qubits --config " + qcfg);
    ASSERT_EQ(q.code, 0);
    auto qs = lines(q.out);
    ASSERT_EQ(qs[3], join(kQubitScanColumns));
    ASSERT_EQ(qs.size(), 4u + 2u);
}

TEST(Cli, output_is_deterministic) {
    auto cfg = write_json("var.json", {{"circuit", small_circuit()}, {"samples", 40}});
    Result a = run("--seed 9 variance --config " + cfg);
    Result b = run("--seed 9 variance --config " + cfg);
    Result c = run("--seed 9 --threads 2 variance --config " + cfg);
    Result d = run("--seed 10 variance --config " + cfg);
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(a.out, b.out);
    ASSERT_EQ(a.out, c.out);
    ASSERT_NE(a.out, d.out);
}

TEST(Cli, every_subcommand_runs) {
    auto circ = small_circuit();
    auto cfg = write_json("all.json", {{"circuit", circ}, {"samples", 4}, {"n", 3}, {"depth", 2}, {"n_min", 2},
                                       {"n_max", 2}, {"q_values", {0.2}}, {"n_values", {6}}, {"repeats", 1}});
    for (const char *cmd : {"variance", "gradscan", "purity", "kernel", "bounds", "tracedist", "fig-layer",
                            "fig-qubits", "fig-qaoa", "bench"}) {
        Result r = run(std::string(cmd) + " --config " + cfg);
        ASSERT_EQ(r.code, 0) << cmd;
        ASSERT_EQ(lines(r.out)[1], std::string("# experiment: ") + cmd);
    }
}

TEST(Cli, out_flag_writes_file) {
    auto cfg = write_json("b.json", {{"p_dep", 0.3}});
    fs::path target = scratch() / "bounds.csv";
    ASSERT_EQ(run("--out " + target.string() + " bounds --config " + cfg).code, 0);
    std::ifstream in(target);
    std::stringstream s;
    s << in.rdbuf();
    auto ls = lines(s.str());
    ASSERT_EQ(ls.size(), 5u);
    ASSERT_EQ(ls[3].substr(0, 2), "c,");
}
