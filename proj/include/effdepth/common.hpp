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

#ifndef EFFDEPTH_COMMON_HPP
#define EFFDEPTH_COMMON_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace effdepth {

inline constexpr const char *kVersion = "0.1.0";

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using MatX = Eigen::MatrixXcd;
using Real3 = Eigen::Vector3d;
using Real33 = Eigen::Matrix3d;
using Real44 = Eigen::Matrix4d;

/// Malformed input or configuration (CLI exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A size cap was exceeded (CLI exit code 3).
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Single-qubit Pauli matrices indexed I=0, X=1, Y=2, Z=3.
inline const Mat2 &pauli_matrix(int index) {
    static const Mat2 mats[4] = {
        (Mat2() << 1, 0, 0, 1).finished(),
        (Mat2() << 0, 1, 1, 0).finished(),
        (Mat2() << 0, cplx(0, -1), cplx(0, 1), 0).finished(),
        (Mat2() << 1, 0, 0, -1).finished(),
    };
    return mats[index];
}

inline Mat4 kron(const Mat2 &a, const Mat2 &b) {
    Mat4 r;
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++)
            for (int k = 0; k < 2; k++)
                for (int l = 0; l < 2; l++)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Independent generator for (seed, stream).
inline Rng make_rng(uint64_t seed, uint64_t stream) {
    return Rng(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

inline double uniform01(Rng &rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_int(Rng &rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double standard_normal(Rng &rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

/// Runs f(i) for i in [0, count) on up to `threads` workers and returns the
/// results in index order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t count, int threads, F &&f) {
    std::vector<T> out(count);
    std::size_t workers = std::max(1, threads);
    workers = std::min(workers, std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; i++) out[i] = f(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; w++) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < count; i += workers) out[i] = f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &t : pool) t.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace effdepth

#endif
