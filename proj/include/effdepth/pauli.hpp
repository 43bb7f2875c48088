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

#ifndef EFFDEPTH_PAULI_HPP
#define EFFDEPTH_PAULI_HPP

#include <array>
#include <bit>
#include <string>
#include <string_view>

#include "effdepth/common.hpp"

namespace effdepth {

/// Index of a single-qubit Pauli in the (I, X, Y, Z) ordering.
inline int pauli_index(bool x, bool z) {
    return x ? (z ? 2 : 1) : (z ? 3 : 0);
}
inline bool pauli_index_x(int idx) { return idx == 1 || idx == 2; }
inline bool pauli_index_z(int idx) { return idx == 2 || idx == 3; }

/// Signed n-qubit Pauli string, stored as packed x and z bits.
/// The character at position 0 of the text form acts on qubit 0.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits)
        : n_(num_qubits), xs_((num_qubits + 63) / 64, 0), zs_((num_qubits + 63) / 64, 0) {}

    static PauliString from_string(std::string_view text) {
        bool negative = false;
        if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
            negative = text[0] == '-';
            text.remove_prefix(1);
        }
        PauliString p(text.size());
        for (std::size_t k = 0; k < text.size(); k++) {
            switch (text[k]) {
                case 'I': case '_': break;
                case 'X': p.set(k, 1); break;
                case 'Y': p.set(k, 2); break;
                case 'Z': p.set(k, 3); break;
                default:
                    throw ConfigError("bad Pauli character '" + std::string(1, text[k]) + "'");
            }
        }
        p.negative_ = negative;
        return p;
    }

    static PauliString single(std::size_t num_qubits, std::size_t qubit, int index) {
        PauliString p(num_qubits);
        p.set(qubit, index);
        return p;
    }

    std::size_t num_qubits() const { return n_; }
    bool x(std::size_t q) const { return (xs_[q >> 6] >> (q & 63)) & 1; }
    bool z(std::size_t q) const { return (zs_[q >> 6] >> (q & 63)) & 1; }
    int index(std::size_t q) const { return pauli_index(x(q), z(q)); }
    bool negative() const { return negative_; }
    int sign() const { return negative_ ? -1 : 1; }

    void set(std::size_t q, int idx) {
        check_qubit(q);
        uint64_t bit = uint64_t{1} << (q & 63);
        xs_[q >> 6] = pauli_index_x(idx) ? (xs_[q >> 6] | bit) : (xs_[q >> 6] & ~bit);
        zs_[q >> 6] = pauli_index_z(idx) ? (zs_[q >> 6] | bit) : (zs_[q >> 6] & ~bit);
    }
    void set_negative(bool negative) { negative_ = negative; }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t k = 0; k < xs_.size(); k++) w += std::popcount(xs_[k] | zs_[k]);
        return w;
    }

    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q < n_; q++)
            if (x(q) || z(q)) out.push_back(q);
        return out;
    }

    /// x and z masks of the first 64 qubits.
    uint64_t x_mask() const { return xs_.empty() ? 0 : xs_[0]; }
    uint64_t z_mask() const { return zs_.empty() ? 0 : zs_[0]; }

    std::string str() const {
        static const char chars[4] = {'I', 'X', 'Y', 'Z'};
        std::string s = negative_ ? "-" : "";
        for (std::size_t q = 0; q < n_; q++) s += chars[index(q)];
        return s;
    }

    bool operator==(const PauliString &other) const = default;

   private:
    void check_qubit(std::size_t q) const {
        if (q >= n_) throw std::out_of_range("qubit index out of range");
    }

    std::size_t n_ = 0;
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    bool negative_ = false;

    friend bool commutes(const PauliString &, const PauliString &);
};

inline bool commutes(const PauliString &a, const PauliString &b) {
    if (a.n_ != b.n_) throw std::invalid_argument("Pauli length mismatch");
    int parity = 0;
    for (std::size_t k = 0; k < a.xs_.size(); k++)
        parity ^= std::popcount((a.xs_[k] & b.zs_[k]) ^ (a.zs_[k] & b.xs_[k])) & 1;
    return parity == 0;
}

/// Exponent e with sigma(x1,z1) sigma(x2,z2) = i^e sigma(x1^x2, z1^z2).
inline int pauli_product_phase(bool x1, bool z1, bool x2, bool z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return int(z2) - int(x2);
    if (x1) return int(z2) * (2 * int(x2) - 1);
    return int(x2) * (1 - 2 * int(z2));
}

/// a * b = i^phase * result, with result carrying no sign and phase in 0..3
/// (the signs of a and b are folded into phase).
struct PhasedPauli {
    int phase = 0;
    PauliString pauli;
};

inline PhasedPauli multiply(const PauliString &a, const PauliString &b) {
    if (a.num_qubits() != b.num_qubits()) throw std::invalid_argument("Pauli length mismatch");
    PhasedPauli out{0, PauliString(a.num_qubits())};
    int e = (a.negative() ? 2 : 0) + (b.negative() ? 2 : 0);
    for (std::size_t q = 0; q < a.num_qubits(); q++) {
        bool x1 = a.x(q), z1 = a.z(q), x2 = b.x(q), z2 = b.z(q);
        e += pauli_product_phase(x1, z1, x2, z2);
        out.pauli.set(q, pauli_index(x1 ^ x2, z1 ^ z2));
    }
    out.phase = ((e % 4) + 4) % 4;
    return out;
}

/// Two-qubit Clifford stored as the signed images of X1, Z1, X2, Z2.
/// Local qubit 0 is the first qubit of the pair it acts on.
class CliffordTableau2 {
   public:
    CliffordTableau2()
        : images_{PauliString::from_string("XI"), PauliString::from_string("ZI"),
                  PauliString::from_string("IX"), PauliString::from_string("IZ")} {}

    CliffordTableau2(PauliString x1, PauliString z1, PauliString x2, PauliString z2)
        : images_{std::move(x1), std::move(z1), std::move(x2), std::move(z2)} {
        validate();
    }

    static CliffordTableau2 cnot() {
        return {PauliString::from_string("XX"), PauliString::from_string("ZI"),
                PauliString::from_string("IX"), PauliString::from_string("ZZ")};
    }

    /// Images in the order X1, Z1, X2, Z2.
    const std::array<PauliString, 4> &images() const { return images_; }

    /// C P C^dagger for a two-qubit P.
    PauliString apply_local(const PauliString &p) const {
        int e = p.negative() ? 2 : 0;
        PauliString acc(2);
        for (int q = 0; q < 2; q++) {
            bool x = p.x(q), z = p.z(q);
            if (x && z) e += 1;
            if (x) acc = mul_into(acc, images_[2 * q], e);
            if (z) acc = mul_into(acc, images_[2 * q + 1], e);
        }
        e = ((e % 4) + 4) % 4;
        if (e % 2 != 0) throw std::logic_error("non-Hermitian Clifford image");
        acc.set_negative(e == 2);
        return acc;
    }

    /// Conjugates qubits (a, b) of p.
    PauliString conjugate(const PauliString &p, std::size_t a, std::size_t b) const {
        PauliString local(2);
        local.set(0, p.index(a));
        local.set(1, p.index(b));
        PauliString img = apply_local(local);
        PauliString out = p;
        out.set(a, img.index(0));
        out.set(b, img.index(1));
        out.set_negative(p.negative() != img.negative());
        return out;
    }

    /// Dense unitary, fixed up to a global phase. Matrix index is 2*bit(a) + bit(b).
    Mat4 unitary() const {
        Mat4 cz1 = dense(images_[1]), cz2 = dense(images_[3]);
        Mat4 proj = 0.25 * (Mat4::Identity() + cz1) * (Mat4::Identity() + cz2);
        Eigen::Index best = 0;
        proj.colwise().norm().maxCoeff(&best);
        Eigen::Vector4cd v0 = proj.col(best).normalized();
        Mat4 cx1 = dense(images_[0]), cx2 = dense(images_[2]);
        Mat4 u;
        u.col(0) = v0;
        u.col(1) = cx2 * v0;
        u.col(2) = cx1 * v0;
        u.col(3) = cx1 * cx2 * v0;
        return u;
    }

    bool operator==(const CliffordTableau2 &other) const = default;

   private:
    static PauliString mul_into(const PauliString &acc, const PauliString &img, int &e) {
        PhasedPauli r = multiply(acc, img);
        e += r.phase;
        return r.pauli;
    }

    static Mat4 dense(const PauliString &p) {
        Mat4 m = kron(pauli_matrix(p.index(0)), pauli_matrix(p.index(1)));
        return p.negative() ? Mat4(-m) : m;
    }

    void validate() const {
        for (int i = 0; i < 4; i++) {
            if (images_[i].num_qubits() != 2) throw std::invalid_argument("tableau images must be 2-qubit");
            for (int j = i + 1; j < 4; j++) {
                bool should_anticommute = (i / 2 == j / 2);
                if (commutes(images_[i], images_[j]) == should_anticommute)
                    throw std::invalid_argument("tableau images violate commutation relations");
            }
        }
    }

    std::array<PauliString, 4> images_;
};

/// Uniform draw from the 11520-element two-qubit Clifford group (mod phase).
inline CliffordTableau2 sample_clifford2(Rng &rng) {
    auto signed_pauli = [](int code, bool negative) {
        PauliString p(2);
        p.set(0, code & 3);
        p.set(1, code >> 2);
        p.set_negative(negative);
        return p;
    };
    auto coin = [&]() { return uniform_int(rng, 0, 1) == 1; };
    auto pick = [&](const std::vector<int> &codes) { return codes[uniform_int(rng, 0, int(codes.size()) - 1)]; };

    std::vector<int> all;
    for (int c = 1; c < 16; c++) all.push_back(c);
    PauliString x1 = signed_pauli(pick(all), coin());

    std::vector<int> partners;
    for (int c : all)
        if (!commutes(signed_pauli(c, false), x1)) partners.push_back(c);
    PauliString z1 = signed_pauli(pick(partners), coin());

    std::vector<int> complement;
    for (int c : all) {
        PauliString q = signed_pauli(c, false);
        if (commutes(q, x1) && commutes(q, z1)) complement.push_back(c);
    }
    PauliString x2 = signed_pauli(pick(complement), coin());
    std::vector<int> z2_choices;
    for (int c : complement)
        if (!commutes(signed_pauli(c, false), x2)) z2_choices.push_back(c);
    PauliString z2 = signed_pauli(pick(z2_choices), coin());
    return CliffordTableau2(x1, z1, x2, z2);
}

/// Uniform draw from the 24 single-qubit Cliffords, returned as a unitary.
inline Mat2 sample_clifford1(Rng &rng) {
    static const std::vector<Mat2> group = [] {
        Mat2 h = (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0);
        Mat2 s = (Mat2() << 1, 0, 0, cplx(0, 1)).finished();
        std::vector<Mat2> out{Mat2::Identity()};
        auto same_up_to_phase = [](const Mat2 &a, const Mat2 &b) {
            return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-9;
        };
        for (std::size_t k = 0; k < out.size(); k++) {
            for (const Mat2 &g : {h, s}) {
                Mat2 c = g * out[k];
                bool seen = false;
                for (const Mat2 &o : out) seen = seen || same_up_to_phase(o, c);
                if (!seen) out.push_back(c);
            }
        }
        return out;
    }();
    return group[uniform_int(rng, 0, int(group.size()) - 1)];
}

}  // namespace effdepth

#endif
