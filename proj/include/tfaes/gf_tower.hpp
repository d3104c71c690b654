#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>

// Bit-exact arithmetic in the AES field GF(2^8) ("field A") and in the
// tower GF(2^2) < GF((2^2)^2) < GF(((2^2)^2)^2) ("field B").
//
// Bit conventions, used consistently across the project:
//   - bit 7 is the most significant polynomial coefficient,
//   - a 4-bit value q = {q3 q2 q1 q0} is qH*x + qL with qH = {q3 q2},
//   - an 8-bit tower value is qH*y + qL with qH = bits 7..4, qL = bits 3..0.

namespace tfaes {

// ---------------------------------------------------------------------------
// GF(2^8), polynomial basis mod m(x) = x^8 + x^4 + x^3 + x + 1
// ---------------------------------------------------------------------------

inline constexpr uint16_t kAesModulus = 0x11B;

inline uint8_t gf8_mul(uint8_t a, uint8_t b) {
    uint16_t acc = 0;
    uint16_t aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        aa <<= 1;
        if (aa & 0x100) aa ^= kAesModulus;
        b >>= 1;
    }
    return static_cast<uint8_t>(acc);
}

// gf8_inv(0) == 0 (AES S-box convention). Table generated from gf8_mul.
uint8_t gf8_inv(uint8_t a);

// ---------------------------------------------------------------------------
// GF(2^2) mod P0(x) = x^2 + x + 1, values in [0,3]
// ---------------------------------------------------------------------------

inline uint8_t gf2_mul(uint8_t a, uint8_t b) {
    uint8_t p = static_cast<uint8_t>(((a & 1) * b) ^ (((a >> 1) & 1) * (b << 1)));
    if (p & 4) p ^= 0x7;  // x^2 = x + 1
    return static_cast<uint8_t>(p & 3);
}

inline uint8_t gf2_inv(uint8_t a) {
    static constexpr uint8_t kInv[4] = {0, 1, 3, 2};
    return kInv[a & 3];
}

// Constant multiplication by phi as an XOR network; phi must be {10} or {11}.
inline uint8_t gf2_mul_phi(uint8_t q, uint8_t phi) {
    const uint8_t q1 = (q >> 1) & 1, q0 = q & 1;
    switch (phi) {
        case 2: return static_cast<uint8_t>(((q1 ^ q0) << 1) | q1);
        case 3: return static_cast<uint8_t>((q0 << 1) | (q0 ^ q1));
        default: throw std::invalid_argument("gf2_mul_phi: phi must be 2 or 3");
    }
}

// ---------------------------------------------------------------------------
// Tower parameters: P1(x) = x^2 + x + phi over GF(2^2),
//                   P2(x) = x^2 + x + lambda over GF((2^2)^2)
// ---------------------------------------------------------------------------

struct TowerParams {
    uint8_t phi = 2;      // element of GF(2^2)
    uint8_t lambda = 12;  // element of GF((2^2)^2)

    bool valid() const;
    friend bool operator==(const TowerParams&, const TowerParams&) = default;
};

// x^2 + x + c root checks by exhaustive evaluation.
bool irreducible_over_gf2e(uint8_t phi);
bool irreducible_over_gf4e(uint8_t lambda, uint8_t phi);

// ---------------------------------------------------------------------------
// GF((2^2)^2), values in [0,15]
// ---------------------------------------------------------------------------

inline uint8_t gf4_mul(uint8_t a, uint8_t b, const TowerParams& p) {
    const uint8_t ah = (a >> 2) & 3, al = a & 3;
    const uint8_t bh = (b >> 2) & 3, bl = b & 3;
    const uint8_t hh = gf2_mul(ah, bh);
    const uint8_t ll = gf2_mul(al, bl);
    const uint8_t k = gf2_mul(ah ^ al, bh ^ bl);
    const uint8_t hi = static_cast<uint8_t>(k ^ ll);
    const uint8_t lo = static_cast<uint8_t>(gf2_mul(hh, p.phi) ^ ll);
    return static_cast<uint8_t>((hi << 2) | lo);
}

inline uint8_t gf4_sq(uint8_t a, const TowerParams& p) {
    const uint8_t ah = (a >> 2) & 3, al = a & 3;
    const uint8_t h2 = gf2_mul(ah, ah);
    const uint8_t lo = static_cast<uint8_t>(gf2_mul(h2, p.phi) ^ gf2_mul(al, al));
    return static_cast<uint8_t>((h2 << 2) | lo);
}

// Constant multiplication by lambda. Dedicated XOR networks exist for the
// two constants whose gate forms the project derives explicitly
// (phi = {10} with lambda = {1100} and lambda = {1111}); every other
// combination goes through the generic multiplier.
inline uint8_t gf4_mul_lambda(uint8_t q, const TowerParams& p) {
    const uint8_t q3 = (q >> 3) & 1, q2 = (q >> 2) & 1, q1 = (q >> 1) & 1, q0 = q & 1;
    if (p.phi == 2 && p.lambda == 12) {
        const uint8_t k3 = q2 ^ q0;
        const uint8_t k2 = q3 ^ q2 ^ q1 ^ q0;
        const uint8_t k1 = q3;
        const uint8_t k0 = q2;
        return static_cast<uint8_t>((k3 << 3) | (k2 << 2) | (k1 << 1) | k0);
    }
    if (p.phi == 2 && p.lambda == 15) {
        const uint8_t k3 = q0;
        const uint8_t k2 = q1 ^ q0;
        const uint8_t k1 = q3 ^ q0;
        const uint8_t k0 = q2 ^ q1 ^ q0;
        return static_cast<uint8_t>((k3 << 3) | (k2 << 2) | (k1 << 1) | k0);
    }
    return gf4_mul(q, p.lambda, p);
}

// gf4_inv(0) == 0.
inline uint8_t gf4_inv(uint8_t q, const TowerParams& p) {
    const uint8_t qh = (q >> 2) & 3, ql = q & 3;
    const uint8_t d = static_cast<uint8_t>(gf2_mul(gf2_mul(qh, qh), p.phi) ^
                                           gf2_mul(qh, ql) ^ gf2_mul(ql, ql));
    const uint8_t di = gf2_inv(d);
    const uint8_t oh = gf2_mul(qh, di);
    const uint8_t ol = gf2_mul(static_cast<uint8_t>(qh ^ ql), di);
    return static_cast<uint8_t>((oh << 2) | ol);
}

// ---------------------------------------------------------------------------
// GF(((2^2)^2)^2), "field B", values in [0,255]
// ---------------------------------------------------------------------------

inline uint8_t tower_mul(uint8_t a, uint8_t b, const TowerParams& p) {
    const uint8_t ah = (a >> 4) & 0xF, al = a & 0xF;
    const uint8_t bh = (b >> 4) & 0xF, bl = b & 0xF;
    const uint8_t hh = gf4_mul(ah, bh, p);
    const uint8_t ll = gf4_mul(al, bl, p);
    const uint8_t k = gf4_mul(static_cast<uint8_t>(ah ^ al), static_cast<uint8_t>(bh ^ bl), p);
    const uint8_t hi = static_cast<uint8_t>(k ^ ll);
    const uint8_t lo = static_cast<uint8_t>(gf4_mul_lambda(hh, p) ^ ll);
    return static_cast<uint8_t>((hi << 4) | lo);
}

// Inversion datapath: squarer, x lambda, one GF(2^4) multiplier to form the
// norm d = lambda*qH^2 + qL*(qH + qL), GF(2^4) inversion of d, and two final
// multipliers. composite_inv(0) == 0 falls out of the formulas.
struct CompositeInvTrace {
    uint8_t norm;       // d
    uint8_t norm_inv;   // d^-1
    uint8_t result;     // full inverse in field B
};

inline CompositeInvTrace composite_inv_trace(uint8_t x, const TowerParams& p) {
    const uint8_t qh = (x >> 4) & 0xF, ql = x & 0xF;
    const uint8_t d = static_cast<uint8_t>(gf4_mul_lambda(gf4_sq(qh, p), p) ^
                                           gf4_mul(ql, static_cast<uint8_t>(qh ^ ql), p));
    const uint8_t di = gf4_inv(d, p);
    const uint8_t oh = gf4_mul(qh, di, p);
    const uint8_t ol = gf4_mul(static_cast<uint8_t>(qh ^ ql), di, p);
    return {d, di, static_cast<uint8_t>((oh << 4) | ol)};
}

inline uint8_t composite_inv(uint8_t x, const TowerParams& p) {
    return composite_inv_trace(x, p).result;
}

// ---------------------------------------------------------------------------
// 8x8 matrices over GF(2)
// ---------------------------------------------------------------------------
//
// rows[0] produces output bit 7; bit k of a row mask selects input bit k.

struct BinaryMatrix8 {
    std::array<uint8_t, 8> rows{};

    static BinaryMatrix8 identity();
    // img[k] = image of the input basis byte (1 << k).
    static BinaryMatrix8 from_basis_images(const std::array<uint8_t, 8>& img);

    uint8_t apply(uint8_t q) const {
        uint8_t out = 0;
        for (int r = 0; r < 8; ++r)
            out = static_cast<uint8_t>((out << 1) | (std::popcount(static_cast<unsigned>(rows[r] & q)) & 1));
        return out;
    }

    std::array<uint8_t, 8> basis_images() const;
    BinaryMatrix8 transpose() const;
    std::optional<BinaryMatrix8> inverse() const;
    bool invertible() const { return inverse().has_value(); }
    BinaryMatrix8 operator*(const BinaryMatrix8& rhs) const;  // composition: (A*B)(q) = A(B(q))

    friend bool operator==(const BinaryMatrix8&, const BinaryMatrix8&) = default;
};

inline uint8_t matvec_gf2(const BinaryMatrix8& m, uint8_t q) { return m.apply(q); }

}  // namespace tfaes
