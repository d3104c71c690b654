#include "tfaes/gf_tower.hpp"

namespace tfaes {

namespace {

std::array<uint8_t, 256> build_inverse_table() {
    std::array<uint8_t, 256> inv{};
    inv[0] = 0;
    for (int a = 1; a < 256; ++a) {
        if (inv[a]) continue;
        for (int b = a; b < 256; ++b) {
            if (gf8_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b)) == 1) {
                inv[a] = static_cast<uint8_t>(b);
                inv[b] = static_cast<uint8_t>(a);
                break;
            }
        }
    }
    return inv;
}

}  // namespace

uint8_t gf8_inv(uint8_t a) {
    static const std::array<uint8_t, 256> kInv = build_inverse_table();
    return kInv[a];
}

bool irreducible_over_gf2e(uint8_t phi) {
    if (phi > 3) return false;
    for (uint8_t t = 0; t < 4; ++t)
        if (static_cast<uint8_t>(gf2_mul(t, t) ^ t ^ phi) == 0) return false;
    return true;
}

bool irreducible_over_gf4e(uint8_t lambda, uint8_t phi) {
    if (lambda > 15 || !irreducible_over_gf2e(phi)) return false;
    const TowerParams p{phi, lambda};
    for (uint8_t t = 0; t < 16; ++t)
        if (static_cast<uint8_t>(gf4_mul(t, t, p) ^ t ^ lambda) == 0) return false;
    return true;
}

bool TowerParams::valid() const {
    return irreducible_over_gf2e(phi) && irreducible_over_gf4e(lambda, phi);
}

BinaryMatrix8 BinaryMatrix8::identity() {
    BinaryMatrix8 m;
    for (int r = 0; r < 8; ++r) m.rows[r] = static_cast<uint8_t>(0x80u >> r);
    return m;
}

BinaryMatrix8 BinaryMatrix8::from_basis_images(const std::array<uint8_t, 8>& img) {
    BinaryMatrix8 m;
    for (int r = 0; r < 8; ++r) {
        uint8_t mask = 0;
        for (int k = 0; k < 8; ++k)
            if ((img[k] >> (7 - r)) & 1) mask |= static_cast<uint8_t>(1u << k);
        m.rows[r] = mask;
    }
    return m;
}

std::array<uint8_t, 8> BinaryMatrix8::basis_images() const {
    std::array<uint8_t, 8> img{};
    for (int k = 0; k < 8; ++k) img[k] = apply(static_cast<uint8_t>(1u << k));
    return img;
}

BinaryMatrix8 BinaryMatrix8::transpose() const {
    BinaryMatrix8 t;
    for (int r = 0; r < 8; ++r) {
        uint8_t mask = 0;
        for (int k = 0; k < 8; ++k)
            if ((rows[7 - k] >> r) & 1) mask |= static_cast<uint8_t>(1u << k);
        t.rows[r] = mask;
    }
    return t;
}

std::optional<BinaryMatrix8> BinaryMatrix8::inverse() const {
    // Gauss-Jordan on [M | I] packed into 16-bit rows, matrix part high.
    std::array<uint16_t, 8> aug{};
    for (int r = 0; r < 8; ++r)
        aug[r] = static_cast<uint16_t>((rows[r] << 8) | (0x80u >> r));

    for (int col = 7; col >= 0; --col) {
        const int pivot_target = 7 - col;
        int pivot = -1;
        for (int r = pivot_target; r < 8; ++r) {
            if ((aug[r] >> (8 + col)) & 1) { pivot = r; break; }
        }
        if (pivot < 0) return std::nullopt;  // singular
        std::swap(aug[pivot_target], aug[pivot]);
        for (int r = 0; r < 8; ++r) {
            if (r != pivot_target && ((aug[r] >> (8 + col)) & 1)) aug[r] ^= aug[pivot_target];
        }
    }

    BinaryMatrix8 inv;
    for (int r = 0; r < 8; ++r) inv.rows[r] = static_cast<uint8_t>(aug[r] & 0xFF);
    return inv;
}

BinaryMatrix8 BinaryMatrix8::operator*(const BinaryMatrix8& rhs) const {
    std::array<uint8_t, 8> img{};
    for (int k = 0; k < 8; ++k) img[k] = apply(rhs.apply(static_cast<uint8_t>(1u << k)));
    return from_basis_images(img);
}

}  // namespace tfaes
