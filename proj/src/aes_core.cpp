#include "tfaes/aes_core.hpp"

#include <stdexcept>

namespace tfaes {

namespace {

// Affine layer rows: output bit i = x_i ^ x_{i+4} ^ x_{i+5} ^ x_{i+6} ^ x_{i+7} (mod 8).
BinaryMatrix8 build_affine_matrix() {
    BinaryMatrix8 m;
    for (int r = 0; r < 8; ++r) {
        const int i = 7 - r;
        uint8_t mask = 0;
        for (int off : {0, 4, 5, 6, 7}) mask |= static_cast<uint8_t>(1u << ((i + off) % 8));
        m.rows[r] = mask;
    }
    return m;
}

const BinaryMatrix8& inv_affine_matrix() {
    static const BinaryMatrix8 m = *affine_matrix().inverse();
    return m;
}

constexpr uint8_t kAffineConstant = 0x63;

struct SboxTables {
    std::array<uint8_t, 256> fwd{};
    std::array<uint8_t, 256> inv{};
};

SboxTables build_sbox_tables() {
    SboxTables t;
    for (int x = 0; x < 256; ++x) {
        const uint8_t y = affine_transform(gf8_inv(static_cast<uint8_t>(x)));
        t.fwd[x] = y;
        t.inv[y] = static_cast<uint8_t>(x);
    }
    return t;
}

const SboxTables& sbox_tables() {
    static const SboxTables t = build_sbox_tables();
    return t;
}

}  // namespace

const BinaryMatrix8& affine_matrix() {
    static const BinaryMatrix8 m = build_affine_matrix();
    return m;
}

uint8_t affine_transform(uint8_t x) {
    return static_cast<uint8_t>(affine_matrix().apply(x) ^ kAffineConstant);
}

uint8_t inv_affine_transform(uint8_t y) {
    return inv_affine_matrix().apply(static_cast<uint8_t>(y ^ kAffineConstant));
}

uint8_t sbox_lut(uint8_t x) { return sbox_tables().fwd[x]; }
uint8_t inv_sbox_lut(uint8_t y) { return sbox_tables().inv[y]; }

uint8_t sbox_composite(uint8_t x, const ParameterSet& ps) {
    const uint8_t mapped = ps.delta.apply(x);
    const uint8_t inv_b = composite_inv(mapped, ps.params);
    return affine_transform(ps.delta_inv.apply(inv_b));
}

uint8_t inv_sbox_composite(uint8_t y, const ParameterSet& ps) {
    const uint8_t mapped = ps.delta.apply(inv_affine_transform(y));
    const uint8_t inv_b = composite_inv(mapped, ps.params);
    return ps.delta_inv.apply(inv_b);
}

SboxIntermediates sbox_composite_intermediates(uint8_t x, const ParameterSet& ps) {
    SboxIntermediates out;
    out.mapped = ps.delta.apply(x);
    const CompositeInvTrace t = composite_inv_trace(out.mapped, ps.params);
    out.norm = t.norm;
    out.norm_inv = t.norm_inv;
    out.inv_tower = t.result;
    out.pre_affine = ps.delta_inv.apply(t.result);
    out.output = affine_transform(out.pre_affine);
    return out;
}

RoundKeySchedule key_expand(std::span<const uint8_t> key) {
    if (key.size() != 16) throw std::invalid_argument("key_expand: key must be 16 bytes");
    std::array<std::array<uint8_t, 4>, 44> w{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) w[i][j] = key[4 * i + j];

    uint8_t rcon = 0x01;
    for (int i = 4; i < 44; ++i) {
        std::array<uint8_t, 4> tmp = w[i - 1];
        if (i % 4 == 0) {
            tmp = {sbox_lut(tmp[1]), sbox_lut(tmp[2]), sbox_lut(tmp[3]), sbox_lut(tmp[0])};
            tmp[0] ^= rcon;
            rcon = gf8_mul(rcon, 0x02);
        }
        for (int j = 0; j < 4; ++j) w[i][j] = static_cast<uint8_t>(w[i - 4][j] ^ tmp[j]);
    }

    RoundKeySchedule rk{};
    for (int r = 0; r < 11; ++r)
        for (int c = 0; c < 4; ++c)
            for (int j = 0; j < 4; ++j) rk[r][4 * c + j] = w[4 * r + c][j];
    return rk;
}

void shift_rows(Block& s) {
    Block t = s;
    for (int r = 1; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s[r + 4 * c] = t[r + 4 * ((c + r) % 4)];
}

void inv_shift_rows(Block& s) {
    Block t = s;
    for (int r = 1; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s[r + 4 * ((c + r) % 4)] = t[r + 4 * c];
}

void mix_columns(Block& s) {
    for (int c = 0; c < 4; ++c) {
        const uint8_t a0 = s[4 * c], a1 = s[4 * c + 1], a2 = s[4 * c + 2], a3 = s[4 * c + 3];
        s[4 * c + 0] = static_cast<uint8_t>(gf8_mul(a0, 2) ^ gf8_mul(a1, 3) ^ a2 ^ a3);
        s[4 * c + 1] = static_cast<uint8_t>(a0 ^ gf8_mul(a1, 2) ^ gf8_mul(a2, 3) ^ a3);
        s[4 * c + 2] = static_cast<uint8_t>(a0 ^ a1 ^ gf8_mul(a2, 2) ^ gf8_mul(a3, 3));
        s[4 * c + 3] = static_cast<uint8_t>(gf8_mul(a0, 3) ^ a1 ^ a2 ^ gf8_mul(a3, 2));
    }
}

void inv_mix_columns(Block& s) {
    for (int c = 0; c < 4; ++c) {
        const uint8_t a0 = s[4 * c], a1 = s[4 * c + 1], a2 = s[4 * c + 2], a3 = s[4 * c + 3];
        s[4 * c + 0] = static_cast<uint8_t>(gf8_mul(a0, 0x0E) ^ gf8_mul(a1, 0x0B) ^
                                            gf8_mul(a2, 0x0D) ^ gf8_mul(a3, 0x09));
        s[4 * c + 1] = static_cast<uint8_t>(gf8_mul(a0, 0x09) ^ gf8_mul(a1, 0x0E) ^
                                            gf8_mul(a2, 0x0B) ^ gf8_mul(a3, 0x0D));
        s[4 * c + 2] = static_cast<uint8_t>(gf8_mul(a0, 0x0D) ^ gf8_mul(a1, 0x09) ^
                                            gf8_mul(a2, 0x0E) ^ gf8_mul(a3, 0x0B));
        s[4 * c + 3] = static_cast<uint8_t>(gf8_mul(a0, 0x0B) ^ gf8_mul(a1, 0x0D) ^
                                            gf8_mul(a2, 0x09) ^ gf8_mul(a3, 0x0E));
    }
}

namespace {

uint8_t backend_sbox(uint8_t x, const SboxBackend& b) {
    if (b.kind == SboxBackend::Kind::Lut) return sbox_lut(x);
    if (!b.set) throw std::invalid_argument("composite backend requires a parameter set");
    return sbox_composite(x, *b.set);
}

uint8_t backend_inv_sbox(uint8_t y, const SboxBackend& b) {
    if (b.kind == SboxBackend::Kind::Lut) return inv_sbox_lut(y);
    if (!b.set) throw std::invalid_argument("composite backend requires a parameter set");
    return inv_sbox_composite(y, *b.set);
}

void add_round_key(Block& s, const Block& rk) {
    for (int i = 0; i < 16; ++i) s[i] ^= rk[i];
}

}  // namespace

Block encrypt_block(const Block& pt, const RoundKeySchedule& rk, const SboxBackend& backend) {
    Block s = pt;
    add_round_key(s, rk[0]);
    for (int round = 1; round <= 9; ++round) {
        for (auto& b : s) b = backend_sbox(b, backend);
        shift_rows(s);
        mix_columns(s);
        add_round_key(s, rk[round]);
    }
    for (auto& b : s) b = backend_sbox(b, backend);
    shift_rows(s);
    add_round_key(s, rk[10]);
    return s;
}

Block decrypt_block(const Block& ct, const RoundKeySchedule& rk, const SboxBackend& backend) {
    Block s = ct;
    add_round_key(s, rk[10]);
    inv_shift_rows(s);
    for (auto& b : s) b = backend_inv_sbox(b, backend);
    for (int round = 9; round >= 1; --round) {
        add_round_key(s, rk[round]);
        inv_mix_columns(s);
        inv_shift_rows(s);
        for (auto& b : s) b = backend_inv_sbox(b, backend);
    }
    add_round_key(s, rk[0]);
    return s;
}

namespace {

std::vector<uint8_t> map_ecb(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                             const SboxBackend& backend, bool encrypt) {
    if (data.size() % 16 != 0)
        throw std::invalid_argument("ECB input must be a multiple of 16 bytes");
    std::vector<uint8_t> out(data.size());
    for (size_t off = 0; off < data.size(); off += 16) {
        Block blk;
        std::copy_n(data.begin() + off, 16, blk.begin());
        const Block res = encrypt ? encrypt_block(blk, rk, backend) : decrypt_block(blk, rk, backend);
        std::copy_n(res.begin(), 16, out.begin() + off);
    }
    return out;
}

}  // namespace

std::vector<uint8_t> encrypt_ecb(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                                 const SboxBackend& backend) {
    return map_ecb(data, rk, backend, true);
}

std::vector<uint8_t> decrypt_ecb(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                                 const SboxBackend& backend) {
    return map_ecb(data, rk, backend, false);
}

}  // namespace tfaes
