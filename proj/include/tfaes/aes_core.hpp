#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tfaes/iso_search.hpp"

// AES-128 with two interchangeable SubBytes backends: the canonical LUT and
// the 3-stage composite-field S-box (map with delta, invert in field B, map
// back with delta_inv, then the affine layer). State is the standard 4x4
// column-major byte array, byte index = row + 4*column.

namespace tfaes {

using Block = std::array<uint8_t, 16>;
using RoundKeySchedule = std::array<Block, 11>;

RoundKeySchedule key_expand(std::span<const uint8_t> key);  // throws unless key is 16 bytes

uint8_t affine_transform(uint8_t x);      // y = M*x ^ 0x63
uint8_t inv_affine_transform(uint8_t y);  // x = M^-1 * (y ^ 0x63)
const BinaryMatrix8& affine_matrix();

uint8_t sbox_lut(uint8_t x);
uint8_t inv_sbox_lut(uint8_t y);

uint8_t sbox_composite(uint8_t x, const ParameterSet& ps);
uint8_t inv_sbox_composite(uint8_t y, const ParameterSet& ps);

// Stage intermediates of one composite S-box evaluation, for the leakage
// simulator. Emitting them never changes the output path.
struct SboxIntermediates {
    uint8_t mapped;      // delta(x)
    uint8_t norm;        // GF(2^4) norm d
    uint8_t norm_inv;    // d^-1
    uint8_t inv_tower;   // inverse in field B (pre-final value)
    uint8_t pre_affine;  // delta_inv(inv_tower)
    uint8_t output;      // affine(pre_affine)
};
SboxIntermediates sbox_composite_intermediates(uint8_t x, const ParameterSet& ps);

void shift_rows(Block& s);
void inv_shift_rows(Block& s);
void mix_columns(Block& s);
void inv_mix_columns(Block& s);

struct SboxBackend {
    enum class Kind { Lut, Composite } kind = Kind::Lut;
    const ParameterSet* set = nullptr;  // required for Composite
};

Block encrypt_block(const Block& pt, const RoundKeySchedule& rk, const SboxBackend& backend = {});
Block decrypt_block(const Block& ct, const RoundKeySchedule& rk, const SboxBackend& backend = {});

// ECB helpers for the CLI; input length must be a multiple of 16.
std::vector<uint8_t> encrypt_ecb(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                                 const SboxBackend& backend = {});
std::vector<uint8_t> decrypt_ecb(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                                 const SboxBackend& backend = {});

}  // namespace tfaes
