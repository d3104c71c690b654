#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tfaes/aes_core.hpp"
#include "tfaes/iso_search.hpp"

// LFSR-driven per-block scheduling of parameter sets, plus selection of two
// decoy delta_inv matrices for the parallel final-stage multiplications.
// Encryptor and decryptor build identical contexts from a shared 32-bit seed,
// the way they share the cipher key.

namespace tfaes {

// 16-bit Fibonacci LFSR, taps x^16 + x^14 + x^13 + x^11 + 1 (maximal period
// 2^16 - 1). The all-zero state is absorbing and therefore rejected.
class Lfsr16 {
  public:
    explicit Lfsr16(uint16_t seed);

    uint8_t next_bit();
    // k successive output bits, MSB first; k in [1,32].
    uint32_t next_bits(int k);
    uint16_t state() const { return state_; }

  private:
    uint16_t state_;
};

struct RandomizationContext {
    // The 32-bit seed is split high/low into the main (set-choosing) and
    // decoy LFSR seeds; a zero half is remapped to a fixed nonzero constant
    // so every 32-bit seed is usable.
    RandomizationContext(uint32_t seed, std::vector<ParameterSet> catalog, bool decoys);

    Lfsr16 main_lfsr;
    Lfsr16 decoy_lfsr;
    std::vector<ParameterSet> catalog;
    bool decoys_enabled = false;
};

// Index of the next scheduled set: ceil(log2(N)) bits from the main LFSR,
// reduced mod N.
size_t select_param_set(RandomizationContext& ctx);

// Two distinct decoy indices, both different from `exclude`, drawn from the
// decoy LFSR with rejection resampling. Requires a catalog of at least 3.
std::pair<size_t, size_t> select_decoys(RandomizationContext& ctx, size_t exclude);

// Per-block schedule for n blocks, drawn in block order. Precomputing it
// keeps parallel consumers byte-identical to sequential ones.
struct BlockSchedule {
    size_t set_index = 0;
    size_t decoy1 = 0;
    size_t decoy2 = 0;
    bool has_decoys = false;
};
std::vector<BlockSchedule> make_block_schedule(RandomizationContext& ctx, size_t n);

// Randomized-backend ECB: one parameter set per 16-byte block. Ciphertexts
// are bit-identical to the standard LUT backend.
std::vector<uint8_t> encrypt_ecb_randomized(std::span<const uint8_t> data,
                                            const RoundKeySchedule& rk, RandomizationContext& ctx);
std::vector<uint8_t> decrypt_ecb_randomized(std::span<const uint8_t> data,
                                            const RoundKeySchedule& rk, RandomizationContext& ctx);

}  // namespace tfaes
