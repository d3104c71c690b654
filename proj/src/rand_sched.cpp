#include "tfaes/rand_sched.hpp"

#include <bit>
#include <stdexcept>

namespace tfaes {

Lfsr16::Lfsr16(uint16_t seed) : state_(seed) {
    if (seed == 0) throw std::invalid_argument("Lfsr16: zero state is forbidden");
}

uint8_t Lfsr16::next_bit() {
    const uint8_t out = static_cast<uint8_t>(state_ & 1);
    const uint16_t fb = static_cast<uint16_t>(
        ((state_ >> 0) ^ (state_ >> 2) ^ (state_ >> 3) ^ (state_ >> 5)) & 1);
    state_ = static_cast<uint16_t>((state_ >> 1) | (fb << 15));
    return out;
}

uint32_t Lfsr16::next_bits(int k) {
    if (k < 1 || k > 32) throw std::invalid_argument("Lfsr16::next_bits: k out of range");
    uint32_t v = 0;
    for (int i = 0; i < k; ++i) v = (v << 1) | next_bit();
    return v;
}

namespace {

uint16_t nonzero_half(uint16_t half, uint16_t fallback) { return half ? half : fallback; }

int ceil_log2(size_t n) {
    int bits = 0;
    while ((size_t{1} << bits) < n) ++bits;
    return bits;
}

}  // namespace

RandomizationContext::RandomizationContext(uint32_t seed, std::vector<ParameterSet> cat, bool decoys)
    : main_lfsr(nonzero_half(static_cast<uint16_t>(seed >> 16), 0xACE1)),
      decoy_lfsr(nonzero_half(static_cast<uint16_t>(seed & 0xFFFF), 0xB5D1)),
      catalog(std::move(cat)),
      decoys_enabled(decoys) {
    if (catalog.size() < 2)
        throw std::invalid_argument("randomized mode needs a catalog of at least 2 sets");
    if (decoys_enabled && catalog.size() < 3)
        throw std::invalid_argument("decoy selection needs a catalog of at least 3 sets");
}

size_t select_param_set(RandomizationContext& ctx) {
    const size_t n = ctx.catalog.size();
    const int bits = ceil_log2(n);
    if (bits == 0) return 0;
    return ctx.main_lfsr.next_bits(bits) % n;
}

std::pair<size_t, size_t> select_decoys(RandomizationContext& ctx, size_t exclude) {
    const size_t n = ctx.catalog.size();
    if (n < 3) throw std::invalid_argument("select_decoys: catalog smaller than 3");
    const int bits = ceil_log2(n);
    auto draw = [&] { return static_cast<size_t>(ctx.decoy_lfsr.next_bits(bits)) % n; };
    size_t d1 = draw();
    while (d1 == exclude) d1 = draw();
    size_t d2 = draw();
    while (d2 == exclude || d2 == d1) d2 = draw();
    return {d1, d2};
}

std::vector<BlockSchedule> make_block_schedule(RandomizationContext& ctx, size_t n) {
    std::vector<BlockSchedule> sched(n);
    for (auto& s : sched) {
        s.set_index = select_param_set(ctx);
        if (ctx.decoys_enabled) {
            const auto [d1, d2] = select_decoys(ctx, s.set_index);
            s.decoy1 = d1;
            s.decoy2 = d2;
            s.has_decoys = true;
        }
    }
    return sched;
}

namespace {

std::vector<uint8_t> map_ecb_randomized(std::span<const uint8_t> data, const RoundKeySchedule& rk,
                                        RandomizationContext& ctx, bool encrypt) {
    if (data.size() % 16 != 0)
        throw std::invalid_argument("ECB input must be a multiple of 16 bytes");
    std::vector<uint8_t> out(data.size());
    for (size_t off = 0; off < data.size(); off += 16) {
        const size_t idx = select_param_set(ctx);
        const SboxBackend backend{SboxBackend::Kind::Composite, &ctx.catalog[idx]};
        Block blk;
        std::copy_n(data.begin() + off, 16, blk.begin());
        const Block res = encrypt ? encrypt_block(blk, rk, backend) : decrypt_block(blk, rk, backend);
        std::copy_n(res.begin(), 16, out.begin() + off);
    }
    return out;
}

}  // namespace

std::vector<uint8_t> encrypt_ecb_randomized(std::span<const uint8_t> data,
                                            const RoundKeySchedule& rk, RandomizationContext& ctx) {
    return map_ecb_randomized(data, rk, ctx, true);
}

std::vector<uint8_t> decrypt_ecb_randomized(std::span<const uint8_t> data,
                                            const RoundKeySchedule& rk, RandomizationContext& ctx) {
    return map_ecb_randomized(data, rk, ctx, false);
}

}  // namespace tfaes
