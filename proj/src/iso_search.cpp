#include "tfaes/iso_search.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tfaes {

std::vector<uint8_t> phi_candidates() {
    std::vector<uint8_t> out;
    for (uint8_t phi = 0; phi < 4; ++phi)
        if (irreducible_over_gf2e(phi)) out.push_back(phi);
    return out;
}

std::vector<uint8_t> lambda_candidates(uint8_t phi) {
    std::vector<uint8_t> out;
    for (uint8_t lambda = 0; lambda < 16; ++lambda)
        if (irreducible_over_gf4e(lambda, phi)) out.push_back(lambda);
    return out;
}

bool lambda_set_matches_interval(uint8_t phi) {
    const auto set = lambda_candidates(phi);
    if (set.size() != 8) return false;
    for (int i = 0; i < 8; ++i)
        if (set[i] != 8 + i) return false;
    return true;
}

namespace {

// m(x) evaluated at beta with tower arithmetic; the GF(2) coefficients of
// m(x) = x^8 + x^4 + x^3 + x + 1 embed as the tower identity.
uint8_t eval_m_at(uint8_t beta, const TowerParams& p) {
    uint8_t pw = 1;  // beta^0
    uint8_t acc = 0;
    for (int deg = 0; deg <= 8; ++deg) {
        if ((kAesModulus >> deg) & 1) acc ^= pw;
        pw = tower_mul(pw, beta, p);
    }
    return acc;
}

ParameterSet build_set_from_root(uint8_t beta, const TowerParams& p, int root_index) {
    std::array<uint8_t, 8> img{};
    uint8_t pw = 1;
    for (int k = 0; k < 8; ++k) {
        img[k] = pw;  // image of x^k
        pw = tower_mul(pw, beta, p);
    }
    ParameterSet ps;
    ps.params = p;
    ps.delta = BinaryMatrix8::from_basis_images(img);
    const auto inv = ps.delta.inverse();
    if (!inv) throw std::logic_error("root-generated delta must be invertible");
    ps.delta_inv = *inv;
    ps.gate_cost = gate_cost(ps.delta, ps.delta_inv);
    ps.root_index = root_index;
    return ps;
}

}  // namespace

std::vector<ParameterSet> find_isomorphisms(const TowerParams& p) {
    if (!p.valid()) throw std::invalid_argument("find_isomorphisms: invalid tower parameters");
    std::vector<ParameterSet> out;
    int root_index = 0;
    for (int beta = 1; beta < 256; ++beta) {
        if (eval_m_at(static_cast<uint8_t>(beta), p) == 0)
            out.push_back(build_set_from_root(static_cast<uint8_t>(beta), p, root_index++));
    }
    return out;
}

namespace {

std::vector<std::pair<uint8_t, uint8_t>> all_pairs() {
    std::vector<std::pair<uint8_t, uint8_t>> pairs;
    for (uint8_t phi : phi_candidates())
        for (uint8_t lambda : lambda_candidates(phi)) pairs.emplace_back(phi, lambda);
    return pairs;
}

std::vector<ParameterSet> assemble(std::vector<std::vector<ParameterSet>>& per_pair) {
    std::vector<ParameterSet> all;
    for (auto& chunk : per_pair)
        for (auto& ps : chunk) {
            ps.id = static_cast<int>(all.size());
            all.push_back(ps);
        }
    for (const auto& ps : all)
        if (!verify_isomorphism(ps)) throw std::logic_error("enumerated set failed verification");
    return all;
}

}  // namespace

std::vector<ParameterSet> search_all_parameter_sets_serial() {
    const auto pairs = all_pairs();
    std::vector<std::vector<ParameterSet>> per_pair(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i)
        per_pair[i] = find_isomorphisms({pairs[i].first, pairs[i].second});
    return assemble(per_pair);
}

std::vector<ParameterSet> search_all_parameter_sets() {
    const auto pairs = all_pairs();
    std::vector<std::vector<ParameterSet>> per_pair(pairs.size());
    const long n = static_cast<long>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
        per_pair[i] = find_isomorphisms({pairs[i].first, pairs[i].second});
    return assemble(per_pair);
}

bool verify_isomorphism(const ParameterSet& ps) {
    const auto& d = ps.delta;
    // bijective and delta_inv consistent
    if (!(ps.delta_inv * d == BinaryMatrix8::identity())) return false;
    if (!(d * ps.delta_inv == BinaryMatrix8::identity())) return false;
    if (d.apply(0x01) != 0x01) return false;
    // multiplicative: delta(a*b) = delta(a) . delta(b), all 256 x 256 pairs
    std::array<uint8_t, 256> dmap{};
    for (int a = 0; a < 256; ++a) dmap[a] = d.apply(static_cast<uint8_t>(a));
    for (int a = 0; a < 256; ++a) {
        for (int b = a; b < 256; ++b) {
            const uint8_t lhs = dmap[gf8_mul(static_cast<uint8_t>(a), static_cast<uint8_t>(b))];
            const uint8_t rhs = tower_mul(dmap[a], dmap[b], ps.params);
            if (lhs != rhs) return false;
        }
    }
    return true;
}

int gate_cost(const BinaryMatrix8& delta, const BinaryMatrix8& delta_inv) {
    int cost = 0;
    for (int r = 0; r < 8; ++r) {
        cost += std::max(std::popcount(static_cast<unsigned>(delta.rows[r])) - 1, 0);
        cost += std::max(std::popcount(static_cast<unsigned>(delta_inv.rows[r])) - 1, 0);
    }
    return cost;
}

std::vector<ParameterSet> select_low_cost(std::vector<ParameterSet> all, size_t n) {
    if (n > all.size()) throw std::invalid_argument("select_low_cost: n exceeds candidate count");
    std::stable_sort(all.begin(), all.end(), [](const ParameterSet& a, const ParameterSet& b) {
        const auto ka = std::tuple(a.gate_cost, a.params.phi, a.params.lambda, a.root_index);
        const auto kb = std::tuple(b.gate_cost, b.params.phi, b.params.lambda, b.root_index);
        return ka < kb;
    });
    all.resize(n);
    for (size_t i = 0; i < n; ++i) all[i].id = static_cast<int>(i);
    return all;
}

uint64_t linear_map_count() {
    uint64_t prod = 1;
    for (int i = 0; i < 8; ++i) prod *= 256u - (1u << i);
    return prod;
}

// ---------------------------------------------------------------------------

const BinaryMatrix8& canonical_delta() {
    static const BinaryMatrix8 m{{0xA0, 0xDE, 0xAC, 0xAE, 0xC6, 0x9E, 0x52, 0x43}};
    return m;
}

const BinaryMatrix8& canonical_delta_inv() {
    static const BinaryMatrix8 m{{0xE2, 0x44, 0x62, 0x76, 0x3E, 0x9E, 0x30, 0x75}};
    return m;
}

TowerParams canonical_params() { return {2, 12}; }

ParameterSet canonical_parameter_set() {
    ParameterSet ps;
    ps.id = 0;
    ps.params = canonical_params();
    ps.delta = canonical_delta();
    ps.delta_inv = canonical_delta_inv();
    ps.gate_cost = gate_cost(ps.delta, ps.delta_inv);
    return ps;
}

const std::vector<PrintedSet>& printed_example_sets() {
    static const std::vector<PrintedSet> kSets = {
        {2, 15, {160, 126, 114, 162, 182, 84, 16, 217}, {46, 28, 174, 2, 122, 26, 144, 75}},
        {3, 12, {160, 222, 172, 174, 202, 238, 44, 227}, {102, 212, 230, 162, 10, 234, 176, 233}},
        {3, 10, {160, 126, 172, 2, 20, 132, 130, 99}, {190, 132, 62, 106, 98, 2, 112, 141}},
    };
    return kSets;
}

namespace {

BinaryMatrix8 matrix_from_printed(const std::array<uint8_t, 8>& bytes, Orientation o) {
    if (o == Orientation::Rows) return BinaryMatrix8{{bytes[0], bytes[1], bytes[2], bytes[3],
                                                      bytes[4], bytes[5], bytes[6], bytes[7]}};
    // Columns, leftmost = image of input bit 7, MSB = top row.
    std::array<uint8_t, 8> img{};
    for (int j = 0; j < 8; ++j) img[7 - j] = bytes[j];
    return BinaryMatrix8::from_basis_images(img);
}

bool validates(const PrintedSet& s, Orientation o, bool* product_ok) {
    ParameterSet ps;
    ps.params = {s.phi, s.lambda};
    ps.delta = matrix_from_printed(s.delta_bytes, o);
    ps.delta_inv = matrix_from_printed(s.delta_inv_bytes, o);
    const bool prod = ps.delta * ps.delta_inv == BinaryMatrix8::identity() &&
                      ps.delta_inv * ps.delta == BinaryMatrix8::identity();
    if (product_ok) *product_ok = prod;
    if (!ps.params.valid()) return false;
    return prod && verify_isomorphism(ps);
}

}  // namespace

std::vector<PaperSetVerdict> check_paper_sets() {
    std::vector<PaperSetVerdict> out;
    for (const auto& s : printed_example_sets()) {
        PaperSetVerdict v;
        v.set = s;
        const bool cols_ok = validates(s, Orientation::Columns, &v.product_identity_as_columns);
        bool rows_ok = false;
        if (!cols_ok) rows_ok = validates(s, Orientation::Rows, &v.product_identity_as_rows);
        v.validates_as = cols_ok ? Orientation::Columns
                                 : (rows_ok ? Orientation::Rows : Orientation::Neither);
        out.push_back(v);
    }
    return out;
}

std::string format_paper_set_report(const std::vector<PaperSetVerdict>& verdicts) {
    std::ostringstream os;
    os << "printed parameter-set check (columns interpretation first, then rows)\n";
    for (size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        os << "set " << (i + 1) << " (phi=" << int(v.set.phi) << ", lambda=" << int(v.set.lambda)
           << "): ";
        switch (v.validates_as) {
            case Orientation::Columns: os << "VALID as column lists"; break;
            case Orientation::Rows: os << "VALID as row lists"; break;
            case Orientation::Neither:
                os << "NOT a field isomorphism under either orientation"
                   << " (delta*delta_inv == I: columns=" << (v.product_identity_as_columns ? "yes" : "no")
                   << ", rows=" << (v.product_identity_as_rows ? "yes" : "no") << ")";
                break;
        }
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::string byte_to_hex(uint8_t b) {
    static const char* kHex = "0123456789abcdef";
    return {kHex[b >> 4], kHex[b & 0xF]};
}

uint8_t hex_to_byte(const std::string& s) {
    if (s.size() != 2) throw std::invalid_argument("catalog: bad hex byte");
    return static_cast<uint8_t>(std::stoul(s, nullptr, 16));
}

nlohmann::ordered_json matrix_to_json(const BinaryMatrix8& m) {
    const auto img = m.basis_images();
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (int j = 7; j >= 0; --j) cols.push_back(byte_to_hex(img[j]));
    return cols;
}

BinaryMatrix8 matrix_from_json(const nlohmann::ordered_json& cols) {
    if (!cols.is_array() || cols.size() != 8) throw std::invalid_argument("catalog: bad matrix");
    std::array<uint8_t, 8> img{};
    for (int j = 0; j < 8; ++j) img[7 - j] = hex_to_byte(cols[j].get<std::string>());
    return BinaryMatrix8::from_basis_images(img);
}

}  // namespace

std::string catalog_to_json(const std::vector<ParameterSet>& sets) {
    nlohmann::ordered_json root;
    root["sets"] = nlohmann::ordered_json::array();
    for (const auto& ps : sets) {
        nlohmann::ordered_json rec;
        rec["id"] = ps.id;
        rec["phi"] = ps.params.phi;
        rec["lambda"] = ps.params.lambda;
        rec["delta"] = matrix_to_json(ps.delta);
        rec["delta_inv"] = matrix_to_json(ps.delta_inv);
        rec["gate_cost"] = ps.gate_cost;
        root["sets"].push_back(rec);
    }
    return root.dump(2) + "\n";
}

std::vector<ParameterSet> catalog_from_json(const std::string& text) {
    const auto root = nlohmann::ordered_json::parse(text);
    std::vector<ParameterSet> sets;
    for (const auto& rec : root.at("sets")) {
        ParameterSet ps;
        ps.id = rec.at("id").get<int>();
        ps.params.phi = rec.at("phi").get<uint8_t>();
        ps.params.lambda = rec.at("lambda").get<uint8_t>();
        ps.delta = matrix_from_json(rec.at("delta"));
        ps.delta_inv = matrix_from_json(rec.at("delta_inv"));
        ps.gate_cost = rec.at("gate_cost").get<int>();
        sets.push_back(ps);
    }
    std::sort(sets.begin(), sets.end(),
              [](const ParameterSet& a, const ParameterSet& b) { return a.id < b.id; });
    return sets;
}

void save_catalog(const std::vector<ParameterSet>& sets, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << catalog_to_json(sets);
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::vector<ParameterSet> load_catalog(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open catalog: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return catalog_from_json(ss.str());
}

}  // namespace tfaes
