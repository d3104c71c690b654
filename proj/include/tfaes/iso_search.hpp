#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfaes/gf_tower.hpp"

// Enumeration, validation and cost ranking of parameter sets
// {phi, lambda, delta, delta_inv}, plus the JSON catalog they are stored in.

namespace tfaes {

struct ParameterSet {
    int id = -1;
    TowerParams params;
    BinaryMatrix8 delta;      // field A -> field B
    BinaryMatrix8 delta_inv;  // field B -> field A
    int gate_cost = 0;
    int root_index = -1;      // search metadata; -1 when loaded from a catalog
};

// The constants term candidates, found by brute-force root checking.
std::vector<uint8_t> phi_candidates();
std::vector<uint8_t> lambda_candidates(uint8_t phi);

// True iff the brute-forced lambda set equals the closed-form interval [8,15].
bool lambda_set_matches_interval(uint8_t phi);

// One ParameterSet per root of m(x) in field B: delta maps the A-basis
// {1, x, ..., x^7} to {1, beta, ..., beta^7}. Exactly 8 per valid (phi, lambda).
std::vector<ParameterSet> find_isomorphisms(const TowerParams& p);

// All candidates over every valid (phi, lambda), ids assigned in
// (phi, lambda, root index) order. Every returned set passes
// verify_isomorphism. The parallel variant partitions by (phi, lambda).
std::vector<ParameterSet> search_all_parameter_sets();
std::vector<ParameterSet> search_all_parameter_sets_serial();

// Full check: delta is linear, bijective, fixes 1, and carries gf8_mul to
// tower_mul on all 256 x 256 pairs; delta_inv really inverts delta.
bool verify_isomorphism(const ParameterSet& ps);

// XOR-count proxy: sum over all rows of delta and delta_inv of popcount-1.
int gate_cost(const BinaryMatrix8& delta, const BinaryMatrix8& delta_inv);

// The n cheapest sets; ties broken by (phi, lambda, root index) ascending.
// Returned sets are re-numbered 0..n-1. Throws if n exceeds the input.
std::vector<ParameterSet> select_low_cost(std::vector<ParameterSet> all, size_t n);

// |GL(8, GF(2))| = prod_{i=0}^{7} (2^8 - 2^i), exact.
uint64_t linear_map_count();

// ---------------------------------------------------------------------------
// Published reference data
// ---------------------------------------------------------------------------

// The canonical mapping pair for phi = {10}, lambda = {1100}.
const BinaryMatrix8& canonical_delta();
const BinaryMatrix8& canonical_delta_inv();
TowerParams canonical_params();
ParameterSet canonical_parameter_set();

// Printed example sets given as decimal byte lists of unknown orientation.
struct PrintedSet {
    uint8_t phi;
    uint8_t lambda;
    std::array<uint8_t, 8> delta_bytes;
    std::array<uint8_t, 8> delta_inv_bytes;
};
const std::vector<PrintedSet>& printed_example_sets();

enum class Orientation { Columns, Rows, Neither };

struct PaperSetVerdict {
    PrintedSet set;
    bool product_identity_as_columns = false;
    bool product_identity_as_rows = false;
    Orientation validates_as = Orientation::Neither;
};

// Tries the column interpretation (MSB = top row) first, then the row
// interpretation; never alters the printed values.
std::vector<PaperSetVerdict> check_paper_sets();
std::string format_paper_set_report(const std::vector<PaperSetVerdict>&);

// ---------------------------------------------------------------------------
// Catalog file: one JSON record per set, sorted by id. delta / delta_inv are
// stored as 8 hex column bytes (MSB = top row), leftmost column first.
// ---------------------------------------------------------------------------

std::string catalog_to_json(const std::vector<ParameterSet>& sets);
std::vector<ParameterSet> catalog_from_json(const std::string& text);
void save_catalog(const std::vector<ParameterSet>& sets, const std::string& path);
std::vector<ParameterSet> load_catalog(const std::string& path);

}  // namespace tfaes
