#pragma once
// JSON descriptor formats for closed real sets, index sets, submeasures and
// ideals, plus the JSONL value-stream helpers used by the CLI.

#include "statlim/ideals.hpp"
#include "statlim/index_sets.hpp"
#include "statlim/real_sets.hpp"
#include "statlim/sequences.hpp"
#include "statlim/submeasure.hpp"

#include <string>
#include <vector>

#include "json.hpp"

namespace statlim {

// {"parts": [["0","1"], ["2","2"]]} with rationals as "p/q" strings.
nlohmann::json to_json(const RClosedSet& s);
RClosedSet rset_from_json(const nlohmann::json& j);

// {"layers": [RClosedSet, ...]}
nlohmann::json to_json(const RFSigma& s);
RFSigma rfsigma_from_json(const nlohmann::json& j);

// Variant-tree schema, e.g. {"diff": [{"scaledOdd": 2}, {"squares": {}}]}.
nlohmann::json to_json(const IndexSet& s);
IndexSet index_set_from_json(const nlohmann::json& j);

// {"density": {}} | {"summable": {"weights": "harmonic"}} | {"counting": {}}
nlohmann::json to_json(const Submeasure& phi);
Submeasure submeasure_from_json(const nlohmann::json& j);

// {"fin":{}} | {"analyticP":{"phi":...}} | {"fsigma":{"phi":...}} |
// {"finTimesFin":{"columns":"dyadic"}}
nlohmann::json to_json(const IdealSpec& ideal);
IdealSpec ideal_from_json(const nlohmann::json& j);

// JSONL stream: a metadata header record, then {"n": i, "x": "p/q"} records.
void write_jsonl(std::ostream& os, const SeqGen& gen, uint64_t n);
// Returns the values (1-based dense) and the header metadata.
std::pair<std::vector<Rational>, nlohmann::json> read_jsonl(std::istream& is);

}  // namespace statlim
