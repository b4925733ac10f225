#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylres/potential.hpp"

namespace cylres {

using Json = nlohmann::json;

/// Potential from JSON. Accepts a builtin name ("example10", "well_bump",
/// "zero"), an object {"builtin": name, ...parameters}, or an inline table
///   {"support": [a, b], "grid_n": N, "modes": [{"m": k, "re": [...], "im": [...]}],
///    "real": bool, "kind": "sampled" | "step"}.
/// Sampled modes carry N + 1 grid values, step modes N slab values.
CylinderPotential load_potential(const Json& spec);
CylinderPotential load_potential_file(const std::string& path);

/// Inline table of a potential whose modes all share one uniform grid.
Json potential_to_json(const CylinderPotential& pot);

std::vector<std::string> builtin_potentials();

/// One CSV field, quoted when it holds a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

/// Shortest round-trip text for a double; "nan" / "inf" / "-inf" otherwise.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::vector<std::string> header);
    void row(const std::vector<std::string>& fields);

private:
    std::ostream& os_;
    std::size_t columns_;
};

/// Splits RFC-4180 text into records; used to read results back.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace cylres
