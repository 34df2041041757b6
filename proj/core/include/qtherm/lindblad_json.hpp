#pragma once

// JSON description of a Lindblad term set: an array of objects with a 2x2
// `matrix` of [re, im] pairs (row-major) and a `rate` that is either a
// constant number or {"type": "ohmic", "s": <real>, "omega_c": <real>}.

#include <iosfwd>
#include <string>
#include <vector>

#include "qtherm/bloch.hpp"

namespace qtherm {

struct LoadedTerm {
    LindbladTerm term;
    std::string rate_label;  // "constant 0.1" or "ohmic s=3.5 omega_c=1"
};

/// Throws nlohmann::json::parse_error on malformed JSON and qtherm::Error on
/// schema violations.
std::vector<LoadedTerm> load_lindblad_terms(std::istream& in);
std::vector<LoadedTerm> load_lindblad_terms_file(const std::string& path);

}  // namespace qtherm
