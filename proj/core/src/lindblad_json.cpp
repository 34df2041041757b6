#include "qtherm/lindblad_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtherm/dynamics.hpp"
#include "qtherm/errors.hpp"

namespace qtherm {

namespace {

Complex parse_entry(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error("matrix entry must be a [re, im] pair of numbers");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::vector<LoadedTerm> load_lindblad_terms(std::istream& in) {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw Error("operator document must be a JSON array of terms");

    std::vector<LoadedTerm> out;
    out.reserve(doc.size());
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("matrix") || !item.contains("rate")) {
            throw Error("each term needs `matrix` and `rate` fields");
        }
        const auto& mat = item["matrix"];
        if (!mat.is_array() || mat.size() != 2 || !mat[0].is_array() || mat[0].size() != 2 ||
            !mat[1].is_array() || mat[1].size() != 2) {
            throw Error("`matrix` must be a 2x2 array of [re, im] pairs");
        }
        LoadedTerm loaded;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                loaded.term.op(r, c) = parse_entry(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
            }
        }

        const auto& rate = item["rate"];
        if (rate.is_number()) {
            const double g = rate.get<double>();
            loaded.term.rate = [g](double) { return g; };
            std::ostringstream label;
            label << "constant " << g;
            loaded.rate_label = label.str();
        } else if (rate.is_object()) {
            if (!rate.contains("type") || rate["type"] != "ohmic") {
                throw Error("rate object must have `type`: \"ohmic\"");
            }
            if (!rate.contains("s") || !rate["s"].is_number() || !rate.contains("omega_c") ||
                !rate["omega_c"].is_number()) {
                throw Error("ohmic rate needs numeric `s` and `omega_c`");
            }
            const OhmicParams p{rate["s"].get<double>(), rate["omega_c"].get<double>()};
            if (p.s < 0.0 || p.omega_c <= 0.0) {
                throw Error("ohmic rate requires s >= 0 and omega_c > 0");
            }
            loaded.term.rate = [p](double t) { return ohmic_rate(t, p); };
            std::ostringstream label;
            label << "ohmic s=" << p.s << " omega_c=" << p.omega_c;
            loaded.rate_label = label.str();
        } else {
            throw Error("`rate` must be a number or an ohmic descriptor object");
        }
        out.push_back(std::move(loaded));
    }
    return out;
}

std::vector<LoadedTerm> load_lindblad_terms_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open operator file: " + path);
    return load_lindblad_terms(in);
}

}  // namespace qtherm
