// State tensor JSON: flat or nested coefficient schema in, canonical flat out.
#pragma once

#include <fstream>
#include <json.hpp>
#include <string>

#include "segre.hpp"

namespace qsing {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Rat rat_from_json(const Json& j) {
    try {
        if (j.is_string()) return rat_from_string(j.get<std::string>());
        if (j.is_number_integer()) return Rat(j.get<long>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    throw SchemaError("coefficient component must be a rational string or integer");
}

inline GQ gq_from_json(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2)
            throw SchemaError("coefficient must be a [re, im] pair");
        return GQ(rat_from_json(j[0]), rat_from_json(j[1]));
    }
    // bare value: purely real
    return GQ(rat_from_json(j));
}

} // namespace detail

inline StateTensor state_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("coefficients"))
        throw SchemaError("state object needs a 'coefficients' field");
    const Json& c = j["coefficients"];
    if (!c.is_array()) throw SchemaError("'coefficients' must be an array");
    StateTensor st;
    if (c.size() == 27) {
        for (int p = 0; p < 27; ++p)
            st.h[std::size_t(p)] = detail::gq_from_json(c[std::size_t(p)]);
    } else if (c.size() == 3) {
        for (int i = 0; i < 3; ++i) {
            const Json& ci = c[std::size_t(i)];
            if (!ci.is_array() || ci.size() != 3)
                throw SchemaError("nested form must be 3x3x3");
            for (int jj = 0; jj < 3; ++jj) {
                const Json& cij = ci[std::size_t(jj)];
                if (!cij.is_array() || cij.size() != 3)
                    throw SchemaError("nested form must be 3x3x3");
                for (int k = 0; k < 3; ++k)
                    st.at(i, jj, k) = detail::gq_from_json(cij[std::size_t(k)]);
            }
        }
    } else {
        throw SchemaError("'coefficients' must hold 27 flat entries or a 3x3x3 nest");
    }
    try {
        st.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    return st;
}

// Canonical output: flat base-3 order, every entry an exact [re, im] pair.
inline OJson state_to_json(const StateTensor& st) {
    OJson coeffs = OJson::array();
    for (auto& c : st.h)
        coeffs.push_back({rat_to_string(c.re), rat_to_string(c.im)});
    OJson out;
    out["coefficients"] = std::move(coeffs);
    return out;
}

inline StateTensor read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open state file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
    return state_from_json(j);
}

} // namespace qsing
