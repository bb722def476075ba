// Copyright 2026 The berklab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BERK_IO_HPP
#define BERK_IO_HPP

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "berk/baryloc.hpp"

namespace berk {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Exact rationals are the wire truth; decimals are derived, never parsed.
// Every object is strict: unknown keys are rejected, numbers travel as
// strings so nothing is rounded on the way in or out.
// ---------------------------------------------------------------------------

namespace detail {

inline void expect_object(const Json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigInvalid(what + " must be a JSON object");
}

inline void check_fields(const Json& j, const std::string& what,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
    expect_object(j, what);
    for (const char* key : required)
        if (!j.contains(key))
            throw ConfigInvalid(what + " is missing the field '" + key + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : required) known = known || it.key() == key;
        for (const char* key : optional) known = known || it.key() == key;
        if (!known) throw ConfigInvalid(what + " has an unknown field '" + it.key() + "'");
    }
}

inline std::string string_field(const Json& j, const std::string& what, const char* key) {
    if (!j.at(key).is_string())
        throw ConfigInvalid(what + " field '" + key + "' must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Contexts and field elements.
// ---------------------------------------------------------------------------

inline Json context_to_json(const ContextPtr& ctx) {
    return Json{{"p", ctx->p.str()}, {"e", ctx->e}};
}

inline ContextPtr context_from_json(const Json& j) {
    detail::check_fields(j, "context", {"p", "e"});
    Int p;
    try {
        p = Int(detail::string_field(j, "context", "p"));
    } catch (const std::exception&) {
        throw ConfigInvalid("context field 'p' is not an integer literal");
    }
    if (!j.at("e").is_number_integer())
        throw ConfigInvalid("context field 'e' must be an integer");
    return make_context(p, j.at("e").get<int>());
}

inline std::string point_to_string(const TreePoint& P) {
    return format_val(P.center) + " @ " + format_rational(P.t);
}

// Accepts "<center> @ <t>"; the level may be "inf" only where a caller
// explicitly tolerates classical points, which this library's tree types
// do not represent.
inline TreePoint point_from_string(const ContextPtr& ctx, const std::string& text) {
    const auto at = text.rfind('@');
    if (at == std::string::npos)
        throw ConfigInvalid("point literal '" + text + "' is missing '@'");
    std::string tpart = text.substr(at + 1);
    std::string trimmed;
    for (char c : tpart)
        if (!isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed == "inf" || trimmed == "infinity")
        throw TypeISupport("point literal '" + text + "' names a classical point");
    return TreePoint{parse_val(ctx, text.substr(0, at)), parse_rational(trimmed)};
}

// ---------------------------------------------------------------------------
// Lifts.
// ---------------------------------------------------------------------------

inline Json lift_to_json(const Lift& L) {
    Json f = Json::array(), g = Json::array();
    for (const auto& c : L.F) f.push_back(format_val(c));
    for (const auto& c : L.G) g.push_back(format_val(c));
    return Json{{"context", context_to_json(L.ctx)},
                {"degree", L.d},
                {"F", std::move(f)},
                {"G", std::move(g)}};
}

inline Lift lift_from_json(const Json& j) {
    detail::check_fields(j, "map", {"context", "degree", "F", "G"});
    ContextPtr ctx = context_from_json(j.at("context"));
    if (!j.at("degree").is_number_integer())
        throw ConfigInvalid("map field 'degree' must be an integer");
    const int d = j.at("degree").get<int>();
    auto coeffs = [&](const char* key) {
        const Json& arr = j.at(key);
        if (!arr.is_array())
            throw ConfigInvalid(std::string("map field '") + key + "' must be an array");
        std::vector<ValElement> out;
        for (const auto& item : arr) {
            if (!item.is_string())
                throw ConfigInvalid(std::string("map '") + key +
                                    "' coefficients must be strings");
            out.push_back(parse_val(ctx, item.get<std::string>()));
        }
        return out;
    };
    return make_lift(ctx, coeffs("F"), coeffs("G"), d);
}

// ---------------------------------------------------------------------------
// Measures, graphs, loci.
// ---------------------------------------------------------------------------

inline Json measure_to_json(const ContextPtr& ctx, const TreeMeasure& mu) {
    Json atoms = Json::array();
    for (const auto& wp : mu)
        atoms.push_back(Json{{"point", point_to_string(wp.point)},
                             {"mass", format_rational(wp.mass)}});
    return Json{{"context", context_to_json(ctx)}, {"atoms", std::move(atoms)}};
}

inline std::pair<ContextPtr, TreeMeasure> measure_from_json(const Json& j) {
    detail::check_fields(j, "measure", {"context", "atoms"});
    ContextPtr ctx = context_from_json(j.at("context"));
    if (!j.at("atoms").is_array()) throw ConfigInvalid("measure 'atoms' must be an array");
    TreeMeasure mu;
    for (const auto& item : j.at("atoms")) {
        detail::check_fields(item, "measure atom", {"point", "mass"});
        mu.push_back(WeightedPoint{
            point_from_string(ctx, detail::string_field(item, "atom", "point")),
            parse_rational(detail::string_field(item, "atom", "mass"))});
    }
    return {std::move(ctx), std::move(mu)};
}

inline Json graph_to_json(const ContextPtr& ctx, const SpanTree& T) {
    Json pts = Json::array();
    for (int i = 0; i < T.size(); ++i) pts.push_back(point_to_string(T.point(i)));
    return Json{{"context", context_to_json(ctx)}, {"points", std::move(pts)}};
}

inline std::pair<ContextPtr, SpanTree> graph_from_json(const Json& j) {
    detail::check_fields(j, "graph", {"context", "points"});
    ContextPtr ctx = context_from_json(j.at("context"));
    if (!j.at("points").is_array()) throw ConfigInvalid("graph 'points' must be an array");
    std::vector<TreePoint> pts;
    for (const auto& item : j.at("points")) {
        if (!item.is_string()) throw ConfigInvalid("graph points must be strings");
        pts.push_back(point_from_string(ctx, item.get<std::string>()));
    }
    if (pts.empty()) throw ConfigInvalid("graph has no points");
    return {std::move(ctx), SpanTree::span(pts)};
}

inline Json locus_to_json(const SegmentLocus& L) {
    Json eps = Json::array();
    for (const auto& P : L.endpoints) eps.push_back(point_to_string(P));
    return Json{{"kind", L.kind == LocusKind::Point ? "point" : "segment"},
                {"endpoints", std::move(eps)}};
}

inline SegmentLocus locus_from_json(const ContextPtr& ctx, const Json& j) {
    detail::check_fields(j, "locus", {"kind", "endpoints"});
    const std::string kind = detail::string_field(j, "locus", "kind");
    if (!j.at("endpoints").is_array())
        throw ConfigInvalid("locus 'endpoints' must be an array");
    std::vector<TreePoint> eps;
    for (const auto& item : j.at("endpoints")) {
        if (!item.is_string()) throw ConfigInvalid("locus endpoints must be strings");
        eps.push_back(point_from_string(ctx, item.get<std::string>()));
    }
    if (kind == "point") {
        if (eps.size() != 1) throw ConfigInvalid("a point locus needs one endpoint");
        return SegmentLocus::point(eps[0]);
    }
    if (kind == "segment") {
        if (eps.size() != 2) throw ConfigInvalid("a segment locus needs two endpoints");
        return SegmentLocus::segment(eps[0], eps[1]);
    }
    throw ConfigInvalid("locus kind must be 'point' or 'segment'");
}

// Comma-separated endpoint list, as accepted on the command line:
// one point is a point locus, two make a segment.
inline SegmentLocus locus_from_spec(const ContextPtr& ctx, const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() == 1) return SegmentLocus::point(point_from_string(ctx, parts[0]));
    if (parts.size() == 2)
        return SegmentLocus::segment(point_from_string(ctx, parts[0]),
                                     point_from_string(ctx, parts[1]));
    throw ConfigInvalid("locus literal must have one or two points");
}

// ---------------------------------------------------------------------------
// Report rows and CSV export.  Exact strings come first, decimal columns
// are display-only renderings of the same values.
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline std::string csv_escape(const std::string& cell) {
    bool needs = cell.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline void write_csv(const CsvTable& table, std::ostream& out) {
    for (size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << csv_escape(table.columns[i]);
    out << "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw IOError("csv row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
        out << "\n";
    }
}

inline void export_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open '" + path + "' for writing");
    write_csv(table, out);
    if (!out) throw IOError("failed while writing '" + path + "'");
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigInvalid("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline void save_json(const Json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
    if (!out) throw IOError("failed while writing '" + path + "'");
}

}  // namespace berk

#endif  // BERK_IO_HPP
