#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "confal/classifier.hpp"
#include "confal/derivations.hpp"

namespace confal {

using json = nlohmann::json;

namespace doc_detail {

inline MultiPoly parse_poly_at(const std::string& text, const std::string& where)
{
    try {
        return parse_poly(text);
    } catch (const SyntaxError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline std::optional<int> parse_index_or_star(const std::string& s, const std::string& where)
{
    if (s == "*")
        return std::nullopt;
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": bad index '" + s + "'");
    }
}

// "i,j" with optional "*" wildcards
inline std::pair<std::optional<int>, std::optional<int>> parse_pair_key(const std::string& key,
                                                                        const std::string& where)
{
    size_t comma = key.find(',');
    if (comma == std::string::npos)
        throw ParseError(where + ": key '" + key + "' is not of the form i,j");
    return {parse_index_or_star(key.substr(0, comma), where),
            parse_index_or_star(key.substr(comma + 1), where)};
}

} // namespace doc_detail

// Algebra documents: { "algebra": { "name": ..., "grading_offsets": [0],
// "entries": { "i,j" | "i,*" | "*,j" | "*,*": "poly" | {"offset":o,"poly":s}
// | [ ... ] } } }. More specific patterns shadow less specific ones; the
// emitted basis index is i + j + offset.
inline GradedConformalAlgebra algebra_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("algebra: expected an object");
    std::string name = j.value("name", std::string("user"));
    std::set<int> offsets;
    if (j.contains("grading_offsets")) {
        for (const auto& o : j.at("grading_offsets"))
            offsets.insert(o.get<int>());
    } else {
        offsets = {0};
    }
    if (!j.contains("entries") || !j.at("entries").is_object())
        throw ValidationError("algebra: missing entries object");

    struct Rule {
        std::optional<int> pi, pj;
        int specificity;
        std::vector<std::pair<int, MultiPoly>> emissions; // offset, poly
    };
    std::vector<Rule> rules;
    for (const auto& [key, val] : j.at("entries").items()) {
        std::string where = "algebra entry '" + key + "'";
        auto [pi, pj] = doc_detail::parse_pair_key(key, where);
        Rule rule;
        rule.pi = pi;
        rule.pj = pj;
        rule.specificity = (pi ? 2 : 0) + (pj ? 1 : 0);
        auto add_emission = [&](const json& item) {
            int offset = 0;
            std::string poly_text;
            if (item.is_string()) {
                poly_text = item.get<std::string>();
            } else if (item.is_object()) {
                offset = item.value("offset", 0);
                poly_text = item.at("poly").get<std::string>();
            } else {
                throw ValidationError(where + ": emission must be a string or an object");
            }
            if (!offsets.count(offset))
                throw ValidationError(where + ": offset " + std::to_string(offset) +
                                      " is not in grading_offsets");
            rule.emissions.emplace_back(offset, doc_detail::parse_poly_at(poly_text, where));
        };
        if (val.is_array())
            for (const auto& item : val)
                add_emission(item);
        else
            add_emission(val);
        rules.push_back(std::move(rule));
    }

    BracketRule bracket_rule = [rules](int i, int jj) {
        const Rule* best = nullptr;
        for (const auto& r : rules) {
            if (r.pi && *r.pi != i)
                continue;
            if (r.pj && *r.pj != jj)
                continue;
            if (!best || r.specificity > best->specificity)
                best = &r;
        }
        std::vector<StructureTerm> out;
        if (best)
            for (const auto& [offset, poly] : best->emissions)
                out.push_back({i + jj + offset, poly});
        return out;
    };
    return GradedConformalAlgebra(name, bracket_rule, offsets);
}

// Module documents: { "module": { "window": [lo,hi], "rank_one": false,
// "entries": { "i,j": "poly" } } }. A graded table must cover exactly the
// admissible pairs of its window; a rank-one table lists "i,0" over a
// contiguous algebra span.
inline GradedConformalModule module_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("module: expected an object");
    bool rank_one = j.value("rank_one", false);
    if (!j.contains("entries") || !j.at("entries").is_object())
        throw ValidationError("module: missing entries object");

    std::map<std::pair<int, int>, MultiPoly> table;
    for (const auto& [key, val] : j.at("entries").items()) {
        std::string where = "module entry '" + key + "'";
        auto [pi, pj] = doc_detail::parse_pair_key(key, where);
        if (!pi || !pj)
            throw ValidationError(where + ": wildcards are not allowed in module tables");
        if (!val.is_string())
            throw ValidationError(where + ": expected a polynomial string");
        table[{*pi, *pj}] = doc_detail::parse_poly_at(val.get<std::string>(), where);
    }
    if (table.empty())
        throw ValidationError("module: empty table");

    if (rank_one) {
        int lo = table.begin()->first.first, hi = table.rbegin()->first.first;
        for (const auto& [key, poly] : table)
            if (key.second != 0)
                throw ValidationError("module: rank-one entries must have module index 0");
        for (int i = lo; i <= hi; ++i)
            if (!table.count({i, 0}))
                throw ValidationError("module: rank-one table has a gap at algebra index " +
                                      std::to_string(i));
        return GradedConformalModule::rank_one(
            [table, lo, hi](int i, int) {
                auto it = table.find({i, 0});
                if (it == table.end())
                    throw WindowExceeded("module: algebra index " + std::to_string(i) +
                                         " outside the loaded span [" + std::to_string(lo) + "," +
                                         std::to_string(hi) + "]");
                return it->second;
            },
            "document");
    }

    if (!j.contains("window") || !j.at("window").is_array() || j.at("window").size() != 2)
        throw ValidationError("module: graded tables need \"window\": [lo, hi]");
    IndexWindow w{j.at("window")[0].get<int>(), j.at("window")[1].get<int>()};
    if (w.empty())
        throw ValidationError("module: empty window");
    size_t expected = 0;
    for (int jj = w.lo; jj <= w.hi; ++jj)
        for (int t = w.lo; t <= w.hi; ++t) {
            ++expected;
            if (!table.count({t - jj, jj}))
                throw ValidationError("module: missing entry " + std::to_string(t - jj) + "," +
                                      std::to_string(jj));
        }
    if (table.size() != expected)
        throw ValidationError("module: table has entries outside the window");
    return GradedConformalModule::graded(
        w,
        [table](int i, int jj) {
            auto it = table.find({i, jj});
            if (it == table.end())
                throw WindowExceeded("module: no entry for " + std::to_string(i) + "," +
                                     std::to_string(jj));
            return it->second;
        },
        "document");
}

// Derivation documents: { "derivation": { "entries": { "i": [[offset,
// "poly"], ...] } } }.
inline ConformalDerivation derivation_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("entries") || !j.at("entries").is_object())
        throw ValidationError("derivation: missing entries object");
    std::map<int, std::vector<std::pair<int, MultiPoly>>> table;
    int bound = 0;
    for (const auto& [key, val] : j.at("entries").items()) {
        std::string where = "derivation entry '" + key + "'";
        auto idx = doc_detail::parse_index_or_star(key, where);
        if (!idx)
            throw ValidationError(where + ": wildcards are not allowed");
        if (!val.is_array())
            throw ValidationError(where + ": expected a list of [offset, poly] pairs");
        for (const auto& item : val) {
            if (!item.is_array() || item.size() != 2)
                throw ValidationError(where + ": expected [offset, poly]");
            int offset = item[0].get<int>();
            MultiPoly p = doc_detail::parse_poly_at(item[1].get<std::string>(), where);
            table[*idx].emplace_back(offset, p);
            bound = std::max(bound, offset >= 0 ? offset : -offset);
        }
    }
    int stated = j.value("support_bound", bound);
    return ConformalDerivation(
        [table](int i) {
            std::vector<StructureTerm> out;
            auto it = table.find(i);
            if (it != table.end())
                for (const auto& [offset, poly] : it->second)
                    out.push_back({i + offset, poly});
            return out;
        },
        stated);
}

inline json module_to_json(const GradedConformalModule& mod,
                           IndexWindow algebra_span = IndexWindow::symmetric(4))
{
    json entries = json::object();
    for (auto [i, jj] : mod.admissible_pairs(algebra_span))
        entries[std::to_string(i) + "," + std::to_string(jj)] = mod.coeff(i, jj).to_string();
    json m;
    m["rank_one"] = !mod.is_graded();
    if (mod.is_graded())
        m["window"] = {mod.window().lo, mod.window().hi};
    m["entries"] = std::move(entries);
    return json{{"module", m}};
}

inline json descriptor_to_json(const ModuleDescriptor& d)
{
    json out;
    switch (d.kind) {
    case ModuleDescriptor::Kind::Trivial: out["kind"] = "trivial"; break;
    case ModuleDescriptor::Kind::RankOne:
        out["kind"] = "rank_one";
        out["a"] = d.a.to_string();
        out["b"] = d.b.to_string();
        out["c"] = d.c.to_string();
        break;
    case ModuleDescriptor::Kind::GradedUniform:
        out["kind"] = "graded_uniform";
        out["a"] = d.a.to_string();
        out["b"] = d.b.to_string();
        break;
    case ModuleDescriptor::Kind::GradedSequence: {
        out["kind"] = "graded_sequence";
        out["b"] = d.b.to_string();
        json seq = json::object();
        for (const auto& [k, v] : d.sequence)
            seq[std::to_string(k)] = v;
        out["sequence"] = std::move(seq);
        break;
    }
    }
    return out;
}

inline json outcome_to_json(const ClassificationOutcome& o)
{
    json descriptors = json::array();
    for (const auto& d : o.descriptors)
        descriptors.push_back(descriptor_to_json(d));
    json normalization = json::object();
    for (const auto& [k, v] : o.normalization)
        normalization[std::to_string(k)] = v.to_string();
    json out{{"descriptors", descriptors},
             {"normalization", normalization},
             {"deg_bound", o.deg_bound},
             {"notes", o.notes},
             {"certificates", o.certificates}};
    if (!o.window.empty())
        out["window"] = {o.window.lo, o.window.hi};
    return out;
}

struct LoadedDocument {
    std::optional<GradedConformalAlgebra> algebra;
    std::optional<GradedConformalModule> module;
    std::optional<ConformalDerivation> derivation;
};

inline LoadedDocument parse_document(const json& j)
{
    if (!j.is_object())
        throw ValidationError("document: expected a top-level object");
    LoadedDocument out;
    if (j.contains("algebra"))
        out.algebra = algebra_from_json(j.at("algebra"));
    if (j.contains("module"))
        out.module = module_from_json(j.at("module"));
    if (j.contains("derivation"))
        out.derivation = derivation_from_json(j.at("derivation"));
    if (!out.algebra && !out.module && !out.derivation)
        throw ValidationError("document: no algebra, module or derivation section");
    return out;
}

inline LoadedDocument load_document(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_document(j);
}

} // namespace confal
