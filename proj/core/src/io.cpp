#include "idemlin/io.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "idemlin/semimodule.hpp"

namespace idemlin {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ParseError(where + ": " + msg);
}

const nlohmann::json& expect_member(const nlohmann::json& j, const char* key,
                                    const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing required field \"") + key + "\"");
    return *it;
}

const nlohmann::json* find_member(const nlohmann::json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

const nlohmann::json& expect_array(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    return j;
}

std::string expect_string(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

std::int64_t expect_int(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<std::int64_t>();
}

bool expect_bool(const nlohmann::json& j, const std::string& where) {
    if (!j.is_boolean()) fail(where, "expected a boolean");
    return j.get<bool>();
}

std::string at(const std::string& where, std::size_t i) {
    return where + "[" + std::to_string(i) + "]";
}

std::vector<std::string> unique_labels(const nlohmann::json& j, const std::string& where) {
    const auto& arr = expect_array(j, where);
    if (arr.empty()) fail(where, "must be nonempty");
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        std::string s = expect_string(arr[i], at(where, i));
        if (s.empty()) fail(at(where, i), "empty label");
        if (!seen.insert(s).second) fail(at(where, i), "duplicate label \"" + s + "\"");
        labels.push_back(std::move(s));
    }
    return labels;
}

std::vector<SemiringValue> value_row(const nlohmann::json& j, const Semiring& sr,
                                     std::size_t expected, const std::string& where) {
    const auto& arr = expect_array(j, where);
    if (arr.size() != expected)
        fail(where, "expected " + std::to_string(expected) + " values, got " +
                        std::to_string(arr.size()));
    std::vector<SemiringValue> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(value_from_json(arr[i], sr, at(where, i)));
    return out;
}

}  // namespace

nlohmann::json value_to_json(const SemiringValue& v) {
    switch (v.tag) {
        case SemiringValue::Tag::Bottom: return {{"t", "bot"}};
        case SemiringValue::Tag::Top: return {{"t", "top"}};
        default: return {{"t", "q"}, {"num", v.payload.num()}, {"den", v.payload.den()}};
    }
}

SemiringValue value_from_json(const nlohmann::json& j, const Semiring& sr,
                              const std::string& where) {
    try {
        if (j.is_number_integer()) return sr.make_int(j.get<std::int64_t>());
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            if (s == "bot") return sr.zero();
            if (s == "top") return sr.top();
            fail(where, "unknown value string \"" + s + "\" (use \"bot\" or \"top\")");
        }
        if (j.is_object()) {
            const std::string t =
                expect_string(expect_member(j, "t", where), where + ".t");
            if (t == "bot") return sr.zero();
            if (t == "top") return sr.top();
            if (t == "q") {
                const std::int64_t num =
                    expect_int(expect_member(j, "num", where), where + ".num");
                std::int64_t den = 1;
                if (const auto* d = find_member(j, "den"))
                    den = expect_int(*d, where + ".den");
                if (den == 0) fail(where + ".den", "zero denominator");
                return sr.make(Rational(num, den));
            }
            fail(where + ".t", "unknown value tag \"" + t + "\"");
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, std::string("invalid value for ") + sr.name() + ": " + e.what());
    }
    fail(where, "expected a value object or an integer");
}

nlohmann::json semiring_to_json(const Semiring& sr) {
    nlohmann::json j;
    switch (sr.kind()) {
        case SemiringKind::Boolean: j["instance"] = "boolean"; break;
        case SemiringKind::MaxPlus:
            j["instance"] = "max-plus";
            j["completed"] = sr.completed();
            break;
        case SemiringKind::MinPlus:
            j["instance"] = "min-plus";
            j["completed"] = sr.completed();
            break;
        case SemiringKind::FuzzyChain:
            j["instance"] = "fuzzy-chain";
            j["n"] = sr.chain_height();
            break;
        case SemiringKind::SaturatedNat:
            j["instance"] = "saturated-nat";
            j["n"] = sr.chain_height();
            break;
    }
    return j;
}

Semiring semiring_from_json(const nlohmann::json& j, const std::string& where) {
    const std::string inst =
        expect_string(expect_member(j, "instance", where), where + ".instance");
    bool completed = true;
    if (const auto* c = find_member(j, "completed"))
        completed = expect_bool(*c, where + ".completed");
    try {
        if (inst == "boolean") return Semiring::boolean();
        if (inst == "max-plus") return Semiring::max_plus(completed);
        if (inst == "min-plus") return Semiring::min_plus(completed);
        if (inst == "fuzzy-chain" || inst == "saturated-nat") {
            const std::int64_t n =
                expect_int(expect_member(j, "n", where), where + ".n");
            if (n < 1 || n > 1'000'000) fail(where + ".n", "chain height out of range");
            return inst == "fuzzy-chain" ? Semiring::fuzzy_chain(static_cast<int>(n))
                                         : Semiring::saturated_nat(static_cast<int>(n));
        }
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, std::string("invalid semiring: ") + e.what());
    }
    fail(where + ".instance", "unknown semiring instance \"" + inst + "\"");
}

nlohmann::json semimodule_to_json(const Semimodule& m) {
    nlohmann::json j;
    j["semiring"] = semiring_to_json(m.semiring());
    j["points"] = m.domain()->labels;
    if (m.is_full()) {
        j["full"] = true;
        return j;
    }
    nlohmann::json carrier = nlohmann::json::array();
    for (const auto& f : m.carrier()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : f.values()) row.push_back(value_to_json(v));
        carrier.push_back(std::move(row));
    }
    j["carrier"] = std::move(carrier);
    return j;
}

SemimodulePtr semimodule_from_json(const nlohmann::json& j, const std::string& where) {
    const Semiring sr =
        semiring_from_json(expect_member(j, "semiring", where), where + ".semiring");
    auto X = PointSet::make(
        unique_labels(expect_member(j, "points", where), where + ".points"));

    const auto* carrier = find_member(j, "carrier");
    const auto* generators = find_member(j, "generators");
    const auto* full = find_member(j, "full");
    if ((carrier != nullptr) + (generators != nullptr) + (full != nullptr) != 1)
        fail(where, "need exactly one of \"carrier\", \"generators\", \"full\"");

    try {
        if (full) {
            if (!expect_bool(*full, where + ".full"))
                fail(where + ".full", "must be true when present");
            return std::make_shared<const Semimodule>(Semimodule::full(X, sr));
        }
        const char* key = carrier ? "carrier" : "generators";
        const std::string fwhere = where + "." + key;
        if (!sr.enumerable())
            fail(fwhere, "explicit carriers require an enumerable semiring");
        const auto& rows = expect_array(carrier ? *carrier : *generators, fwhere);
        std::vector<FiniteFunction> fns;
        fns.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            fns.emplace_back(X, sr, value_row(rows[i], sr, X->size(), at(fwhere, i)));
        if (carrier)
            return std::make_shared<const Semimodule>(
                Semimodule::from_carrier(X, sr, std::move(fns)));
        bool inf_close = false;
        if (const auto* ic = find_member(j, "inf_close"))
            inf_close = expect_bool(*ic, where + ".inf_close");
        std::uint64_t cap = 100000;
        if (const auto* c = find_member(j, "cap")) {
            const std::int64_t raw = expect_int(*c, where + ".cap");
            if (raw < 1) fail(where + ".cap", "must be positive");
            cap = static_cast<std::uint64_t>(raw);
        }
        return std::make_shared<const Semimodule>(
            Semimodule::close_under(X, sr, fns, inf_close, cap));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        fail(where, std::string("invalid semimodule: ") + e.what());
    }
}

nlohmann::json operator_to_json(const OperatorTable& A) {
    nlohmann::json j;
    j["source"] = semimodule_to_json(*A.source);
    j["target"] = semimodule_to_json(*A.target);
    nlohmann::json table = nlohmann::json::array();
    for (std::size_t i = 0; i < A.table.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& v : A.table[i].values()) row.push_back(value_to_json(v));
        table.push_back(nlohmann::json::array({i, std::move(row)}));
    }
    j["table"] = std::move(table);
    return j;
}

OperatorDoc operator_doc_from_json(const nlohmann::json& j, const std::string& where) {
    OperatorDoc doc;
    doc.source = semimodule_from_json(expect_member(j, "source", where), where + ".source");
    doc.target = semimodule_from_json(expect_member(j, "target", where), where + ".target");
    if (doc.source->semiring() != doc.target->semiring())
        fail(where, "source and target use different semirings");

    const auto* table = find_member(j, "table");
    const auto* kernel = find_member(j, "kernel");
    if ((table != nullptr) == (kernel != nullptr))
        fail(where, "need exactly one of \"table\", \"kernel\"");

    const Semiring& sr = doc.source->semiring();
    if (table) {
        const std::string twhere = where + ".table";
        if (!doc.source->materialized())
            fail(twhere, "table form requires an enumerable source carrier");
        const auto& entries = expect_array(*table, twhere);
        const std::size_t n = doc.source->size();
        if (entries.size() != n)
            fail(twhere, "expected one entry per source-carrier element (" +
                             std::to_string(n) + ")");
        std::vector<std::optional<FiniteFunction>> images(n);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& entry = expect_array(entries[i], at(twhere, i));
            if (entry.size() != 2)
                fail(at(twhere, i), "expected [source-index, [value,...]]");
            const std::int64_t raw = expect_int(entry[0], at(twhere, i) + "[0]");
            if (raw < 0 || static_cast<std::size_t>(raw) >= n)
                fail(at(twhere, i) + "[0]", "source-carrier index out of range");
            const auto idx = static_cast<std::size_t>(raw);
            if (images[idx])
                fail(at(twhere, i) + "[0]", "duplicate source-carrier index");
            images[idx] = FiniteFunction(
                doc.target->domain(), sr,
                value_row(entry[1], sr, doc.target->domain()->size(),
                          at(twhere, i) + "[1]"));
        }
        std::vector<FiniteFunction> tabled;
        tabled.reserve(n);
        for (auto& img : images) tabled.push_back(std::move(*img));
        try {
            doc.table = make_operator(doc.source, doc.target, std::move(tabled));
        } catch (const std::exception& e) {
            fail(twhere, std::string("invalid operator table: ") + e.what());
        }
    } else {
        const std::string kwhere = where + ".kernel";
        const auto& rows = expect_array(*kernel, kwhere);
        const std::size_t nx = doc.source->domain()->size();
        if (rows.size() != nx)
            fail(kwhere, "expected one row per source point (" + std::to_string(nx) + ")");
        std::vector<FiniteFunction> fns;
        fns.reserve(nx);
        for (std::size_t i = 0; i < rows.size(); ++i)
            fns.emplace_back(doc.target->domain(), sr,
                             value_row(rows[i], sr, doc.target->domain()->size(),
                                       at(kwhere, i)));
        doc.kernel = make_kernel(doc.source->domain(), doc.target->domain(), sr,
                                 std::move(fns));
        if (doc.source->materialized()) {
            try {
                doc.table = operator_from_kernel(*doc.kernel, doc.source, doc.target);
            } catch (const std::exception& e) {
                fail(kwhere,
                     std::string("kernel does not define an operator into the target: ") +
                         e.what());
            }
        }
    }
    return doc;
}

OperatorTable operator_from_json(const nlohmann::json& j, const std::string& where) {
    OperatorDoc doc = operator_doc_from_json(j, where);
    if (!doc.table)
        fail(where, "operator cannot be tabled (source carrier is not enumerable)");
    return std::move(*doc.table);
}

nlohmann::json kernel_to_json(const KernelMatrix& k) {
    nlohmann::json j;
    j["semiring"] = semiring_to_json(k.sr);
    j["source_points"] = k.source->labels;
    j["target_points"] = k.target->labels;
    nlohmann::json matrix = nlohmann::json::array();
    for (const auto& row : k.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& v : row.values()) r.push_back(value_to_json(v));
        matrix.push_back(std::move(r));
    }
    j["matrix"] = std::move(matrix);
    return j;
}

KernelMatrix kernel_from_json(const nlohmann::json& j, const std::string& where) {
    const Semiring sr =
        semiring_from_json(expect_member(j, "semiring", where), where + ".semiring");
    auto X = PointSet::make(
        unique_labels(expect_member(j, "source_points", where), where + ".source_points"));
    auto Y = PointSet::make(
        unique_labels(expect_member(j, "target_points", where), where + ".target_points"));
    const auto& rows = expect_array(expect_member(j, "matrix", where), where + ".matrix");
    if (rows.size() != X->size())
        fail(where + ".matrix", "expected one row per source point");
    std::vector<FiniteFunction> fns;
    fns.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        fns.emplace_back(Y, sr,
                         value_row(rows[i], sr, Y->size(), at(where + ".matrix", i)));
    return make_kernel(std::move(X), std::move(Y), sr, std::move(fns));
}

namespace {

std::size_t node_ref(const nlohmann::json& j, const WeightedGraph& g,
                     const std::string& where) {
    if (j.is_string()) {
        const std::size_t i = g.node_index(j.get<std::string>());
        if (i == PointSet::npos)
            fail(where, "unknown node \"" + j.get<std::string>() + "\"");
        return i;
    }
    const std::int64_t raw = expect_int(j, where);
    if (raw < 0 || static_cast<std::size_t>(raw) >= g.nodes.size())
        fail(where, "node index out of range");
    return static_cast<std::size_t>(raw);
}

}  // namespace

WeightedGraph graph_from_json(const nlohmann::json& j, const std::string& where) {
    WeightedGraph g;
    g.nodes = unique_labels(expect_member(j, "nodes", where), where + ".nodes");
    const auto& edges = expect_array(expect_member(j, "edges", where), where + ".edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ewhere = at(where + ".edges", i);
        const auto& e = expect_array(edges[i], ewhere);
        if (e.size() != 3 && e.size() != 4)
            fail(ewhere, "expected [from, to, num, den]");
        WeightedGraph::Edge edge;
        edge.from = node_ref(e[0], g, ewhere + "[0]");
        edge.to = node_ref(e[1], g, ewhere + "[1]");
        const std::int64_t num = expect_int(e[2], ewhere + "[2]");
        std::int64_t den = 1;
        if (e.size() == 4) den = expect_int(e[3], ewhere + "[3]");
        if (den == 0) fail(ewhere + "[3]", "zero denominator");
        edge.weight = Rational(num, den);
        g.edges.push_back(edge);
    }
    g.source = node_ref(expect_member(j, "source", where), g, where + ".source");
    return g;
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
    nlohmann::json j;
    j["nodes"] = g.nodes;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges)
        edges.push_back(nlohmann::json::array(
            {g.nodes.at(e.from), g.nodes.at(e.to), e.weight.num(), e.weight.den()}));
    j["edges"] = std::move(edges);
    j["source"] = g.nodes.at(g.source);
    return j;
}

HmmSpec hmm_from_json(const nlohmann::json& j, const std::string& where) {
    const Semiring sr = Semiring::max_plus();
    HmmSpec h;
    h.states = unique_labels(expect_member(j, "states", where), where + ".states");
    const std::size_t S = h.states.size();
    h.initial = value_row(expect_member(j, "initial", where), sr, S, where + ".initial");

    const auto& trans =
        expect_array(expect_member(j, "transition", where), where + ".transition");
    if (trans.size() != S) fail(where + ".transition", "expected one row per state");
    for (std::size_t i = 0; i < S; ++i)
        h.transition.push_back(
            value_row(trans[i], sr, S, at(where + ".transition", i)));

    const auto& emit =
        expect_array(expect_member(j, "emission", where), where + ".emission");
    if (emit.size() != S) fail(where + ".emission", "expected one row per state");
    std::size_t alphabet = 0;
    for (std::size_t i = 0; i < S; ++i) {
        const auto& row = expect_array(emit[i], at(where + ".emission", i));
        if (i == 0) {
            alphabet = row.size();
            if (alphabet == 0) fail(at(where + ".emission", 0), "empty alphabet");
        }
        h.emission.push_back(
            value_row(row, sr, alphabet, at(where + ".emission", i)));
    }

    const auto& obs =
        expect_array(expect_member(j, "observations", where), where + ".observations");
    if (obs.empty()) fail(where + ".observations", "must be nonempty");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const std::int64_t raw = expect_int(obs[i], at(where + ".observations", i));
        if (raw < 0 || static_cast<std::size_t>(raw) >= alphabet)
            fail(at(where + ".observations", i), "observation symbol out of range");
        h.observations.push_back(static_cast<std::size_t>(raw));
    }
    return h;
}

nlohmann::json hmm_to_json(const HmmSpec& h) {
    nlohmann::json j;
    j["states"] = h.states;
    nlohmann::json initial = nlohmann::json::array();
    for (const auto& v : h.initial) initial.push_back(value_to_json(v));
    j["initial"] = std::move(initial);
    auto matrix = [](const std::vector<std::vector<SemiringValue>>& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : m) {
            nlohmann::json r = nlohmann::json::array();
            for (const auto& v : row) r.push_back(value_to_json(v));
            rows.push_back(std::move(r));
        }
        return rows;
    };
    j["transition"] = matrix(h.transition);
    j["emission"] = matrix(h.emission);
    j["observations"] = h.observations;
    return j;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::string stable_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace idemlin
