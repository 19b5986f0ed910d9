#include "dora/corpus.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace dora {

using nlohmann::json;

namespace {

Slot parse_slot(const json& node, const std::string& path, bool allow_prop,
                const std::map<std::string, std::size_t>& ids) {
    if (node.is_null()) return Slot::empty();
    if (!node.is_object()) throw SchemaError(path, "expected null or an object");
    if (node.contains("token")) {
        if (!node["token"].is_string() || node["token"].get<std::string>().empty())
            throw SchemaError(path + ".token", "expected a non-empty string");
        if (node.size() != 1) throw SchemaError(path, "slot must hold exactly one of token/prop");
        return Slot::of_token(node["token"].get<std::string>());
    }
    if (node.contains("prop")) {
        if (!allow_prop) throw SchemaError(path, "a predicate slot cannot hold a proposition");
        if (!node["prop"].is_string()) throw SchemaError(path + ".prop", "expected a proposition id");
        if (node.size() != 1) throw SchemaError(path, "slot must hold exactly one of token/prop");
        auto id = node["prop"].get<std::string>();
        auto it = ids.find(id);
        if (it == ids.end()) {
            throw ResolutionError(path + ": unknown proposition '" + id + "'");
        }
        return Slot::of_prop(it->second);
    }
    throw SchemaError(path, "expected a token or prop field");
}

void check_acyclic(const AnalogSpec& a) {
    // 0 unvisited, 1 on stack, 2 done
    std::vector<int> state(a.propositions.size(), 0);
    auto visit = [&](auto&& self, std::size_t p) -> void {
        if (state[p] == 2) return;
        if (state[p] == 1)
            throw ResolutionError("analog '" + a.name + "': proposition '" + a.propositions[p].id + "' embeds itself");
        state[p] = 1;
        for (const auto& rb : a.propositions[p].rbs)
            if (rb.obj.kind == Slot::Kind::Prop) self(self, rb.obj.prop);
        state[p] = 2;
    };
    for (std::size_t p = 0; p < a.propositions.size(); ++p) visit(visit, p);
}

json slot_json(const Slot& s, const AnalogSpec& a) {
    switch (s.kind) {
    case Slot::Kind::Empty: return nullptr;
    case Slot::Kind::Token: return json{{"token", s.token}};
    case Slot::Kind::Prop: return json{{"prop", a.propositions[s.prop].id}};
    }
    return nullptr;
}

} // namespace

std::vector<std::size_t> AnalogSpec::top_level() const {
    std::vector<bool> embedded(propositions.size(), false);
    for (const auto& p : propositions)
        for (const auto& rb : p.rbs)
            if (rb.obj.kind == Slot::Kind::Prop) embedded[rb.obj.prop] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < propositions.size(); ++i)
        if (!embedded[i]) out.push_back(i);
    return out;
}

std::vector<AnalogSpec> parse_proposition_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
    if (!doc.is_object()) throw SchemaError("$", "expected an object");
    if (!doc.contains("analogs")) throw SchemaError("$.analogs", "missing");
    const auto& analogs = doc["analogs"];
    if (!analogs.is_array()) throw SchemaError("$.analogs", "expected an array");

    std::vector<AnalogSpec> out;
    for (std::size_t ai = 0; ai < analogs.size(); ++ai) {
        const std::string apath = "$.analogs[" + std::to_string(ai) + "]";
        const auto& a = analogs[ai];
        if (!a.is_object()) throw SchemaError(apath, "expected an object");
        AnalogSpec spec;
        if (!a.contains("name") || !a["name"].is_string()) throw SchemaError(apath + ".name", "expected a string");
        spec.name = a["name"].get<std::string>();
        if (!a.contains("propositions") || !a["propositions"].is_array())
            throw SchemaError(apath + ".propositions", "expected an array");
        const auto& props = a["propositions"];

        // Ids first so nested references may point forward.
        std::map<std::string, std::size_t> ids;
        for (std::size_t pi = 0; pi < props.size(); ++pi) {
            const std::string ppath = apath + ".propositions[" + std::to_string(pi) + "]";
            if (!props[pi].is_object()) throw SchemaError(ppath, "expected an object");
            if (!props[pi].contains("id") || !props[pi]["id"].is_string()) throw SchemaError(ppath + ".id", "expected a string");
            if (!ids.emplace(props[pi]["id"].get<std::string>(), pi).second)
                throw SchemaError(ppath + ".id", "duplicate proposition id");
        }
        for (std::size_t pi = 0; pi < props.size(); ++pi) {
            const std::string ppath = apath + ".propositions[" + std::to_string(pi) + "]";
            PropositionSpec p;
            p.id = props[pi]["id"].get<std::string>();
            if (!props[pi].contains("rbs") || !props[pi]["rbs"].is_array()) throw SchemaError(ppath + ".rbs", "expected an array");
            const auto& rbs = props[pi]["rbs"];
            if (rbs.empty() || rbs.size() > 2) throw SchemaError(ppath + ".rbs", "a proposition holds one or two role bindings");
            for (std::size_t ri = 0; ri < rbs.size(); ++ri) {
                const std::string rpath = ppath + ".rbs[" + std::to_string(ri) + "]";
                if (!rbs[ri].is_object()) throw SchemaError(rpath, "expected an object");
                if (!rbs[ri].contains("pred")) throw SchemaError(rpath + ".pred", "missing");
                if (!rbs[ri].contains("obj")) throw SchemaError(rpath + ".obj", "missing");
                RoleBinding rb;
                rb.pred = parse_slot(rbs[ri]["pred"], rpath + ".pred", false, ids);
                rb.obj = parse_slot(rbs[ri]["obj"], rpath + ".obj", true, ids);
                if (rb.obj.kind == Slot::Kind::Prop && rb.obj.prop == pi)
                    throw ResolutionError(rpath + ".obj: proposition embeds itself");
                p.rbs.push_back(std::move(rb));
            }
            spec.propositions.push_back(std::move(p));
        }
        check_acyclic(spec);
        out.push_back(std::move(spec));
    }
    return out;
}

std::vector<AnalogSpec> load_proposition_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_proposition_file(ss.str());
}

std::string to_json(const std::vector<AnalogSpec>& analogs) {
    json doc;
    doc["analogs"] = json::array();
    for (const auto& a : analogs) {
        json ja;
        ja["name"] = a.name;
        ja["propositions"] = json::array();
        for (const auto& p : a.propositions) {
            json jp;
            jp["id"] = p.id;
            jp["rbs"] = json::array();
            for (const auto& rb : p.rbs) jp["rbs"].push_back(json{{"pred", slot_json(rb.pred, a)}, {"obj", slot_json(rb.obj, a)}});
            ja["propositions"].push_back(std::move(jp));
        }
        doc["analogs"].push_back(std::move(ja));
    }
    return doc.dump(1);
}

syntax::Words surface_words(const AnalogSpec& analog, std::size_t prop) {
    syntax::Words out;
    auto walk = [&](auto&& self, std::size_t p) -> void {
        for (const auto& rb : analog.propositions.at(p).rbs) {
            if (rb.pred.kind == Slot::Kind::Token) out.push_back(rb.pred.token);
            if (rb.obj.kind == Slot::Kind::Token) out.push_back(rb.obj.token);
            else if (rb.obj.kind == Slot::Kind::Prop) self(self, rb.obj.prop);
        }
    };
    walk(walk, prop);
    return out;
}

std::vector<syntax::Words> corpus_sentences(const std::vector<AnalogSpec>& analogs) {
    std::vector<syntax::Words> out;
    for (const auto& a : analogs)
        for (std::size_t p = 0; p < a.propositions.size(); ++p) out.push_back(surface_words(a, p));
    return out;
}

} // namespace dora
