#include "nlre/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nlre {

using nlohmann::json;

namespace {

json parse_document(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw IoError("malformed JSON document");
    return doc;
}

Netlist from_json(const json& doc, const GateLibrary& library) {
    if (!doc.is_object() || !doc.contains("gates") || !doc.contains("nets"))
        throw IoError("netlist document needs 'gates' and 'nets'");

    NetlistBuilder b(&library);

    // Nets first, ascending by declared id; ids re-compact densely.
    std::vector<const json*> nets;
    for (const json& n : doc.at("nets"))
        nets.push_back(&n);
    std::sort(nets.begin(), nets.end(), [](const json* x, const json* y) {
        return x->at("id").get<uint64_t>() < y->at("id").get<uint64_t>();
    });
    std::map<uint64_t, NetId> net_map;
    for (const json* n : nets) {
        uint64_t id = n->at("id").get<uint64_t>();
        if (net_map.count(id))
            throw IoError("duplicate net id " + std::to_string(id));
        std::string name = n->at("name").get<std::string>();
        NetId nid = b.add_net(name, n->value("global_in", false), n->value("global_out", false));
        if (name == "$const0")
            b.set_const_net(nid, false);
        else if (name == "$const1")
            b.set_const_net(nid, true);
        net_map[id] = nid;
    }

    std::vector<const json*> gates;
    for (const json& g : doc.at("gates"))
        gates.push_back(&g);
    std::sort(gates.begin(), gates.end(), [](const json* x, const json* y) {
        return x->at("id").get<uint64_t>() < y->at("id").get<uint64_t>();
    });
    std::set<uint64_t> gate_ids;
    for (const json* g : gates) {
        uint64_t id = g->at("id").get<uint64_t>();
        if (!gate_ids.insert(id).second)
            throw IoError("duplicate gate id " + std::to_string(id));
        std::string type = g->at("type").get<std::string>();
        if (!library.find(type))
            throw IoError("unknown gate type '" + type + "'");
        GateId gid = b.add_gate(type, g->at("name").get<std::string>());
        if (g->contains("config")) {
            for (auto it = g->at("config").begin(); it != g->at("config").end(); ++it) {
                auto width = library.get(type).config_width(it.key());
                if (!width)
                    throw IoError("type '" + type + "' has no config key '" + it.key() + "'");
                std::string hex = it.value().get<std::string>();
                size_t w = *width ? *width : BitVec::hex_digit_count(hex) * 4;
                BitVec value;
                try {
                    value = BitVec::from_hex(hex, w);
                } catch (const std::exception& e) {
                    throw IoError("gate '" + g->at("name").get<std::string>() + "': bad " + it.key() + " width, expected " +
                                  std::to_string(w) + " bits (" + e.what() + ")");
                }
                b.set_config(gid, it.key(), std::move(value));
            }
        }
        for (auto it = g->at("pins").begin(); it != g->at("pins").end(); ++it) {
            uint64_t net_id = it.value().get<uint64_t>();
            auto nm = net_map.find(net_id);
            if (nm == net_map.end())
                throw IoError("gate '" + g->at("name").get<std::string>() + "' references unknown net " +
                              std::to_string(net_id));
            b.connect(gid, it.key(), nm->second);
        }
    }

    try {
        return std::move(b).build();
    } catch (const NetlistError& e) {
        throw IoError(e.what());
    }
}

} // namespace

Netlist parse_json_netlist(const std::string& text, const GateLibrary& library) {
    return from_json(parse_document(text), library);
}

Netlist parse_json_netlist(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.contains("library"))
        throw IoError("netlist document lacks 'library'");
    return from_json(doc, builtin_library(doc.at("library").get<std::string>()));
}

std::string write_json_netlist(const Netlist& nl) {
    json doc;
    doc["library"] = nl.library().name();
    json gates = json::array();
    for (const Gate& g : nl.gates()) {
        json jg;
        jg["id"] = g.id;
        jg["name"] = g.name;
        jg["type"] = g.type->name;
        if (!g.config.empty()) {
            json cfg;
            for (const auto& [k, v] : g.config)
                cfg[k] = v.to_hex();
            jg["config"] = cfg;
        }
        json pins;
        for (size_t p = 0; p < g.endpoints.size(); p++)
            if (g.endpoints[p] != kInvalidId)
                pins[g.type->pins[p].name] = g.endpoints[p];
        jg["pins"] = pins;
        gates.push_back(std::move(jg));
    }
    doc["gates"] = std::move(gates);
    json nets = json::array();
    for (const Net& n : nl.nets()) {
        json jn;
        jn["id"] = n.id;
        jn["name"] = n.name;
        jn["global_in"] = n.is_global_input;
        jn["global_out"] = n.is_global_output;
        nets.push_back(std::move(jn));
    }
    doc["nets"] = std::move(nets);
    return doc.dump(2) + "\n";
}

std::map<std::string, std::string> parse_labels(const std::string& text) {
    json doc = parse_document(text);
    if (!doc.is_object())
        throw IoError("label file must be a JSON object");
    std::map<std::string, std::string> out;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        out[it.key()] = it.value().get<std::string>();
    return out;
}

std::string write_labels(const std::map<std::string, std::string>& labels) {
    json doc = json::object();
    for (const auto& [k, v] : labels)
        doc[k] = v;
    return doc.dump(2) + "\n";
}

bool structurally_equal(const Netlist& a, const Netlist& b) {
    if (a.library().name() != b.library().name())
        return false;
    if (a.gates().size() != b.gates().size() || a.nets().size() != b.nets().size())
        return false;
    for (size_t i = 0; i < a.nets().size(); i++) {
        const Net &na = a.nets()[i], &nb = b.nets()[i];
        if (na.name != nb.name || na.is_global_input != nb.is_global_input ||
            na.is_global_output != nb.is_global_output)
            return false;
    }
    for (size_t i = 0; i < a.gates().size(); i++) {
        const Gate &ga = a.gates()[i], &gb = b.gates()[i];
        if (ga.name != gb.name || ga.type->name != gb.type->name || ga.config != gb.config ||
            ga.endpoints != gb.endpoints)
            return false;
    }
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write '" + path + "'");
    out << text;
}

} // namespace nlre
