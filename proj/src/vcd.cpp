#include "nlre/sim.hpp"

#include <json.hpp>

#include <sstream>

namespace nlre {

namespace {

// Printable VCD identifier for signal slot i, base 94 starting at '!'.
std::string vcd_id(size_t i) {
    std::string s;
    do {
        s += char('!' + i % 94);
        i /= 94;
    } while (i);
    return s;
}

} // namespace

std::string write_vcd(const Waveform& w) {
    std::ostringstream out;
    out << "$timescale 1ns $end\n";
    out << "$scope module top $end\n";
    for (size_t i = 0; i < w.signals.size(); i++)
        out << "$var wire 1 " << vcd_id(i) << " " << w.signals[i].name << " $end\n";
    out << "$upscope $end\n";
    out << "$enddefinitions $end\n";
    size_t cycles = w.cycles();
    std::vector<Val> last(w.signals.size(), Val::X);
    for (size_t t = 0; t < cycles; t++) {
        out << "#" << t << "\n";
        if (t == 0)
            out << "$dumpvars\n";
        for (size_t i = 0; i < w.signals.size(); i++) {
            Val v = w.signals[i].values[t];
            if (t == 0 || v != last[i])
                out << to_char(v) << vcd_id(i) << "\n";
            last[i] = v;
        }
        if (t == 0)
            out << "$end\n";
    }
    return out.str();
}

VcdResult read_vcd(const std::string& text) {
    VcdResult res;
    std::istringstream in(text);
    std::string tok;

    std::map<std::string, size_t> id_slot;
    std::vector<std::string> names;
    bool in_defs = true;
    bool saw_z = false;

    std::vector<std::vector<Val>> seqs;
    std::vector<Val> cur;
    bool have_time = false;

    auto flush_sample = [&]() {
        if (!have_time)
            return;
        for (size_t i = 0; i < cur.size(); i++)
            seqs[i].push_back(cur[i]);
    };

    while (in >> tok) {
        if (in_defs) {
            if (tok == "$var") {
                std::string type, width, id, name, rest;
                in >> type >> width >> id >> name;
                // Optional range token before $end, e.g. "a [3]".
                std::string end;
                in >> end;
                if (end != "$end") {
                    name += end;
                    in >> end;
                    if (end != "$end")
                        throw SimError("vcd: malformed $var");
                }
                if (width != "1")
                    throw SimError("vcd: only scalar wires supported, '" + name + "' has width " + width);
                if (id_slot.count(id))
                    throw SimError("vcd: duplicate identifier '" + id + "'");
                id_slot[id] = names.size();
                names.push_back(name);
            } else if (tok == "$enddefinitions") {
                in >> tok; // $end
                in_defs = false;
                seqs.assign(names.size(), {});
                cur.assign(names.size(), Val::X);
            } else if (tok[0] == '$') {
                // $timescale, $scope, $upscope, $comment ... skip to $end.
                while (tok != "$end" && in >> tok)
                    ;
            } else {
                throw SimError("vcd: malformed header near '" + tok + "'");
            }
            continue;
        }
        if (tok[0] == '#') {
            flush_sample();
            have_time = true;
            continue;
        }
        if (tok == "$dumpvars" || tok == "$end" || tok == "$dumpall" || tok == "$dumpon" || tok == "$dumpoff")
            continue;
        char v = tok[0];
        std::string id = tok.substr(1);
        if (v == 'b' || v == 'B' || v == 'r' || v == 'R')
            throw SimError("vcd: vector value changes unsupported");
        auto it = id_slot.find(id);
        if (it == id_slot.end())
            throw SimError("vcd: unknown identifier '" + id + "'");
        Val val;
        switch (v) {
        case '0': val = Val::Zero; break;
        case '1': val = Val::One; break;
        case 'x':
        case 'X': val = Val::X; break;
        case 'z':
        case 'Z':
            val = Val::X;
            saw_z = true;
            break;
        default: throw SimError(std::string("vcd: bad value character '") + v + "'");
        }
        cur[it->second] = val;
    }
    if (in_defs)
        throw SimError("vcd: missing $enddefinitions");
    flush_sample();

    if (saw_z)
        res.warnings.push_back("Z values mapped to X");
    for (size_t i = 0; i < names.size(); i++)
        res.waveform.add(names[i], std::move(seqs[i]));
    return res;
}

Stimulus parse_stimulus_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw SimError("malformed stimulus JSON");
    Stimulus s;
    s.clock = doc.value("clock", std::string());
    if (s.clock.empty())
        throw SimError("stimulus lacks 'clock'");
    auto parse_val = [](const std::string& c) {
        if (c == "0")
            return Val::Zero;
        if (c == "1")
            return Val::One;
        if (c == "x")
            return Val::X;
        throw SimError("stimulus value must be 0, 1, or x");
    };
    if (doc.contains("default"))
        s.default_value = parse_val(doc["default"].get<std::string>());
    if (doc.contains("inputs")) {
        for (auto it = doc["inputs"].begin(); it != doc["inputs"].end(); ++it) {
            if (it.value().is_object()) {
                s.defaults[it.key()] = parse_val(it.value().at("hold").get<std::string>());
                continue;
            }
            std::string seq = it.value().get<std::string>();
            std::vector<Val> vals;
            for (char c : seq) {
                if (c == '0')
                    vals.push_back(Val::Zero);
                else if (c == '1')
                    vals.push_back(Val::One);
                else if (c == 'x')
                    vals.push_back(Val::X);
                else
                    throw SimError("stimulus sequences use characters 0/1/x");
            }
            s.inputs[it.key()] = std::move(vals);
        }
    }
    return s;
}

std::string write_stimulus_json(const Stimulus& s) {
    nlohmann::json doc;
    doc["clock"] = s.clock;
    doc["default"] = std::string(1, to_char(s.default_value));
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, seq] : s.inputs) {
        std::string str;
        for (Val v : seq)
            str += to_char(v);
        inputs[name] = str;
    }
    for (const auto& [name, v] : s.defaults)
        inputs[name] = nlohmann::json{{"hold", std::string(1, to_char(v))}};
    doc["inputs"] = inputs;
    return doc.dump(2) + "\n";
}

} // namespace nlre
