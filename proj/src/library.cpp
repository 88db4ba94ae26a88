#include "nlre/library.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace nlre {

bool is_sequential(GateCategory c) {
    return c == GateCategory::Ff || c == GateCategory::Bram || c == GateCategory::Dsp;
}

bool is_combinational(GateCategory c) {
    return c == GateCategory::Lut || c == GateCategory::Carry || c == GateCategory::PrimitiveComb;
}

bool is_control_role(PinRole r) {
    switch (r) {
    case PinRole::Select:
    case PinRole::Enable:
    case PinRole::Clock:
    case PinRole::Reset:
    case PinRole::Set:
        return true;
    default:
        return false;
    }
}

const char* to_string(GateCategory c) {
    switch (c) {
    case GateCategory::Lut: return "lut";
    case GateCategory::Carry: return "carry";
    case GateCategory::Ff: return "ff";
    case GateCategory::Bram: return "bram";
    case GateCategory::Dsp: return "dsp";
    case GateCategory::PrimitiveComb: return "primitive-comb";
    case GateCategory::Io: return "io";
    case GateCategory::Constant: return "constant";
    }
    return "?";
}

const char* to_string(PinRole r) {
    switch (r) {
    case PinRole::Data: return "data";
    case PinRole::Select: return "select";
    case PinRole::Enable: return "enable";
    case PinRole::Clock: return "clock";
    case PinRole::Reset: return "reset";
    case PinRole::Set: return "set";
    case PinRole::CarryIn: return "carry-in";
    case PinRole::CarryOut: return "carry-out";
    case PinRole::Address: return "address";
    case PinRole::None: return "none";
    }
    return "?";
}

int GateType::pin_index(const std::string& pin_name) const {
    for (size_t i = 0; i < pins.size(); i++)
        if (pins[i].name == pin_name)
            return int(i);
    return -1;
}

std::vector<int> GateType::input_pins() const {
    std::vector<int> out;
    for (size_t i = 0; i < pins.size(); i++)
        if (pins[i].dir == PinDir::In)
            out.push_back(int(i));
    return out;
}

std::vector<int> GateType::output_pins() const {
    std::vector<int> out;
    for (size_t i = 0; i < pins.size(); i++)
        if (pins[i].dir == PinDir::Out)
            out.push_back(int(i));
    return out;
}

std::optional<size_t> GateType::config_width(const std::string& key) const {
    for (const auto& [k, w] : config_keys)
        if (k == key)
            return w;
    return std::nullopt;
}

int GateType::clock_pin() const {
    for (size_t i = 0; i < pins.size(); i++)
        if (pins[i].role == PinRole::Clock)
            return int(i);
    return -1;
}

const GateType* GateLibrary::find(const std::string& type_name) const {
    for (const auto& t : types_)
        if (t.name == type_name)
            return &t;
    return nullptr;
}

const GateType& GateLibrary::get(const std::string& type_name) const {
    const GateType* t = find(type_name);
    if (!t)
        throw std::invalid_argument("unknown gate type '" + type_name + "' in library '" + name_ + "'");
    return *t;
}

void GateLibrary::add(GateType t) {
    if (find(t.name))
        throw std::invalid_argument("duplicate gate type '" + t.name + "'");
    for (size_t i = 0; i < t.pins.size(); i++)
        for (size_t j = i + 1; j < t.pins.size(); j++)
            if (t.pins[i].name == t.pins[j].name)
                throw std::invalid_argument("duplicate pin '" + t.pins[i].name + "' on type '" + t.name + "'");
    if (is_sequential(t.category)) {
        int clocks = 0;
        for (const auto& p : t.pins)
            if (p.role == PinRole::Clock)
                clocks++;
        if (clocks != 1)
            throw std::invalid_argument("sequential type '" + t.name + "' must declare exactly one clock pin");
    }
    types_.push_back(std::move(t));
}

namespace {

PinSpec in(const std::string& n, PinRole r = PinRole::Data) { return {n, PinDir::In, r}; }
PinSpec out(const std::string& n, PinRole r = PinRole::Data) { return {n, PinDir::Out, r}; }

std::vector<std::string> bus(const std::string& prefix, size_t n) {
    std::vector<std::string> names;
    for (size_t i = 0; i < n; i++)
        names.push_back(prefix + std::to_string(i));
    return names;
}

void add_bus_pins(GateType& t, const std::string& prefix, size_t n, PinDir dir, PinRole role) {
    for (const auto& nm : bus(prefix, n))
        t.pins.push_back({nm, dir, role});
    t.pin_groups.push_back({prefix, bus(prefix, n), true});
}

GateType make_lut(const std::string& name, size_t k) {
    GateType t;
    t.name = name;
    t.category = GateCategory::Lut;
    for (size_t i = 0; i < k; i++)
        t.pins.push_back(in("I" + std::to_string(i)));
    t.pins.push_back(out("O"));
    t.config_keys = {{"INIT", size_t(1) << k}};
    return t;
}

GateType make_ff(const std::string& name, bool enable, bool reset, bool set) {
    GateType t;
    t.name = name;
    t.category = GateCategory::Ff;
    t.pins.push_back(in("D"));
    t.pins.push_back(in("C", PinRole::Clock));
    if (enable)
        t.pins.push_back(in("E", PinRole::Enable));
    if (reset)
        t.pins.push_back(in("R", PinRole::Reset));
    if (set)
        t.pins.push_back(in("S", PinRole::Set));
    t.pins.push_back(out("Q"));
    return t;
}

// Simplified synchronous 256x16 1R1W block RAM shared by both FPGA-ish
// libraries. INIT is optional (uninitialized locations read X).
GateType make_bram(const std::string& name) {
    GateType t;
    t.name = name;
    t.category = GateCategory::Bram;
    t.pins.push_back(in("CLK", PinRole::Clock));
    t.pins.push_back(in("WE", PinRole::Enable));
    add_bus_pins(t, "WADDR", 8, PinDir::In, PinRole::Address);
    add_bus_pins(t, "WDATA", 16, PinDir::In, PinRole::Data);
    add_bus_pins(t, "RADDR", 8, PinDir::In, PinRole::Address);
    add_bus_pins(t, "RDATA", 16, PinDir::Out, PinRole::Data);
    t.config_keys = {{"INIT", 256 * 16}};
    return t;
}

// Simplified multiply-accumulate DSP: on each enabled clock edge the 32-bit
// accumulator adds A*B; RST clears it synchronously. O mirrors the
// accumulator.
GateType make_mac(const std::string& name) {
    GateType t;
    t.name = name;
    t.category = GateCategory::Dsp;
    t.pins.push_back(in("CLK", PinRole::Clock));
    t.pins.push_back(in("CE", PinRole::Enable));
    t.pins.push_back(in("RST", PinRole::Reset));
    add_bus_pins(t, "A", 16, PinDir::In, PinRole::Data);
    add_bus_pins(t, "B", 16, PinDir::In, PinRole::Data);
    add_bus_pins(t, "O", 32, PinDir::Out, PinRole::Data);
    return t;
}

// Primitive combinational types are part of every library: decomposition
// rewrites architecture netlists into them in place.
void add_primitive_types(GateLibrary& lib) {
    {
        GateType t;
        t.name = "CONST0";
        t.category = GateCategory::Constant;
        t.pins.push_back(out("Y"));
        lib.add(t);
        t.name = "CONST1";
        lib.add(t);
    }
    auto comb = [&](const std::string& name, size_t inputs) {
        GateType t;
        t.name = name;
        t.category = GateCategory::PrimitiveComb;
        const char* names[] = {"A", "B", "C"};
        for (size_t i = 0; i < inputs; i++)
            t.pins.push_back(in(names[i]));
        t.pins.push_back(out("Y"));
        lib.add(t);
    };
    comb("BUF", 1);
    comb("INV", 1);
    comb("AND2", 2);
    comb("OR2", 2);
    comb("XOR2", 2);
    comb("XNOR2", 2);
    {
        // Y = S ? B : A
        GateType t;
        t.name = "MUX2";
        t.category = GateCategory::PrimitiveComb;
        t.pins.push_back(in("S", PinRole::Select));
        t.pins.push_back(in("A"));
        t.pins.push_back(in("B"));
        t.pins.push_back(out("Y"));
        lib.add(t);
    }
}

GateLibrary make_primitive() {
    GateLibrary lib("primitive");
    add_primitive_types(lib);
    return lib;
}

GateLibrary make_ice40() {
    GateLibrary lib("ice40-like");
    add_primitive_types(lib);
    lib.add(make_lut("LUT4", 4));
    {
        // CO = majority(I0, I1, CI)
        GateType t;
        t.name = "CARRY";
        t.category = GateCategory::Carry;
        t.pins.push_back(in("I0"));
        t.pins.push_back(in("I1"));
        t.pins.push_back(in("CI", PinRole::CarryIn));
        t.pins.push_back(out("CO", PinRole::CarryOut));
        lib.add(t);
    }
    lib.add(make_ff("DFF", false, false, false));
    lib.add(make_ff("DFFE", true, false, false));
    lib.add(make_ff("DFFR", false, true, false));  // sync reset
    lib.add(make_ff("DFFER", true, true, false));
    lib.add(make_ff("DFFS", false, false, true));  // sync set
    lib.add(make_ff("DFFES", true, false, true));
    lib.add(make_bram("BRAM"));
    lib.add(make_mac("MAC16"));
    return lib;
}

GateLibrary make_x7() {
    GateLibrary lib("x7-like");
    add_primitive_types(lib);
    for (size_t k = 1; k <= 6; k++)
        lib.add(make_lut("LUT" + std::to_string(k), k));
    {
        // Per bit i: ci = (i == 0 ? CI | CYINIT : CO[i-1]);
        //            O[i] = S[i] ^ ci; CO[i] = S[i] ? ci : DI[i]
        GateType t;
        t.name = "CARRY4";
        t.category = GateCategory::Carry;
        t.pins.push_back(in("CI", PinRole::CarryIn));
        t.pins.push_back(in("CYINIT", PinRole::CarryIn));
        add_bus_pins(t, "S", 4, PinDir::In, PinRole::Data);
        add_bus_pins(t, "DI", 4, PinDir::In, PinRole::Data);
        add_bus_pins(t, "O", 4, PinDir::Out, PinRole::Data);
        for (const auto& nm : bus("CO", 4))
            t.pins.push_back({nm, PinDir::Out, PinRole::CarryOut});
        t.pin_groups.push_back({"CO", bus("CO", 4), true});
        lib.add(t);
    }
    {
        auto x7ff = [&](const std::string& name, PinRole ctrl_role, const std::string& ctrl_pin) {
            GateType t;
            t.name = name;
            t.category = GateCategory::Ff;
            t.pins.push_back(in("D"));
            t.pins.push_back(in("C", PinRole::Clock));
            t.pins.push_back(in("CE", PinRole::Enable));
            t.pins.push_back(in(ctrl_pin, ctrl_role));
            t.pins.push_back(out("Q"));
            lib.add(t);
        };
        x7ff("FDRE", PinRole::Reset, "R");    // sync reset
        x7ff("FDSE", PinRole::Set, "S");      // sync set
        x7ff("FDCE", PinRole::Reset, "CLR");  // async clear
        x7ff("FDPE", PinRole::Set, "PRE");    // async preset
    }
    lib.add(make_bram("RAMB"));
    lib.add(make_mac("DSP_MAC"));
    return lib;
}

} // namespace

const GateLibrary& builtin_library(const std::string& name) {
    static std::map<std::string, GateLibrary> libs;
    static std::once_flag once;
    std::call_once(once, [] {
        libs.emplace("primitive", make_primitive());
        libs.emplace("ice40-like", make_ice40());
        libs.emplace("x7-like", make_x7());
    });
    auto it = libs.find(name);
    if (it == libs.end())
        throw std::invalid_argument("unknown library '" + name + "'");
    return it->second;
}

std::vector<std::string> builtin_library_names() {
    return {"ice40-like", "x7-like", "primitive"};
}

} // namespace nlre
