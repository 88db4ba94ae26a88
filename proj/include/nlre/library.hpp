#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace nlre {

enum class GateCategory {
    Lut,
    Carry,
    Ff,
    Bram,
    Dsp,
    PrimitiveComb,
    Io,
    Constant,
};

enum class PinDir { In, Out };

enum class PinRole {
    Data,
    Select,
    Enable,
    Clock,
    Reset,
    Set,
    CarryIn,
    CarryOut,
    Address,
    None,
};

bool is_sequential(GateCategory c);
bool is_combinational(GateCategory c);
bool is_control_role(PinRole r);
const char* to_string(GateCategory c);
const char* to_string(PinRole r);

struct PinSpec {
    std::string name;
    PinDir dir = PinDir::In;
    PinRole role = PinRole::Data;
};

/// Named ordered list of pins forming one word on a gate type, e.g. the
/// 16 RDATA pins of a BRAM. `ascending` declares whether the listed order
/// runs LSB-to-MSB; descending groups are normalized to ascending when
/// bit-order seeds are derived from them.
struct PinGroupSpec {
    std::string name;
    std::vector<std::string> pins;
    bool ascending = true;
};

struct GateType {
    std::string name;
    GateCategory category = GateCategory::PrimitiveComb;
    std::vector<PinSpec> pins;
    std::vector<PinGroupSpec> pin_groups;
    /// Per-instance configuration keys and their required bit widths
    /// (e.g. {"INIT", 16} for a LUT4). Width 0 means free-size.
    std::vector<std::pair<std::string, size_t>> config_keys;

    int pin_index(const std::string& pin_name) const;
    const PinSpec& pin(size_t idx) const { return pins.at(idx); }
    std::vector<int> input_pins() const;
    std::vector<int> output_pins() const;
    std::optional<size_t> config_width(const std::string& key) const;
    int clock_pin() const; // -1 if none
};

class GateLibrary {
public:
    GateLibrary() = default;
    explicit GateLibrary(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    const GateType* find(const std::string& type_name) const;
    const GateType& get(const std::string& type_name) const;
    const std::vector<GateType>& types() const { return types_; }

    void add(GateType t);

private:
    std::string name_;
    std::vector<GateType> types_;
};

/// Built-in libraries: "ice40-like", "x7-like", "primitive". Throws on an
/// unknown name. The returned object is a process-lifetime singleton.
const GateLibrary& builtin_library(const std::string& name);

/// All built-in library names, in a stable order.
std::vector<std::string> builtin_library_names();

} // namespace nlre
