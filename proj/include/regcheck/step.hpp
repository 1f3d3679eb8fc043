#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regcheck::step {

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// One ISO 10303-21 attribute value.
struct StepValue {
    enum class Kind { Integer, Real, Text, Enum, Ref, List, Unset, Derived, Typed };

    Kind kind = Kind::Unset;
    std::int64_t integer = 0;   // Integer, Ref (instance number)
    double real = 0.0;          // Real
    std::string text;           // Text, Enum (uppercase tag), Typed (type name)
    std::vector<StepValue> items;  // List; Typed holds its single value in items[0]

    static StepValue unset() { return {}; }
    static StepValue derived();
    static StepValue of_integer(std::int64_t v);
    static StepValue of_real(double v);
    static StepValue of_text(std::string v);
    static StepValue of_enum(std::string tag);
    static StepValue of_ref(std::int64_t id);
    static StepValue of_list(std::vector<StepValue> items);
    static StepValue of_typed(std::string name, StepValue inner);

    bool is(Kind k) const { return kind == k; }
    bool operator==(const StepValue& o) const;
};

struct StepEntity {
    std::int64_t id = 0;       // positive instance number
    std::string name;          // uppercase keyword
    std::vector<StepValue> args;

    bool operator==(const StepEntity& o) const {
        return id == o.id && name == o.name && args == o.args;
    }
};

struct StepFile {
    std::string schema;  // first FILE_SCHEMA identifier, "" if absent
    std::map<std::int64_t, StepEntity> entities;
    std::vector<std::string> warnings;
};

// Parses a complete STEP physical file. Unknown entity names are kept
// verbatim; dangling references are tolerated with a recorded warning.
// Malformed syntax and duplicate instance ids throw ParseError.
StepFile parse_step(std::string_view source);

// Positional access without coercion; out of range throws naming the
// entity id and index.
const StepValue& entity_arg(const StepEntity& entity, std::size_t index);

std::string schema_of(const StepFile& file);

// Round-trippable serialization of the entity table (ids ascending).
std::string write_step(const StepFile& file);

}  // namespace regcheck::step
