// Minimal TOML-subset reader for scenario configs. Supported: comments,
// [table], [[array-of-tables]], bare keys, strings with basic escapes,
// integers, floats, booleans and single-line arrays of scalars. Values keep
// the line they were defined on for diagnostics.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace photex::toml {

struct Value {
    enum class Kind { kTable, kArray, kString, kInteger, kFloat, kBool };

    Kind kind = Kind::kTable;
    std::map<std::string, Value, std::less<>> table;
    std::vector<Value> array;
    std::string str;
    std::int64_t integer = 0;
    double number = 0.0;
    bool boolean = false;
    int line = 0;

    bool is_table() const { return kind == Kind::kTable; }
    bool is_array() const { return kind == Kind::kArray; }
    const Value* find(const std::string& key) const;
    // numeric coercion: integers promote to double
    double as_number() const;
};

struct ParseError {
    std::string message;
    int line = 0;
};

// Throws ParseError on malformed input.
Value parse(const std::string& text);
Value parse_file(const std::string& path);

}  // namespace photex::toml
