#include "photex/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace photex::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ParseError{what, line};
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    char get() {
        const char c = s[pos++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
};

void skip_to_eol(Cursor& cur) {
    cur.skip_ws_inline();
    if (cur.done()) return;
    if (cur.peek() == '#') {
        while (!cur.done() && cur.peek() != '\n') cur.get();
    }
    if (!cur.done()) {
        if (cur.peek() != '\n') fail(cur.line, "unexpected trailing characters");
        cur.get();
    }
}

std::string parse_bare_key(Cursor& cur) {
    std::string key;
    while (!cur.done() && is_bare_key_char(cur.peek())) key.push_back(cur.get());
    if (key.empty()) fail(cur.line, "expected a key");
    return key;
}

std::vector<std::string> parse_key_path(Cursor& cur) {
    std::vector<std::string> path;
    path.push_back(parse_bare_key(cur));
    while (!cur.done() && cur.peek() == '.') {
        cur.get();
        path.push_back(parse_bare_key(cur));
    }
    return path;
}

std::string parse_string(Cursor& cur) {
    const int line = cur.line;
    cur.get();  // opening quote
    std::string out;
    while (true) {
        if (cur.done() || cur.peek() == '\n') fail(line, "unterminated string");
        const char c = cur.get();
        if (c == '"') return out;
        if (c == '\\') {
            if (cur.done()) fail(line, "unterminated escape");
            const char e = cur.get();
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                default: fail(line, std::string("unsupported escape \\") + e);
            }
        } else {
            out.push_back(c);
        }
    }
}

Value parse_scalar(Cursor& cur);

Value parse_array(Cursor& cur) {
    Value v;
    v.kind = Value::Kind::kArray;
    v.line = cur.line;
    cur.get();  // '['
    cur.skip_ws_inline();
    while (true) {
        if (cur.done() || cur.peek() == '\n') fail(v.line, "unterminated array");
        if (cur.peek() == ']') {
            cur.get();
            return v;
        }
        v.array.push_back(parse_scalar(cur));
        cur.skip_ws_inline();
        if (!cur.done() && cur.peek() == ',') {
            cur.get();
            cur.skip_ws_inline();
        }
    }
}

Value parse_scalar(Cursor& cur) {
    cur.skip_ws_inline();
    if (cur.done()) fail(cur.line, "expected a value");
    Value v;
    v.line = cur.line;
    const char c = cur.peek();
    if (c == '"') {
        v.kind = Value::Kind::kString;
        v.str = parse_string(cur);
        return v;
    }
    if (c == '[') return parse_array(cur);

    std::string tok;
    while (!cur.done() && cur.peek() != '\n' && cur.peek() != '#' &&
           cur.peek() != ',' && cur.peek() != ']' && cur.peek() != ' ' &&
           cur.peek() != '\t') {
        tok.push_back(cur.get());
    }
    if (tok == "true" || tok == "false") {
        v.kind = Value::Kind::kBool;
        v.boolean = tok == "true";
        return v;
    }
    if (tok.empty()) fail(v.line, "expected a value");

    const bool looks_float = tok.find_first_of(".eE") != std::string::npos ||
                             tok == "inf" || tok == "-inf" || tok == "nan";
    if (!looks_float) {
        std::int64_t iv = 0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
        if (ec == std::errc() && p == tok.data() + tok.size()) {
            v.kind = Value::Kind::kInteger;
            v.integer = iv;
            v.number = static_cast<double>(iv);
            return v;
        }
    }
    {
        double dv = 0.0;
        const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dv);
        if (ec == std::errc() && p == tok.data() + tok.size()) {
            v.kind = Value::Kind::kFloat;
            v.number = dv;
            return v;
        }
    }
    fail(v.line, "cannot parse value '" + tok + "'");
}

Value* descend(Value* node, const std::string& key, int line) {
    auto [it, inserted] = node->table.try_emplace(key);
    Value& child = it->second;
    if (inserted) {
        child.kind = Value::Kind::kTable;
        child.line = line;
    }
    if (child.is_array()) {
        if (child.array.empty()) fail(line, "empty table array '" + key + "'");
        return &child.array.back();
    }
    if (!child.is_table()) fail(line, "'" + key + "' is not a table");
    return &child;
}

}  // namespace

const Value* Value::find(const std::string& key) const {
    const auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
}

double Value::as_number() const {
    if (kind == Kind::kFloat || kind == Kind::kInteger) return number;
    throw ParseError{"value is not a number", line};
}

Value parse(const std::string& text) {
    Value root;
    root.kind = Value::Kind::kTable;
    Value* current = &root;

    Cursor cur{text};
    while (!cur.done()) {
        cur.skip_ws_inline();
        if (cur.done()) break;
        const char c = cur.peek();
        if (c == '\n') {
            cur.get();
            continue;
        }
        if (c == '#') {
            skip_to_eol(cur);
            continue;
        }
        if (c == '[') {
            const int line = cur.line;
            cur.get();
            const bool is_array = !cur.done() && cur.peek() == '[';
            if (is_array) cur.get();
            cur.skip_ws_inline();
            const auto path = parse_key_path(cur);
            cur.skip_ws_inline();
            if (cur.done() || cur.get() != ']') fail(line, "expected ']'");
            if (is_array) {
                if (cur.done() || cur.get() != ']') fail(line, "expected ']]'");
            }
            skip_to_eol(cur);

            Value* node = &root;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                node = descend(node, path[i], line);
            }
            const std::string& leaf = path.back();
            auto [it, inserted] = node->table.try_emplace(leaf);
            Value& target = it->second;
            if (is_array) {
                if (inserted) {
                    target.kind = Value::Kind::kArray;
                    target.line = line;
                } else if (!target.is_array()) {
                    fail(line, "'" + leaf + "' is already a non-array table");
                }
                Value elem;
                elem.kind = Value::Kind::kTable;
                elem.line = line;
                target.array.push_back(std::move(elem));
                current = &target.array.back();
            } else {
                if (inserted) {
                    target.kind = Value::Kind::kTable;
                    target.line = line;
                } else if (!target.is_table()) {
                    fail(line, "table '" + leaf + "' conflicts with an existing value");
                }
                current = &target;
            }
            continue;
        }

        // key = value
        const int line = cur.line;
        const std::string key = parse_bare_key(cur);
        cur.skip_ws_inline();
        if (cur.done() || cur.get() != '=') fail(line, "expected '=' after key '" + key + "'");
        Value v = parse_scalar(cur);
        v.line = line;
        skip_to_eol(cur);
        if (!current->table.try_emplace(key, std::move(v)).second) {
            fail(line, "duplicate key '" + key + "'");
        }
    }
    return root;
}

Value parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError{"cannot open '" + path + "'", 0};
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace photex::toml
