#include "cep/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cep/errors.hpp"

namespace cep {

namespace {

using nlohmann::json;

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    int line = 1;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    char take() {
        const char c = s[i++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_ws_inline() {
        while (!done() && (peek() == ' ' || peek() == '\t')) take();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("toml: line " + std::to_string(line) + ": " + msg);
    }
};

json parse_value(Cursor& c);

std::string parse_bare_key(Cursor& c) {
    std::string key;
    while (!c.done() &&
           (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' ||
            c.peek() == '-')) {
        key += c.take();
    }
    if (key.empty()) c.fail("expected key");
    return key;
}

std::string parse_string(Cursor& c) {
    c.take();  // opening quote
    std::string out;
    while (!c.done() && c.peek() != '"') {
        char ch = c.take();
        if (ch == '\\' && !c.done()) {
            const char esc = c.take();
            switch (esc) {
                case 'n': ch = '\n'; break;
                case 't': ch = '\t'; break;
                case '"': ch = '"'; break;
                case '\\': ch = '\\'; break;
                default: c.fail("unsupported escape");
            }
        }
        out += ch;
    }
    if (c.done()) c.fail("unterminated string");
    c.take();  // closing quote
    return out;
}

json parse_number_or_bool(Cursor& c) {
    std::string tok;
    while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '}' &&
           c.peek() != '\n' && c.peek() != '#' && c.peek() != ' ' && c.peek() != '\t' &&
           c.peek() != '\r') {
        tok += c.take();
    }
    if (tok == "true") return json(true);
    if (tok == "false") return json(false);
    if (tok.empty()) c.fail("expected value");
    const bool is_float = tok.find_first_of(".eEnN") != std::string::npos ||
                          tok == "inf" || tok == "-inf";
    try {
        if (is_float) return json(std::stod(tok));
        std::size_t pos = 0;
        const long long v = std::stoll(tok, &pos);
        if (pos != tok.size()) return json(std::stod(tok));
        return json(v);
    } catch (const std::exception&) {
        c.fail("cannot parse value '" + tok + "'");
    }
}

json parse_array(Cursor& c) {
    c.take();  // '['
    json arr = json::array();
    for (;;) {
        // Arrays may span lines.
        while (!c.done() && (c.peek() == ' ' || c.peek() == '\t' || c.peek() == '\n' ||
                             c.peek() == '\r' || c.peek() == ',')) {
            c.take();
        }
        if (c.done()) c.fail("unterminated array");
        if (c.peek() == '#') {
            while (!c.done() && c.peek() != '\n') c.take();
            continue;
        }
        if (c.peek() == ']') {
            c.take();
            return arr;
        }
        arr.push_back(parse_value(c));
    }
}

json parse_inline_table(Cursor& c) {
    c.take();  // '{'
    json obj = json::object();
    for (;;) {
        c.skip_ws_inline();
        if (c.done()) c.fail("unterminated inline table");
        if (c.peek() == '}') {
            c.take();
            return obj;
        }
        if (c.peek() == ',') {
            c.take();
            continue;
        }
        const std::string key = parse_bare_key(c);
        c.skip_ws_inline();
        if (c.done() || c.take() != '=') c.fail("expected '=' in inline table");
        c.skip_ws_inline();
        obj[key] = parse_value(c);
    }
}

json parse_value(Cursor& c) {
    c.skip_ws_inline();
    if (c.done()) c.fail("expected value");
    const char ch = c.peek();
    if (ch == '"') return json(parse_string(c));
    if (ch == '[') return parse_array(c);
    if (ch == '{') return parse_inline_table(c);
    return parse_number_or_bool(c);
}

json* descend(json& root, const std::string& dotted, Cursor& c) {
    json* node = &root;
    std::string part;
    std::istringstream ss(dotted);
    while (std::getline(ss, part, '.')) {
        if (part.empty()) c.fail("empty table-name component");
        node = &(*node)[part];
        if (!node->is_object() && !node->is_null()) c.fail("table redefines a value");
        if (node->is_null()) *node = json::object();
    }
    return node;
}

} // namespace

json parse_toml(const std::string& text) {
    json root = json::object();
    json* table = &root;
    Cursor c{text};
    while (!c.done()) {
        c.skip_ws_inline();
        if (c.done()) break;
        const char ch = c.peek();
        if (ch == '\n' || ch == '\r') {
            c.take();
            continue;
        }
        if (ch == '#') {
            while (!c.done() && c.peek() != '\n') c.take();
            continue;
        }
        if (ch == '[') {
            c.take();
            std::string name;
            while (!c.done() && c.peek() != ']') name += c.take();
            if (c.done()) c.fail("unterminated table header");
            c.take();  // ']'
            table = descend(root, name, c);
            continue;
        }
        const std::string key = parse_bare_key(c);
        c.skip_ws_inline();
        if (c.done() || c.take() != '=') c.fail("expected '=' after key '" + key + "'");
        (*table)[key] = parse_value(c);
        c.skip_ws_inline();
        if (!c.done() && c.peek() == '#') {
            while (!c.done() && c.peek() != '\n') c.take();
        }
        if (!c.done() && c.peek() != '\n' && c.peek() != '\r') {
            c.fail("trailing content after value for key '" + key + "'");
        }
    }
    return root;
}

json parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_toml(ss.str());
}

} // namespace cep
