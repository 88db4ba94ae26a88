#include "nlre/script.hpp"

#include <cctype>
#include <vector>

namespace nlre {

namespace {

struct Tok {
    enum Kind { Ident, Number, Op, End } kind = End;
    std::string text;
    uint64_t value = 0;
};

struct Lexer {
    const std::string& line;
    size_t pos = 0;

    Tok next() {
        while (pos < line.size() && isspace(uint8_t(line[pos])))
            pos++;
        if (pos >= line.size())
            return {};
        char c = line[pos];
        if (isalpha(uint8_t(c)) || c == '_' || c == '$') {
            size_t start = pos;
            while (pos < line.size() && (isalnum(uint8_t(line[pos])) || line[pos] == '_' || line[pos] == '$'))
                pos++;
            return {Tok::Ident, line.substr(start, pos - start), 0};
        }
        if (isdigit(uint8_t(c))) {
            size_t start = pos;
            int base = 10;
            if (c == '0' && pos + 1 < line.size() && (line[pos + 1] == 'x' || line[pos + 1] == 'X')) {
                base = 16;
                pos += 2;
            }
            while (pos < line.size() && isalnum(uint8_t(line[pos])))
                pos++;
            std::string text = line.substr(start, pos - start);
            uint64_t v = std::stoull(base == 16 ? text.substr(2) : text, nullptr, base);
            return {Tok::Number, text, v};
        }
        if ((c == '<' || c == '>') && pos + 1 < line.size() && line[pos + 1] == c) {
            pos += 2;
            return {Tok::Op, std::string(2, c), 0};
        }
        pos++;
        return {Tok::Op, std::string(1, c), 0};
    }
};

struct Parser {
    Lexer lex;
    Tok cur;
    const std::map<std::string, uint64_t>& vars;
    const std::function<std::optional<uint64_t>(const std::string&)>& resolve;

    Parser(const std::string& line, const std::map<std::string, uint64_t>& v,
           const std::function<std::optional<uint64_t>(const std::string&)>& r)
        : lex{line}, vars(v), resolve(r) {
        cur = lex.next();
    }

    void advance() { cur = lex.next(); }

    bool accept(const char* op) {
        if (cur.kind == Tok::Op && cur.text == op) {
            advance();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) { throw ScriptError("script: " + what); }

    uint64_t primary() {
        if (cur.kind == Tok::Number) {
            uint64_t v = cur.value;
            advance();
            return v;
        }
        if (cur.kind == Tok::Ident) {
            std::string name = cur.text;
            advance();
            auto it = vars.find(name);
            if (it != vars.end())
                return it->second;
            auto r = resolve(name);
            if (!r)
                fail("unresolved symbol '" + name + "'");
            return *r;
        }
        if (accept("(")) {
            uint64_t v = expr();
            if (!accept(")"))
                fail("expected ')'");
            return v;
        }
        if (accept("~"))
            return ~primary();
        if (accept("-"))
            return uint64_t(0) - primary();
        fail("unexpected token '" + cur.text + "'");
    }

    uint64_t mul_level() {
        uint64_t v = primary();
        while (cur.kind == Tok::Op && cur.text == "*") {
            advance();
            v *= primary();
        }
        return v;
    }

    uint64_t add_level() {
        uint64_t v = mul_level();
        while (cur.kind == Tok::Op && (cur.text == "+" || cur.text == "-")) {
            bool plus = cur.text == "+";
            advance();
            uint64_t r = mul_level();
            v = plus ? v + r : v - r;
        }
        return v;
    }

    uint64_t shift_level() {
        uint64_t v = add_level();
        while (cur.kind == Tok::Op && (cur.text == "<<" || cur.text == ">>")) {
            bool left = cur.text == "<<";
            advance();
            uint64_t r = add_level();
            v = r >= 64 ? 0 : (left ? v << r : v >> r);
        }
        return v;
    }

    uint64_t and_level() {
        uint64_t v = shift_level();
        while (accept("&"))
            v &= shift_level();
        return v;
    }

    uint64_t xor_level() {
        uint64_t v = and_level();
        while (accept("^"))
            v ^= and_level();
        return v;
    }

    uint64_t expr() {
        uint64_t v = xor_level();
        while (accept("|"))
            v |= xor_level();
        return v;
    }
};

} // namespace

std::map<std::string, uint64_t> run_script(
    const std::string& text, const std::function<std::optional<uint64_t>(const std::string&)>& resolve) {
    std::map<std::string, uint64_t> vars;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            blank &= isspace(uint8_t(c)) != 0;
        if (blank)
            continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ScriptError("script: statement without '=': " + line);
        std::string lhs = line.substr(0, eq);
        // trim
        while (!lhs.empty() && isspace(uint8_t(lhs.back())))
            lhs.pop_back();
        while (!lhs.empty() && isspace(uint8_t(lhs.front())))
            lhs.erase(lhs.begin());
        if (lhs.empty())
            throw ScriptError("script: empty assignment target");
        Parser p(line.substr(eq + 1), vars, resolve);
        uint64_t v = p.expr();
        if (p.cur.kind != Tok::End)
            throw ScriptError("script: trailing tokens after expression");
        vars[lhs] = v;
    }
    return vars;
}

} // namespace nlre
