#include "nlre/io.hpp"

#include <cctype>
#include <optional>
#include <sstream>

namespace nlre {

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End } kind = End;
    std::string text;
    size_t line = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw IoError("verilog:" + std::to_string(tok_.line) + ": " + msg);
    }

private:
    void advance() {
        skip_space();
        tok_ = Token{};
        tok_.line = line_;
        if (pos_ >= text_.size())
            return;
        char c = text_[pos_];
        if (c == '\\') {
            // Escaped identifier: up to the next whitespace.
            size_t start = ++pos_;
            while (pos_ < text_.size() && !isspace(uint8_t(text_[pos_])))
                pos_++;
            tok_.kind = Token::Ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (isalpha(uint8_t(c)) || c == '_' || c == '$') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (isalnum(uint8_t(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '$'))
                pos_++;
            tok_.kind = Token::Ident;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        if (isdigit(uint8_t(c)) || c == '\'') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (isalnum(uint8_t(text_[pos_])) || text_[pos_] == '\'' || text_[pos_] == '_'))
                pos_++;
            tok_.kind = Token::Number;
            tok_.text = text_.substr(start, pos_ - start);
            return;
        }
        tok_.kind = Token::Punct;
        tok_.text = std::string(1, c);
        pos_++;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                line_++;
                pos_++;
            } else if (isspace(uint8_t(c))) {
                pos_++;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    pos_++;
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                pos_ += 2;
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
                    if (text_[pos_] == '\n')
                        line_++;
                    pos_++;
                }
                pos_ += 2;
            } else if (c == '(' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                // Synthesis attribute, skipped.
                pos_ += 2;
                while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == ')')) {
                    if (text_[pos_] == '\n')
                        line_++;
                    pos_++;
                }
                pos_ += 2;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    size_t line_ = 1;
    Token tok_;
};

const char* kBehavioral[] = {"always", "always_ff", "always_comb", "initial", "if",
                             "case",   "for",       "while",       "reg",     "function",
                             "task",   "generate"};

struct Parser {
    Lexer lex;
    const GateLibrary& library;
    NetlistBuilder builder;
    std::map<std::string, NetId> nets;
    std::map<std::string, std::pair<int, int>> vectors; // name -> (msb, lsb)
    std::vector<std::string> header_ports;
    int assign_counter = 0;

    Parser(const std::string& text, const GateLibrary& lib) : lex(text), library(lib), builder(&lib) {}

    void expect_punct(const std::string& p) {
        Token t = lex.next();
        if (t.kind != Token::Punct || t.text != p)
            lex.fail("expected '" + p + "', got '" + t.text + "'");
    }

    bool accept_punct(const std::string& p) {
        if (lex.peek().kind == Token::Punct && lex.peek().text == p) {
            lex.next();
            return true;
        }
        return false;
    }

    std::string expect_ident() {
        Token t = lex.next();
        if (t.kind != Token::Ident)
            lex.fail("expected identifier, got '" + t.text + "'");
        return t.text;
    }

    void check_behavioral(const std::string& word) {
        for (const char* kw : kBehavioral)
            if (word == kw)
                lex.fail("behavioral construct '" + word + "' not supported");
    }

    NetId net_for(const std::string& name) {
        auto it = nets.find(name);
        if (it != nets.end())
            return it->second;
        NetId n = builder.add_net(name); // implicit wire
        nets.emplace(name, n);
        return n;
    }

    long parse_int() {
        Token t = lex.next();
        if (t.kind != Token::Number)
            lex.fail("expected number, got '" + t.text + "'");
        return std::stol(t.text);
    }

    // Declared range, e.g. [15:0]; returns (msb, lsb).
    std::optional<std::pair<int, int>> try_range() {
        if (!accept_punct("["))
            return std::nullopt;
        long msb = parse_int();
        expect_punct(":");
        long lsb = parse_int();
        expect_punct("]");
        return std::make_pair(int(msb), int(lsb));
    }

    void declare(const std::string& name, std::optional<std::pair<int, int>> range, bool in, bool out) {
        if (range) {
            vectors[name] = *range;
            int lo = std::min(range->first, range->second);
            int hi = std::max(range->first, range->second);
            for (int i = lo; i <= hi; i++) {
                std::string bit = name + "[" + std::to_string(i) + "]";
                if (!nets.count(bit))
                    nets.emplace(bit, builder.add_net(bit, in, out));
                else if (out)
                    builder.mark_global_output(nets[bit]);
            }
        } else {
            if (!nets.count(name))
                nets.emplace(name, builder.add_net(name, in, out));
            else if (out)
                builder.mark_global_output(nets[name]);
        }
    }

    // A net expression: identifier, identifier[i], or a 1-bit literal.
    NetId parse_net_expr() {
        const Token& t = lex.peek();
        if (t.kind == Token::Number) {
            std::string lit = lex.next().text;
            if (lit == "1'b0" || lit == "1'h0" || lit == "1'd0")
                return builder.const_net(false);
            if (lit == "1'b1" || lit == "1'h1" || lit == "1'd1")
                return builder.const_net(true);
            lex.fail("only 1-bit literals may connect to pins, got '" + lit + "'");
        }
        if (t.kind == Token::Punct && t.text == "{")
            lex.fail("concatenation not supported");
        std::string name = expect_ident();
        check_behavioral(name);
        if (accept_punct("[")) {
            long idx = parse_int();
            expect_punct("]");
            return net_for(name + "[" + std::to_string(idx) + "]");
        }
        if (vectors.count(name))
            lex.fail("vector '" + name + "' used without a bit select");
        return net_for(name);
    }

    BitVec parse_value(size_t expected_width) {
        Token t = lex.next();
        if (t.kind != Token::Number)
            lex.fail("expected parameter value, got '" + t.text + "'");
        std::string s = t.text;
        s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
        size_t tick = s.find('\'');
        if (tick == std::string::npos) {
            // Plain decimal.
            unsigned long long v = std::stoull(s);
            size_t w = expected_width ? expected_width : 64;
            BitVec bv(w);
            for (size_t i = 0; i < w && i < 64; i++)
                if ((v >> i) & 1)
                    bv.set(i, true);
            return bv;
        }
        size_t width = std::stoul(s.substr(0, tick));
        if (expected_width && width != expected_width)
            lex.fail("parameter width " + std::to_string(width) + ", expected " + std::to_string(expected_width));
        char base = char(tolower(s[tick + 1]));
        std::string digits = s.substr(tick + 2);
        BitVec bv(width);
        if (base == 'h') {
            bv = BitVec::from_hex(digits, width);
        } else if (base == 'b') {
            size_t bit = 0;
            for (auto it = digits.rbegin(); it != digits.rend(); ++it, ++bit) {
                if (*it == '1') {
                    if (bit >= width)
                        lex.fail("binary literal wider than declared width");
                    bv.set(bit, true);
                } else if (*it != '0') {
                    lex.fail("bad binary digit");
                }
            }
        } else if (base == 'd') {
            unsigned long long v = std::stoull(digits);
            for (size_t i = 0; i < width && i < 64; i++)
                if ((v >> i) & 1)
                    bv.set(i, true);
        } else {
            lex.fail(std::string("unsupported literal base '") + base + "'");
        }
        return bv;
    }

    void parse_module() {
        std::string kw = expect_ident();
        if (kw != "module")
            lex.fail("expected 'module'");
        expect_ident(); // module name
        if (accept_punct("(")) {
            if (!accept_punct(")")) {
                do {
                    if (lex.peek().kind == Token::Ident &&
                        (lex.peek().text == "input" || lex.peek().text == "output" || lex.peek().text == "inout")) {
                        // ANSI port declaration.
                        std::string dir = lex.next().text;
                        if (lex.peek().kind == Token::Ident && lex.peek().text == "wire")
                            lex.next();
                        auto range = try_range();
                        std::string name = expect_ident();
                        declare(name, range, dir == "input", dir != "input");
                    } else {
                        header_ports.push_back(expect_ident());
                    }
                } while (accept_punct(","));
                expect_punct(")");
            }
        }
        expect_punct(";");

        while (true) {
            const Token& t = lex.peek();
            if (t.kind == Token::End)
                lex.fail("missing 'endmodule'");
            if (t.kind != Token::Ident)
                lex.fail("unexpected '" + t.text + "'");
            if (t.text == "endmodule") {
                lex.next();
                break;
            }
            check_behavioral(t.text);
            if (t.text == "input" || t.text == "output" || t.text == "inout" || t.text == "wire")
                parse_decl();
            else if (t.text == "assign")
                parse_assign();
            else if (t.text == "defparam")
                parse_defparam();
            else
                parse_instance();
        }
    }

    void parse_decl() {
        std::string dir = lex.next().text;
        bool in = dir == "input";
        bool out = dir == "output" || dir == "inout";
        if (lex.peek().kind == Token::Ident && lex.peek().text == "wire")
            lex.next();
        auto range = try_range();
        do {
            std::string name = expect_ident();
            declare(name, range, in, out);
        } while (accept_punct(","));
        expect_punct(";");
    }

    void parse_assign() {
        lex.next(); // assign
        NetId lhs = parse_net_expr();
        expect_punct("=");
        NetId rhs = parse_net_expr();
        expect_punct(";");
        GateId g = builder.add_gate("BUF", "$assign$" + std::to_string(assign_counter++));
        builder.connect(g, "A", rhs);
        builder.connect(g, "Y", lhs);
    }

    std::map<std::string, GateId> instances;

    void parse_defparam() {
        lex.next(); // defparam
        std::string inst = expect_ident();
        expect_punct(".");
        std::string key = expect_ident();
        expect_punct("=");
        auto it = instances.find(inst);
        if (it == instances.end())
            lex.fail("defparam for unknown instance '" + inst + "'");
        const Gate& g = builder_gate(it->second);
        auto width = g.type->config_width(key);
        if (!width)
            lex.fail("type '" + g.type->name + "' has no parameter '" + key + "'");
        builder.set_config(it->second, key, parse_value(*width));
        expect_punct(";");
    }

    // NetlistBuilder keeps gates private; we only need the type for widths.
    const Gate& builder_gate(GateId id) { return builder.gate_at(id); }

    void parse_instance() {
        std::string type_name = expect_ident();
        const GateType* type = library.find(type_name);
        if (!type)
            lex.fail("unresolved instance type '" + type_name + "'");

        std::vector<std::pair<std::string, BitVec>> params;
        if (accept_punct("#")) {
            expect_punct("(");
            do {
                expect_punct(".");
                std::string key = expect_ident();
                expect_punct("(");
                auto width = type->config_width(key);
                if (!width)
                    lex.fail("type '" + type_name + "' has no parameter '" + key + "'");
                params.emplace_back(key, parse_value(*width));
                expect_punct(")");
            } while (accept_punct(","));
            expect_punct(")");
        }

        std::string inst = expect_ident();
        GateId g = builder.add_gate(type_name, inst);
        instances[inst] = g;
        for (auto& [k, v] : params)
            builder.set_config(g, k, std::move(v));

        expect_punct("(");
        do {
            expect_punct(".");
            std::string pin = expect_ident();
            expect_punct("(");
            if (!accept_punct(")")) { // unconnected pin: .CO()
                NetId n = parse_net_expr();
                builder.connect(g, pin, n);
                expect_punct(")");
            }
        } while (accept_punct(","));
        expect_punct(")");
        expect_punct(";");
    }
};

} // namespace

Netlist parse_structural_verilog(const std::string& text, const GateLibrary& library) {
    Parser p(text, library);
    p.parse_module();
    try {
        return std::move(p.builder).build();
    } catch (const NetlistError& e) {
        throw IoError(e.what());
    }
}

} // namespace nlre
