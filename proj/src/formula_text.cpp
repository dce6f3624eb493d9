#include "clw/formula_text.hpp"

#include <cctype>
#include <sstream>

#include "clw/errors.hpp"
#include "clw/modulus.hpp"

namespace clw {

namespace {

struct Token {
    enum Kind { LParen, RParen, Symbol, End } kind;
    std::string text;
    std::size_t pos;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ >= text_.size()) return {Token::End, "", pos_};
        const std::size_t start = pos_;
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            return {Token::LParen, "(", start};
        }
        if (c == ')') {
            ++pos_;
            return {Token::RParen, ")", start};
        }
        std::string sym;
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') break;
            sym.push_back(c);
            ++pos_;
        }
        return {Token::Symbol, sym, start};
    }

  private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

[[noreturn]] void syntax_error(std::size_t pos, const std::string& what) {
    throw Error(ErrorCode::SyntaxError, what + " at offset " + std::to_string(pos));
}

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

class Parser {
  public:
    Parser(const std::string& text, const Signature* sig) : lexer_(text), sig_(sig) { advance(); }

    FormulaPtr parse_toplevel() {
        FormulaPtr f = parse_expr();
        if (cur_.kind != Token::End) syntax_error(cur_.pos, "trailing input");
        return f;
    }

  private:
    void advance() { cur_ = lexer_.next(); }

    Token expect(Token::Kind kind, const char* what) {
        if (cur_.kind != kind) syntax_error(cur_.pos, std::string("expected ") + what);
        Token t = cur_;
        advance();
        return t;
    }

    std::string expect_identifier(const char* what) {
        Token t = expect(Token::Symbol, what);
        if (!is_identifier(t.text)) syntax_error(t.pos, std::string("invalid ") + what);
        return t.text;
    }

    Rat expect_rational(const char* what) {
        Token t = expect(Token::Symbol, what);
        auto q = parse_rational(t.text);
        if (!q) syntax_error(t.pos, std::string("invalid rational for ") + what);
        return *q;
    }

    FormulaPtr parse_expr() {
        expect(Token::LParen, "'('");
        Token head = expect(Token::Symbol, "operator");
        return parse_after_head(head);
    }

    FormulaPtr parse_after_head(const Token& head) {
        const std::string& op = head.text;
        if (op == "d" || op == "dhat") {
            std::string x = expect_identifier("variable");
            std::string y = expect_identifier("variable");
            expect(Token::RParen, "')'");
            return mk_dist(std::move(x), std::move(y), op == "dhat");
        }
        if (op == "pred") {
            Token name = expect(Token::Symbol, "predicate name");
            if (!is_identifier(name.text)) syntax_error(name.pos, "invalid predicate name");
            std::vector<std::string> args;
            while (cur_.kind == Token::Symbol) args.push_back(expect_identifier("variable"));
            expect(Token::RParen, "')'");
            if (sig_) {
                const PredicateDecl* decl = sig_->find(name.text);
                if (!decl) throw Error(ErrorCode::UnknownPredicate, name.text);
                if (decl->arity != args.size())
                    throw Error(ErrorCode::ArityMismatch, name.text + " expects " +
                                                              std::to_string(decl->arity) +
                                                              " arguments");
            }
            return mk_atom(name.text, std::move(args));
        }
        if (op == "const") {
            Rat v = expect_rational("constant");
            expect(Token::RParen, "')'");
            return mk_const(std::move(v));
        }
        if (op == "add" || op == "sub" || op == "min" || op == "max") {
            FormulaPtr f = parse_expr();
            FormulaPtr g = parse_expr();
            expect(Token::RParen, "')'");
            if (op == "add") return mk_add(f, g);
            if (op == "sub") return mk_sub(f, g);
            if (op == "min") return mk_min(f, g);
            return mk_max(f, g);
        }
        if (op == "scale") {
            Token factor_tok = cur_;
            Rat c = expect_rational("scale factor");
            if (c < 0) syntax_error(factor_tok.pos, "scale factor must be >= 0");
            FormulaPtr f = parse_expr();
            expect(Token::RParen, "')'");
            return mk_scale(std::move(c), f);
        }
        if (op == "abs") {
            FormulaPtr f = parse_expr();
            expect(Token::RParen, "')'");
            return mk_abs(f);
        }
        if (op == "sup" || op == "inf") {
            std::string var = expect_identifier("variable");
            FormulaPtr body = parse_expr();
            expect(Token::RParen, "')'");
            return op == "sup" ? mk_sup(std::move(var), body) : mk_inf(std::move(var), body);
        }
        if (op == "join" || op == "meet") return parse_family(op == "join", head.pos);
        syntax_error(head.pos, "unknown operator '" + op + "'");
    }

    FormulaPtr parse_family(bool join, std::size_t head_pos) {
        Family fam;
        bool have_declared = false;
        // The optional (mod ...) declaration and the first member both start
        // with '('; probe one list head to distinguish them.
        if (cur_.kind == Token::LParen) {
            advance();
            Token head = expect(Token::Symbol, "operator");
            if (head.text == "mod") {
                fam.declared = parse_mod_body();
                have_declared = true;
            } else {
                fam.members.push_back(parse_after_head(head));
            }
        }
        if (fam.members.empty() && cur_.kind == Token::Symbol && cur_.text == ":lower-bound-only") {
            fam.lower_bound_only = true;
            advance();
        }
        while (cur_.kind == Token::LParen) fam.members.push_back(parse_expr());
        expect(Token::RParen, "')'");
        if (fam.members.empty()) syntax_error(head_pos, "family needs at least one member");
        if (!have_declared) fam.declared = default_family_modulus(fam.members, sig_);
        return join ? mk_join(std::move(fam)) : mk_meet(std::move(fam));
    }

    ModulusVector parse_mod_body() {
        ModulusVector mv;
        expect(Token::LParen, "'(' (variable list)");
        while (cur_.kind == Token::LParen) {
            advance();
            std::string var = expect_identifier("variable");
            Rat lip = expect_rational("Lipschitz constant");
            if (lip < 0) throw Error(ErrorCode::InvalidArgument, "negative Lipschitz constant");
            expect(Token::RParen, "')'");
            if (!mv.lipschitz.emplace(var, std::move(lip)).second)
                throw Error(ErrorCode::InvalidArgument, "duplicate variable in mod declaration");
        }
        expect(Token::RParen, "')'");
        mv.value_bound = expect_rational("value bound");
        if (mv.value_bound < 0) throw Error(ErrorCode::InvalidArgument, "negative value bound");
        expect(Token::RParen, "')'");
        return mv;
    }

    Lexer lexer_;
    Token cur_{Token::End, "", 0};
    const Signature* sig_;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void print_family(const char* keyword, const Family& fam, std::ostream& os,
                  void (*print)(const FormulaPtr&, std::ostream&)) {
    os << '(' << keyword << " (mod (";
    bool first = true;
    for (const auto& [var, lip] : fam.declared.lipschitz) {
        if (!first) os << ' ';
        first = false;
        os << '(' << var << ' ' << rational_string(lip) << ')';
    }
    os << ") " << rational_string(fam.declared.value_bound) << ')';
    if (fam.lower_bound_only) os << " :lower-bound-only";
    for (const auto& m : fam.members) {
        os << ' ';
        print(m, os);
    }
    os << ')';
}

void print_rec(const FormulaPtr& f, std::ostream& os) {
    std::visit(
        overloaded{
            [&](const DistNode& n) {
                os << '(' << (n.truncated ? "dhat" : "d") << ' ' << n.x << ' ' << n.y << ')';
            },
            [&](const AtomNode& n) {
                os << "(pred " << n.pred;
                for (const auto& a : n.args) os << ' ' << a;
                os << ')';
            },
            [&](const ConstNode& n) { os << "(const " << rational_string(n.value) << ')'; },
            [&](const AddNode& n) {
                os << "(add ";
                print_rec(n.f, os);
                os << ' ';
                print_rec(n.g, os);
                os << ')';
            },
            [&](const SubNode& n) {
                os << "(sub ";
                print_rec(n.f, os);
                os << ' ';
                print_rec(n.g, os);
                os << ')';
            },
            [&](const ScaleNode& n) {
                os << "(scale " << rational_string(n.factor) << ' ';
                print_rec(n.f, os);
                os << ')';
            },
            [&](const MinNode& n) {
                os << "(min ";
                print_rec(n.f, os);
                os << ' ';
                print_rec(n.g, os);
                os << ')';
            },
            [&](const MaxNode& n) {
                os << "(max ";
                print_rec(n.f, os);
                os << ' ';
                print_rec(n.g, os);
                os << ')';
            },
            [&](const AbsNode& n) {
                os << "(abs ";
                print_rec(n.f, os);
                os << ')';
            },
            [&](const SupNode& n) {
                os << "(sup " << n.var << ' ';
                print_rec(n.body, os);
                os << ')';
            },
            [&](const InfNode& n) {
                os << "(inf " << n.var << ' ';
                print_rec(n.body, os);
                os << ')';
            },
            [&](const JoinNode& n) { print_family("join", n.family, os, &print_rec); },
            [&](const MeetNode& n) { print_family("meet", n.family, os, &print_rec); },
        },
        f->node);
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature* signature) {
    Parser parser(text, signature);
    return parser.parse_toplevel();
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    print_rec(f, os);
    return os.str();
}

}  // namespace clw
