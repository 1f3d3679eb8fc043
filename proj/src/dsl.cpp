#include "regcheck/dsl.hpp"

#include <cctype>
#include <charconv>
#include <set>

namespace regcheck::dsl {

namespace {

struct Token {
    enum class Kind { Ident, Curie, Var, String, Number, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    double number = 0.0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw RuleParseError(current_.line, current_.col, msg);
    }

private:
    void advance() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else if (c == '#') {  // comment to end of line
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
        current_ = Token{};
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= src_.size()) return;

        char c = src_[pos_];
        if (c == '"') {
            step();
            std::string out;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) step();
                if (src_[pos_] == '\n') throw RuleParseError(line_, col_, "unterminated string");
                out += src_[pos_];
                step();
            }
            if (pos_ >= src_.size()) throw RuleParseError(line_, col_, "unterminated string");
            step();
            current_.kind = Token::Kind::String;
            current_.text = std::move(out);
            return;
        }
        if (c == '?') {
            step();
            std::string name = ident_chars();
            if (name.empty()) throw RuleParseError(line_, col_, "expected variable name after '?'");
            current_.kind = Token::Kind::Var;
            current_.text = std::move(name);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+') && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_;
            if (c == '-' || c == '+') step();
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                step();
            std::string tok = src_.substr(start, pos_ - start);
            double v = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || p != tok.data() + tok.size())
                throw RuleParseError(current_.line, current_.col, "malformed number: " + tok);
            current_.kind = Token::Kind::Number;
            current_.number = v;
            current_.text = std::move(tok);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string head = ident_chars();
            if (pos_ < src_.size() && src_[pos_] == ':' && pos_ + 1 < src_.size() &&
                (std::isalpha(static_cast<unsigned char>(src_[pos_ + 1])) || src_[pos_ + 1] == '_')) {
                step();  // ':'
                std::string local = ident_chars();
                current_.kind = Token::Kind::Curie;
                current_.text = head + ":" + local;
                return;
            }
            current_.kind = Token::Kind::Ident;
            current_.text = std::move(head);
            return;
        }
        // punctuation, including two-char comparison operators
        auto two = src_.substr(pos_, 2);
        if (two == "<=" || two == ">=" || two == "!=") {
            step();
            step();
            current_.kind = Token::Kind::Punct;
            current_.text = two;
            return;
        }
        step();
        current_.kind = Token::Kind::Punct;
        current_.text = std::string(1, c);
    }

    std::string ident_chars() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '-'))
            step();
        return src_.substr(start, pos_ - start);
    }

    void step() {
        ++pos_;
        ++col_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_;
};

const std::set<std::string> kBuiltins = {"FREESPACE", "CLEAR", "FIRETHRESHOLD", "HEIGHT_OF"};

struct BuiltinArity {
    std::size_t min, max;
};

BuiltinArity builtin_arity(const std::string& name) {
    if (name == "FREESPACE") return {4, 5};
    if (name == "CLEAR") return {2, 2};
    return {1, 1};
}

class Parser {
public:
    Parser(const std::string& src, const vocab::VocabTable& table) : lex_(src), table_(table) {}

    std::vector<RuleAst> rules() {
        std::vector<RuleAst> out;
        while (lex_.peek().kind != Token::Kind::End) out.push_back(rule());
        return out;
    }

private:
    Lexer lex_;
    const vocab::VocabTable& table_;

    [[noreturn]] void fail(const std::string& msg) { lex_.fail(msg); }

    Token expect_ident(const std::string& kw) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Ident || t.text != kw)
            throw RuleParseError(t.line, t.col, "expected " + kw);
        return t;
    }

    bool at_ident(const std::string& kw) const {
        return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == kw;
    }

    void expect_punct(const std::string& p) {
        Token t = lex_.take();
        if (t.kind != Token::Kind::Punct || t.text != p)
            throw RuleParseError(t.line, t.col, "expected '" + p + "'");
    }

    rdf::Iri resolve(const Token& t) {
        try {
            return table_.resolve(t.text);
        } catch (const std::exception& e) {
            throw RuleParseError(t.line, t.col, e.what());
        }
    }

    RuleAst rule() {
        RuleAst ast;
        expect_ident("RULE");
        Token id = lex_.take();
        if (id.kind != Token::Kind::String)
            throw RuleParseError(id.line, id.col, "rule id must be a quoted string");
        ast.id = id.text;
        expect_ident("TOPIC");
        Token topic = lex_.take();
        if (topic.kind != Token::Kind::Ident)
            throw RuleParseError(topic.line, topic.col, "topic must be an identifier");
        ast.topic = topic.text;
        if (at_ident("SEVERITY")) {
            lex_.take();
            Token sev = lex_.take();
            if (sev.kind != Token::Kind::Ident)
                throw RuleParseError(sev.line, sev.col, "severity must be an identifier");
            ast.severity = sev.text;
        }
        expect_ident("IF");
        ast.clauses = clause_list(/*stop_at_then=*/true);
        if (ast.clauses.empty()) fail("rule needs at least one clause");
        expect_ident("THEN");
        expect_ident("NON-COMPLIANT");
        Token target = lex_.take();
        if (target.kind != Token::Kind::Var)
            throw RuleParseError(target.line, target.col, "expected target variable");
        ast.target = target.text;
        if (at_ident("MESSAGE")) {
            lex_.take();
            Token msg = lex_.take();
            if (msg.kind != Token::Kind::String)
                throw RuleParseError(msg.line, msg.col, "message must be a quoted string");
            ast.message = msg.text;
        }
        validate(ast);
        return ast;
    }

    std::vector<Clause> clause_list(bool stop_at_then) {
        std::vector<Clause> clauses;
        while (true) {
            const Token& t = lex_.peek();
            if (t.kind == Token::Kind::End) {
                if (stop_at_then) fail("rule is missing THEN NON-COMPLIANT");
                fail("unterminated clause group");
            }
            if (stop_at_then && t.kind == Token::Kind::Ident && t.text == "THEN") break;
            if (!stop_at_then && t.kind == Token::Kind::Punct && t.text == "}") break;
            clauses.push_back(clause());
        }
        return clauses;
    }

    Clause clause() {
        const Token& t = lex_.peek();
        Clause c;
        c.line = t.line;
        if (t.kind == Token::Kind::Var) {
            Token var = lex_.take();
            Token kw = lex_.take();
            if (kw.kind != Token::Kind::Ident || (kw.text != "TYPE" && kw.text != "PROP"))
                throw RuleParseError(kw.line, kw.col, "expected TYPE or PROP after a variable");
            c.subject_var = var.text;
            if (kw.text == "TYPE") {
                c.kind = Clause::Kind::Type;
                Token cls = lex_.take();
                if (cls.kind != Token::Kind::Curie && cls.kind != Token::Kind::Ident)
                    throw RuleParseError(cls.line, cls.col, "expected a class IRI");
                c.predicate = vocab::rdf_type();
                c.object = rdf::PatternTerm(rdf::Term(resolve(cls)));
                return c;
            }
            c.kind = Clause::Kind::Prop;
            Token pred = lex_.take();
            if (pred.kind != Token::Kind::Curie && pred.kind != Token::Kind::Ident)
                throw RuleParseError(pred.line, pred.col, "expected a predicate IRI");
            c.predicate = resolve(pred);
            Token obj = lex_.take();
            switch (obj.kind) {
                case Token::Kind::Var: c.object = rdf::PatternTerm::var(obj.text); break;
                case Token::Kind::Number:
                    c.object = rdf::PatternTerm(
                        obj.text.find('.') != std::string::npos
                            ? rdf::Term(rdf::Literal::decimal_lexical(obj.text))
                            : rdf::Term(rdf::Literal::integer_lexical(obj.text)));
                    break;
                case Token::Kind::String:
                    c.object = rdf::PatternTerm(rdf::Term(rdf::Literal::text(obj.text)));
                    break;
                case Token::Kind::Curie:
                    c.object = rdf::PatternTerm(rdf::Term(resolve(obj)));
                    break;
                case Token::Kind::Ident:
                    if (obj.text == "true" || obj.text == "false") {
                        c.object =
                            rdf::PatternTerm(rdf::Term(rdf::Literal::boolean(obj.text == "true")));
                        break;
                    }
                    [[fallthrough]];
                default:
                    throw RuleParseError(obj.line, obj.col, "expected a value after the predicate");
            }
            return c;
        }
        if (t.kind == Token::Kind::Ident) {
            if (t.text == "FILTER") {
                lex_.take();
                c.kind = Clause::Kind::Filter;
                c.expr = expr();
                return c;
            }
            if (t.text == "NOT") {
                lex_.take();
                expect_ident("EXISTS");
                expect_punct("{");
                c.kind = Clause::Kind::NotExists;
                c.body = clause_list(/*stop_at_then=*/false);
                expect_punct("}");
                if (c.body.empty()) fail("NOT EXISTS group is empty");
                return c;
            }
            if (t.text == "GEO") {
                lex_.take();
                c.kind = Clause::Kind::Geo;
                Token kind = lex_.take();
                if (kind.kind != Token::Kind::Ident ||
                    (kind.text != "INTERSECTS" && kind.text != "ADJACENT"))
                    throw RuleParseError(kind.line, kind.col, "expected INTERSECTS or ADJACENT");
                c.geo_kind = kind.text == "INTERSECTS" ? GeoKind::Intersects : GeoKind::Adjacent;
                Token a = lex_.take(), b = lex_.take();
                if (a.kind != Token::Kind::Var || b.kind != Token::Kind::Var)
                    throw RuleParseError(a.line, a.col, "GEO needs two variables");
                c.geo_a = a.text;
                c.geo_b = b.text;
                if (at_ident("EPS")) {
                    lex_.take();
                    Token eps = lex_.take();
                    if (eps.kind != Token::Kind::Number)
                        throw RuleParseError(eps.line, eps.col, "EPS needs a number");
                    c.geo_eps = eps.number;
                }
                return c;
            }
            if (t.text == "BIND") {
                lex_.take();
                c.kind = Clause::Kind::Bind;
                Token fn = lex_.take();
                if (fn.kind != Token::Kind::Ident)
                    throw RuleParseError(fn.line, fn.col, "expected a builtin name after BIND");
                c.expr = call(fn);
                expect_ident("AS");
                Token out = lex_.take();
                if (out.kind != Token::Kind::Var)
                    throw RuleParseError(out.line, out.col, "expected output variable after AS");
                c.bind_var = out.text;
                return c;
            }
        }
        throw RuleParseError(t.line, t.col, "expected a clause, found '" + t.text + "'");
    }

    Expr call(const Token& fn) {
        if (!kBuiltins.count(fn.text))
            throw RuleParseError(fn.line, fn.col, "unknown builtin name: " + fn.text);
        Expr e;
        e.kind = Expr::Kind::Call;
        e.text = fn.text;
        e.line = fn.line;
        e.col = fn.col;
        expect_punct("(");
        if (!(lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ")")) {
            e.args.push_back(atom());
            while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
                lex_.take();
                e.args.push_back(atom());
            }
        }
        expect_punct(")");
        auto arity = builtin_arity(fn.text);
        if (e.args.size() < arity.min || e.args.size() > arity.max)
            throw RuleParseError(fn.line, fn.col,
                                 fn.text + " takes " + std::to_string(arity.min) +
                                     (arity.max != arity.min ? ".." + std::to_string(arity.max) : "") +
                                     " arguments");
        return e;
    }

    // or_expr := and_expr (OR and_expr)*
    Expr expr() {
        Expr left = and_expr();
        while (at_ident("OR")) {
            Token op = lex_.take();
            Expr node;
            node.kind = Expr::Kind::Or;
            node.line = op.line;
            node.col = op.col;
            node.args = {std::move(left), and_expr()};
            left = std::move(node);
        }
        return left;
    }

    Expr and_expr() {
        Expr left = unary();
        while (at_ident("AND")) {
            Token op = lex_.take();
            Expr node;
            node.kind = Expr::Kind::And;
            node.line = op.line;
            node.col = op.col;
            node.args = {std::move(left), unary()};
            left = std::move(node);
        }
        return left;
    }

    Expr unary() {
        if (at_ident("NOT")) {
            Token op = lex_.take();
            Expr node;
            node.kind = Expr::Kind::Not;
            node.line = op.line;
            node.col = op.col;
            node.args = {unary()};
            return node;
        }
        return comparison();
    }

    Expr comparison() {
        Expr left = atom();
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Punct &&
            (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=" || t.text == "=" ||
             t.text == "!=")) {
            Token op = lex_.take();
            Expr node;
            node.kind = Expr::Kind::Compare;
            node.cmp_op = op.text;
            node.line = op.line;
            node.col = op.col;
            node.args = {std::move(left), atom()};
            return node;
        }
        return left;
    }

    Expr atom() {
        Token t = lex_.take();
        Expr e;
        e.line = t.line;
        e.col = t.col;
        switch (t.kind) {
            case Token::Kind::Number:
                e.kind = Expr::Kind::Number;
                e.number = t.number;
                return e;
            case Token::Kind::String:
                e.kind = Expr::Kind::String;
                e.text = t.text;
                return e;
            case Token::Kind::Var:
                e.kind = Expr::Kind::Var;
                e.text = t.text;
                return e;
            case Token::Kind::Punct:
                if (t.text == "(") {
                    Expr inner = expr();
                    expect_punct(")");
                    return inner;
                }
                break;
            case Token::Kind::Ident: {
                if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "(") return call(t);
                e.kind = Expr::Kind::Symbol;
                e.text = t.text;
                return e;
            }
            default: break;
        }
        throw RuleParseError(t.line, t.col, "expected an expression, found '" + t.text + "'");
    }

    // --- static validation ---

    static void expr_vars(const Expr& e, std::set<std::string>& out) {
        if (e.kind == Expr::Kind::Var) out.insert(e.text);
        for (const auto& a : e.args) expr_vars(a, out);
    }

    static void positive_vars(const std::vector<Clause>& clauses, std::set<std::string>& out) {
        for (const auto& c : clauses) {
            if (c.kind != Clause::Kind::Type && c.kind != Clause::Kind::Prop) continue;
            out.insert(c.subject_var);
            if (c.object.is_var()) out.insert(c.object.var_name);
        }
    }

    // Order-insensitive binding check: positive clauses bind their
    // variables, BIND outputs become available once their arguments are
    // bound; everything a FILTER/GEO/BIND consumes must end up bound.
    void check_bound(const std::vector<Clause>& clauses, std::set<std::string> bound, int line) {
        positive_vars(clauses, bound);
        std::vector<const Clause*> binds;
        for (const auto& c : clauses)
            if (c.kind == Clause::Kind::Bind) binds.push_back(&c);
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto it = binds.begin(); it != binds.end();) {
                std::set<std::string> needed;
                expr_vars((*it)->expr, needed);
                bool ok = true;
                for (const auto& v : needed)
                    if (!bound.count(v)) ok = false;
                if (ok) {
                    if (bound.count((*it)->bind_var))
                        throw RuleParseError((*it)->line, 1,
                                             "BIND rebinds variable ?" + (*it)->bind_var);
                    bound.insert((*it)->bind_var);
                    it = binds.erase(it);
                    progress = true;
                } else {
                    ++it;
                }
            }
        }
        if (!binds.empty()) {
            std::set<std::string> needed;
            expr_vars(binds.front()->expr, needed);
            for (const auto& v : needed)
                if (!bound.count(v))
                    throw RuleParseError(binds.front()->line, 1, "unbound variable ?" + v);
        }
        for (const auto& c : clauses) {
            if (c.kind == Clause::Kind::Filter) {
                std::set<std::string> needed;
                expr_vars(c.expr, needed);
                for (const auto& v : needed)
                    if (!bound.count(v))
                        throw RuleParseError(c.line, 1, "unbound variable ?" + v);
            } else if (c.kind == Clause::Kind::Geo) {
                for (const auto& v : {c.geo_a, c.geo_b})
                    if (!bound.count(v)) throw RuleParseError(c.line, 1, "unbound variable ?" + v);
            } else if (c.kind == Clause::Kind::NotExists) {
                check_bound(c.body, bound, c.line);
            }
        }
        (void)line;
    }

    void validate(const RuleAst& ast) {
        std::set<std::string> positives;
        positive_vars(ast.clauses, positives);
        if (!positives.count(ast.target))
            throw RuleParseError(1, 1,
                                 "target variable ?" + ast.target +
                                     " does not appear in any positive clause");
        check_bound(ast.clauses, {}, 1);
    }
};

}  // namespace

bool is_builtin(const std::string& name) { return kBuiltins.count(name) != 0; }

std::vector<RuleAst> parse_rules(const std::string& source, const vocab::VocabTable& table) {
    Parser p(source, table);
    return p.rules();
}

RuleAst parse_rule(const std::string& source, const vocab::VocabTable& table) {
    auto rules = parse_rules(source, table);
    if (rules.size() != 1)
        throw RuleParseError(1, 1, "expected exactly one rule, found " + std::to_string(rules.size()));
    return std::move(rules[0]);
}

}  // namespace regcheck::dsl
