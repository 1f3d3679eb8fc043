#include "regcheck/step.hpp"

#include "regcheck/util.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace regcheck::step {

StepValue StepValue::derived() {
    StepValue v;
    v.kind = Kind::Derived;
    return v;
}

StepValue StepValue::of_integer(std::int64_t i) {
    StepValue v;
    v.kind = Kind::Integer;
    v.integer = i;
    return v;
}

StepValue StepValue::of_real(double r) {
    StepValue v;
    v.kind = Kind::Real;
    v.real = r;
    return v;
}

StepValue StepValue::of_text(std::string s) {
    StepValue v;
    v.kind = Kind::Text;
    v.text = std::move(s);
    return v;
}

StepValue StepValue::of_enum(std::string tag) {
    StepValue v;
    v.kind = Kind::Enum;
    v.text = to_upper(tag);
    return v;
}

StepValue StepValue::of_ref(std::int64_t id) {
    StepValue v;
    v.kind = Kind::Ref;
    v.integer = id;
    return v;
}

StepValue StepValue::of_list(std::vector<StepValue> items) {
    StepValue v;
    v.kind = Kind::List;
    v.items = std::move(items);
    return v;
}

StepValue StepValue::of_typed(std::string name, StepValue inner) {
    StepValue v;
    v.kind = Kind::Typed;
    v.text = to_upper(std::move(name));
    v.items.push_back(std::move(inner));
    return v;
}

bool StepValue::operator==(const StepValue& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case Kind::Integer:
        case Kind::Ref: return integer == o.integer;
        case Kind::Real: return real == o.real;
        case Kind::Text:
        case Kind::Enum: return text == o.text;
        case Kind::List: return items == o.items;
        case Kind::Typed: return text == o.text && items == o.items;
        default: return true;
    }
}

namespace {

class Scanner {
public:
    Scanner(std::string_view src, std::vector<std::string>& warnings)
        : src_(src), warnings_(warnings) {}

    int line() const { return line_; }
    bool eof() const { return pos_ >= src_.size(); }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
                int start = line_;
                pos_ += 2;
                while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) {
                    if (src_[pos_] == '\n') ++line_;
                    ++pos_;
                }
                if (pos_ + 1 >= src_.size()) throw ParseError(start, "unterminated comment");
                pos_ += 2;
            } else {
                break;
            }
        }
    }

    char peek() {
        skip_ws();
        if (eof()) throw ParseError(line_, "unexpected end of file");
        return src_[pos_];
    }

    char take() {
        char c = peek();
        ++pos_;
        return c;
    }

    void expect(char c) {
        char got = take();
        if (got != c)
            throw ParseError(line_, std::string("expected '") + c + "' but found '" + got + "'");
    }

    bool consume(char c) {
        skip_ws();
        if (!eof() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string keyword() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                src_[pos_] == '-'))
            ++pos_;
        if (pos_ == start) throw ParseError(line_, "expected a keyword");
        return to_upper(src_.substr(start, pos_ - start));
    }

    std::int64_t instance_number() {
        expect('#');
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError(line_, "instance id must be numeric after '#'");
        std::int64_t id = 0;
        std::from_chars(src_.data() + start, src_.data() + pos_, id);
        if (id <= 0) throw ParseError(line_, "instance id must be positive");
        return id;
    }

    // STEP string with '' as the escaped apostrophe. \X\-style control
    // directives are not decoded; the raw text is kept with a warning.
    std::string string_literal() {
        expect('\'');
        std::string out;
        bool control_directive = false;
        while (true) {
            if (pos_ >= src_.size()) throw ParseError(line_, "unterminated string");
            char c = src_[pos_];
            if (c == '\n') throw ParseError(line_, "unterminated string");
            ++pos_;
            if (c == '\'') {
                if (pos_ < src_.size() && src_[pos_] == '\'') {
                    out += '\'';
                    ++pos_;
                    continue;
                }
                break;
            }
            if (c == '\\') control_directive = true;
            out += c;
        }
        if (control_directive)
            warnings_.push_back("line " + std::to_string(line_) +
                                ": string control directive kept verbatim: '" + out + "'");
        return out;
    }

    StepValue number() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
        bool is_real = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.') {
                is_real = true;
                ++pos_;
            } else if (c == 'E' || c == 'e') {
                is_real = true;
                ++pos_;
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            } else {
                break;
            }
        }
        std::string tok(src_.substr(start, pos_ - start));
        if (tok.empty() || tok == "+" || tok == "-")
            throw ParseError(line_, "malformed number");
        if (is_real) {
            double v = 0.0;
            if (tok.back() == '.') tok += '0';
            if (tok.front() == '.') tok.insert(tok.begin(), '0');
            std::size_t dot = tok.find('.');
            std::size_t e = tok.find_first_of("Ee");
            if (dot != std::string::npos && e != std::string::npos && e == dot + 1)
                tok.insert(e, "0");
            try {
                v = std::stod(tok);
            } catch (const std::exception&) {
                throw ParseError(line_, "malformed real: " + tok);
            }
            return StepValue::of_real(v);
        }
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size())
            throw ParseError(line_, "malformed integer: " + tok);
        return StepValue::of_integer(v);
    }

    StepValue value() {
        char c = peek();
        switch (c) {
            case '$': ++pos_; return StepValue::unset();
            case '*': ++pos_; return StepValue::derived();
            case '#': return StepValue::of_ref(instance_number());
            case '\'': return StepValue::of_text(string_literal());
            case '(': return list();
            case '.': {
                ++pos_;
                std::size_t start = pos_;
                while (pos_ < src_.size() && src_[pos_] != '.' && src_[pos_] != '\n') ++pos_;
                if (pos_ >= src_.size() || src_[pos_] != '.')
                    throw ParseError(line_, "unterminated enumeration tag");
                std::string tag(src_.substr(start, pos_ - start));
                ++pos_;
                for (char t : tag)
                    if (std::isspace(static_cast<unsigned char>(t)))
                        throw ParseError(line_, "enumeration tag contains whitespace");
                return StepValue::of_enum(tag);
            }
            default:
                if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)))
                    return number();
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    // typed value: KEYWORD(value)
                    std::string name = keyword();
                    expect('(');
                    StepValue inner = value();
                    expect(')');
                    return StepValue::of_typed(std::move(name), std::move(inner));
                }
                throw ParseError(line_, std::string("unexpected character '") + c + "'");
        }
    }

    StepValue list() {
        expect('(');
        std::vector<StepValue> items;
        if (consume(')')) return StepValue::of_list(std::move(items));
        items.push_back(value());
        while (consume(',')) items.push_back(value());
        expect(')');
        return StepValue::of_list(std::move(items));
    }

private:
    std::string_view src_;
    std::vector<std::string>& warnings_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

void collect_refs(const StepValue& v, std::vector<std::int64_t>& out) {
    if (v.kind == StepValue::Kind::Ref) out.push_back(v.integer);
    for (const auto& item : v.items) collect_refs(item, out);
}

}  // namespace

StepFile parse_step(std::string_view source) {
    StepFile file;
    Scanner sc(source, file.warnings);

    bool in_data = false;
    bool saw_schema = false;
    while (true) {
        sc.skip_ws();
        if (sc.eof()) break;
        if (sc.peek() == '#') {
            int line = sc.line();
            std::int64_t id = sc.instance_number();
            sc.expect('=');
            std::string name = sc.keyword();
            StepValue args = sc.list();
            sc.expect(';');
            if (!in_data)
                file.warnings.push_back("line " + std::to_string(line) +
                                        ": instance outside DATA section");
            StepEntity entity{id, std::move(name), std::move(args.items)};
            auto [it, added] = file.entities.emplace(id, std::move(entity));
            if (!added) throw ParseError(line, "duplicate instance id #" + std::to_string(id));
            continue;
        }
        std::string kw = sc.keyword();
        if (kw == "ISO-10303-21" || kw == "END-ISO-10303-21" || kw == "ENDSEC" || kw == "HEADER") {
            sc.expect(';');
            continue;
        }
        if (kw == "DATA") {
            sc.expect(';');
            in_data = true;
            continue;
        }
        // header statement: KEYWORD(args);
        StepValue args = sc.list();
        sc.expect(';');
        if (kw == "FILE_SCHEMA" && !args.items.empty() &&
            args.items[0].is(StepValue::Kind::List) && !args.items[0].items.empty() &&
            args.items[0].items[0].is(StepValue::Kind::Text)) {
            if (!saw_schema) {
                file.schema = args.items[0].items[0].text;
                saw_schema = true;
            }
        }
    }

    if (!saw_schema) file.warnings.push_back("no FILE_SCHEMA declaration found");

    // dangling-reference tolerance: record, don't fail
    for (const auto& [id, entity] : file.entities) {
        std::vector<std::int64_t> refs;
        for (const auto& arg : entity.args) collect_refs(arg, refs);
        for (auto ref : refs)
            if (!file.entities.count(ref))
                file.warnings.push_back("#" + std::to_string(id) + " references missing instance #" +
                                        std::to_string(ref));
    }
    return file;
}

const StepValue& entity_arg(const StepEntity& entity, std::size_t index) {
    if (index >= entity.args.size())
        throw std::out_of_range("entity #" + std::to_string(entity.id) + " has no argument " +
                                std::to_string(index) + " (arity " +
                                std::to_string(entity.args.size()) + ")");
    return entity.args[index];
}

std::string schema_of(const StepFile& file) { return file.schema; }

namespace {

std::string step_real(double v) {
    std::string s = format_double(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find('E') == std::string::npos)
        s += '.';
    return s;
}

void write_value(std::ostringstream& out, const StepValue& v) {
    switch (v.kind) {
        case StepValue::Kind::Unset: out << '$'; break;
        case StepValue::Kind::Derived: out << '*'; break;
        case StepValue::Kind::Integer: out << v.integer; break;
        case StepValue::Kind::Real: out << step_real(v.real); break;
        case StepValue::Kind::Ref: out << '#' << v.integer; break;
        case StepValue::Kind::Enum: out << '.' << v.text << '.'; break;
        case StepValue::Kind::Text: {
            out << '\'';
            for (char c : v.text) {
                if (c == '\'') out << "''";
                else out << c;
            }
            out << '\'';
            break;
        }
        case StepValue::Kind::List: {
            out << '(';
            for (std::size_t i = 0; i < v.items.size(); ++i) {
                if (i) out << ',';
                write_value(out, v.items[i]);
            }
            out << ')';
            break;
        }
        case StepValue::Kind::Typed: {
            out << v.text << '(';
            write_value(out, v.items[0]);
            out << ')';
            break;
        }
    }
}

}  // namespace

std::string write_step(const StepFile& file) {
    std::ostringstream out;
    out << "ISO-10303-21;\nHEADER;\nFILE_SCHEMA(('" << file.schema << "'));\nENDSEC;\nDATA;\n";
    for (const auto& [id, entity] : file.entities) {
        out << '#' << id << '=' << entity.name << '(';
        for (std::size_t i = 0; i < entity.args.size(); ++i) {
            if (i) out << ',';
            write_value(out, entity.args[i]);
        }
        out << ");\n";
    }
    out << "ENDSEC;\nEND-ISO-10303-21;\n";
    return out.str();
}

}  // namespace regcheck::step
