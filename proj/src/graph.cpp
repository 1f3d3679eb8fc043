#include "regcheck/graph.hpp"

#include "regcheck/util.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace regcheck::rdf {

namespace {

// Process-wide bijective intern table. Id 0 is reserved for "invalid".
class Interner {
public:
    static Interner& instance() {
        static Interner i;
        return i;
    }

    std::uint32_t intern(std::string_view text) {
        {
            std::shared_lock lock(mutex_);
            auto it = ids_.find(std::string(text));
            if (it != ids_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        auto [it, added] = ids_.emplace(std::string(text), 0);
        if (added) {
            texts_.push_back(it->first);
            it->second = static_cast<std::uint32_t>(texts_.size());
        }
        return it->second;
    }

    const std::string& text(std::uint32_t id) const {
        std::shared_lock lock(mutex_);
        if (id == 0 || id > texts_.size()) throw std::logic_error("invalid IRI id");
        return texts_[id - 1];
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::vector<std::reference_wrapper<const std::string>> texts_;
};

std::size_t hash_combine(std::size_t a, std::size_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

}  // namespace

Iri::Iri(std::string_view text) : id_(Interner::instance().intern(text)) {}

const std::string& Iri::text() const { return Interner::instance().text(id_); }

Literal Literal::text(std::string_view s) {
    Literal l;
    l.lexical_ = std::string(s);
    l.kind_ = LiteralKind::Text;
    return l;
}

Literal Literal::decimal(double v) {
    Literal l;
    l.lexical_ = format_double(v);
    l.kind_ = LiteralKind::Decimal;
    l.num_ = v == 0.0 ? 0.0 : v;
    return l;
}

Literal Literal::decimal_lexical(std::string_view lexical) {
    Literal l;
    l.lexical_ = std::string(lexical);
    l.kind_ = LiteralKind::Decimal;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(l.lexical_.data(), l.lexical_.data() + l.lexical_.size(), v);
    if (ec != std::errc{} || ptr != l.lexical_.data() + l.lexical_.size())
        throw std::invalid_argument("decimal literal does not parse: " + l.lexical_);
    l.num_ = v == 0.0 ? 0.0 : v;
    return l;
}

Literal Literal::integer(std::int64_t v) {
    Literal l;
    l.lexical_ = std::to_string(v);
    l.kind_ = LiteralKind::Integer;
    l.num_ = static_cast<double>(v);
    return l;
}

Literal Literal::integer_lexical(std::string_view lexical) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), v);
    if (ec != std::errc{} || ptr != lexical.data() + lexical.size())
        throw std::invalid_argument("integer literal does not parse: " + std::string(lexical));
    Literal l;
    l.lexical_ = std::string(lexical);
    l.kind_ = LiteralKind::Integer;
    l.num_ = static_cast<double>(v);
    return l;
}

Literal Literal::boolean(bool v) {
    Literal l;
    l.lexical_ = v ? "true" : "false";
    l.kind_ = LiteralKind::Boolean;
    l.num_ = v ? 1.0 : 0.0;
    return l;
}

double Literal::number() const {
    if (!is_numeric()) throw std::logic_error("literal is not numeric: " + lexical_);
    return num_;
}

bool Literal::truth() const {
    if (kind_ != LiteralKind::Boolean) throw std::logic_error("literal is not boolean: " + lexical_);
    return lexical_ == "true";
}

bool Literal::operator==(const Literal& o) const {
    if (kind_ != o.kind_) return false;
    if (is_numeric()) return num_ == o.num_;
    return lexical_ == o.lexical_;
}

std::size_t Literal::hash() const {
    std::size_t h = static_cast<std::size_t>(kind_);
    if (is_numeric()) return hash_combine(h, std::hash<double>{}(num_));
    return hash_combine(h, std::hash<std::string>{}(lexical_));
}

Term Term::blank(std::uint32_t id) {
    Term t;
    t.kind_ = Kind::Blank;
    t.blank_ = id;
    return t;
}

Iri Term::iri() const {
    if (kind_ != Kind::Iri) throw std::logic_error("term is not an IRI");
    return iri_;
}

const Literal& Term::literal() const {
    if (kind_ != Kind::Literal) throw std::logic_error("term is not a literal");
    return literal_;
}

std::uint32_t Term::blank_id() const {
    if (kind_ != Kind::Blank) throw std::logic_error("term is not a blank node");
    return blank_;
}

std::string Term::token() const {
    switch (kind_) {
        case Kind::Iri:
            return "<" + iri_.text() + ">";
        case Kind::Blank:
            return "_:b" + std::to_string(blank_);
        case Kind::Literal: {
            std::string out = "\"";
            for (char c : literal_.lexical()) {
                switch (c) {
                    case '"': out += "\\\""; break;
                    case '\\': out += "\\\\"; break;
                    case '\n': out += "\\n"; break;
                    case '\r': out += "\\r"; break;
                    case '\t': out += "\\t"; break;
                    default: out += c;
                }
            }
            out += "\"";
            return out;
        }
        default:
            throw std::logic_error("invalid term");
    }
}

bool Term::operator==(const Term& o) const {
    if (kind_ != o.kind_) return false;
    switch (kind_) {
        case Kind::Iri: return iri_ == o.iri_;
        case Kind::Literal: return literal_ == o.literal_;
        case Kind::Blank: return blank_ == o.blank_;
        default: return true;
    }
}

std::size_t Term::hash() const {
    std::size_t h = static_cast<std::size_t>(kind_);
    switch (kind_) {
        case Kind::Iri: return hash_combine(h, iri_.id());
        case Kind::Literal: return hash_combine(h, literal_.hash());
        case Kind::Blank: return hash_combine(h, blank_);
        default: return h;
    }
}

Triple::Triple(Term s, Term p, Term o)
    : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    if (!subject.is_iri() && !subject.is_blank())
        throw std::invalid_argument("triple subject must be an IRI or blank node");
    if (!predicate.is_iri())
        throw std::invalid_argument("triple predicate must be an IRI");
    if (!object.valid())
        throw std::invalid_argument("triple object must be a valid term");
}

std::size_t Triple::hash() const {
    return hash_combine(hash_combine(subject.hash(), predicate.hash()), object.hash());
}

PatternTerm PatternTerm::var(std::string name) {
    PatternTerm p{Term()};
    p.var_name = std::move(name);
    return p;
}

bool Graph::insert(const Triple& t) {
    auto it = lookup_.find(t);
    if (it != lookup_.end()) return false;
    auto slot = static_cast<std::uint32_t>(slots_.size());
    slots_.push_back(t);
    lookup_.emplace(t, slot);
    by_subject_[t.subject].push_back(slot);
    by_predicate_[t.predicate].push_back(slot);
    by_object_[t.object].push_back(slot);
    ++count_;
    return true;
}

bool Graph::contains(const Triple& t) const { return lookup_.count(t) != 0; }

bool Graph::matches(const Triple& t, const TriplePattern& p, Bindings& out) const {
    out.clear();
    const PatternTerm* pats[3] = {&p.subject, &p.predicate, &p.object};
    const Term* terms[3] = {&t.subject, &t.predicate, &t.object};
    for (int i = 0; i < 3; ++i) {
        if (pats[i]->is_var()) {
            auto [it, added] = out.emplace(pats[i]->var_name, *terms[i]);
            if (!added && it->second != *terms[i]) return false;  // repeated variable
        } else if (pats[i]->term != *terms[i]) {
            return false;
        }
    }
    return true;
}

const std::vector<std::uint32_t>* Graph::candidates(const TriplePattern& p) const {
    auto probe = [](const std::unordered_map<Term, std::vector<std::uint32_t>, TermHash>& index,
                    const Term& key) -> const std::vector<std::uint32_t>* {
        static const std::vector<std::uint32_t> empty;
        auto it = index.find(key);
        return it == index.end() ? &empty : &it->second;
    };
    if (!p.subject.is_var()) return probe(by_subject_, p.subject.term);
    if (!p.predicate.is_var()) return probe(by_predicate_, p.predicate.term);
    if (!p.object.is_var()) return probe(by_object_, p.object.term);
    return nullptr;  // full scan
}

std::vector<Bindings> Graph::match(const TriplePattern& pattern) const {
    std::vector<Bindings> results;
    Bindings b;
    if (const auto* bucket = candidates(pattern)) {
        for (auto slot : *bucket) {
            if (!slots_[slot]) continue;
            if (matches(*slots_[slot], pattern, b)) results.push_back(b);
        }
        return results;
    }
    for (const auto& slot : slots_) {
        if (!slot) continue;
        if (matches(*slot, pattern, b)) results.push_back(b);
    }
    return results;
}

std::size_t Graph::remove_matching(const TriplePattern& pattern) {
    std::vector<std::uint32_t> doomed;
    Bindings b;
    if (const auto* bucket = candidates(pattern)) {
        for (auto slot : *bucket)
            if (slots_[slot] && matches(*slots_[slot], pattern, b)) doomed.push_back(slot);
    } else {
        for (std::uint32_t slot = 0; slot < slots_.size(); ++slot)
            if (slots_[slot] && matches(*slots_[slot], pattern, b)) doomed.push_back(slot);
    }
    for (auto slot : doomed) {
        lookup_.erase(*slots_[slot]);
        slots_[slot].reset();
        --count_;
    }
    return doomed.size();
}

void Graph::for_each(const std::function<void(const Triple&)>& fn) const {
    for (const auto& slot : slots_)
        if (slot) fn(*slot);
}

std::vector<Triple> Graph::triples() const {
    std::vector<Triple> out;
    out.reserve(count_);
    for (const auto& slot : slots_)
        if (slot) out.push_back(*slot);
    return out;
}

std::uint32_t Graph::fresh_blank() { return next_blank_++; }

std::string serialize_ntriples(const Graph& g) {
    std::vector<std::array<std::string, 3>> rows;
    rows.reserve(g.count());
    g.for_each([&](const Triple& t) {
        rows.push_back({t.subject.token(), t.predicate.token(), t.object.token()});
    });
    std::sort(rows.begin(), rows.end());
    std::string out;
    for (const auto& r : rows) {
        out += r[0];
        out += ' ';
        out += r[1];
        out += ' ';
        out += r[2];
        out += " .\n";
    }
    return out;
}

}  // namespace regcheck::rdf
