#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace regcheck::rdf {

// Absolute IRI interned to a compact identifier. Interning is bijective
// and process-wide; equal texts always yield equal ids.
class Iri {
public:
    Iri() = default;
    explicit Iri(std::string_view text);

    std::uint32_t id() const { return id_; }
    const std::string& text() const;
    bool valid() const { return id_ != 0; }

    friend bool operator==(Iri a, Iri b) { return a.id_ == b.id_; }
    friend bool operator!=(Iri a, Iri b) { return a.id_ != b.id_; }

private:
    std::uint32_t id_ = 0;
};

enum class LiteralKind { Text, Decimal, Integer, Boolean };

// Lexical form plus kind. Numeric literals compare by value within their
// kind, so decimal "9.0" equals decimal "9.00" but never integer 9 or
// text "9".
class Literal {
public:
    static Literal text(std::string_view s);
    static Literal decimal(double v);
    static Literal decimal_lexical(std::string_view lexical);
    static Literal integer(std::int64_t v);
    static Literal integer_lexical(std::string_view lexical);
    static Literal boolean(bool v);

    const std::string& lexical() const { return lexical_; }
    LiteralKind kind() const { return kind_; }
    bool is_numeric() const { return kind_ == LiteralKind::Decimal || kind_ == LiteralKind::Integer; }
    double number() const;  // Decimal/Integer only
    bool truth() const;     // Boolean only

    bool operator==(const Literal& o) const;
    std::size_t hash() const;

private:
    std::string lexical_;
    LiteralKind kind_ = LiteralKind::Text;
    double num_ = 0.0;
};

class Term {
public:
    enum class Kind { Invalid, Iri, Literal, Blank };

    Term() = default;
    Term(Iri iri) : kind_(Kind::Iri), iri_(iri) {}
    Term(Literal lit) : kind_(Kind::Literal), literal_(std::move(lit)) {}
    static Term blank(std::uint32_t id);

    Kind kind() const { return kind_; }
    bool is_iri() const { return kind_ == Kind::Iri; }
    bool is_literal() const { return kind_ == Kind::Literal; }
    bool is_blank() const { return kind_ == Kind::Blank; }
    bool valid() const { return kind_ != Kind::Invalid; }

    Iri iri() const;
    const Literal& literal() const;
    std::uint32_t blank_id() const;

    // Serialized N-Triples token: <iri>, "literal", _:bN.
    std::string token() const;

    bool operator==(const Term& o) const;
    bool operator!=(const Term& o) const { return !(*this == o); }
    std::size_t hash() const;

private:
    Kind kind_ = Kind::Invalid;
    Iri iri_;
    Literal literal_ = Literal::text("");
    std::uint32_t blank_ = 0;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Subject is an IRI or blank node, predicate always an IRI; literals occur
// only in object position. Construction enforces this.
struct Triple {
    Term subject;
    Term predicate;
    Term object;

    Triple(Term s, Term p, Term o);

    bool operator==(const Triple& o) const {
        return subject == o.subject && predicate == o.predicate && object == o.object;
    }
    std::size_t hash() const;
};

struct TripleHash {
    std::size_t operator()(const Triple& t) const { return t.hash(); }
};

// Constant term or named variable; repeated variables in one pattern
// express equality joins.
struct PatternTerm {
    PatternTerm(Term t) : term(std::move(t)) {}
    PatternTerm(Iri iri) : term(Term(iri)) {}
    static PatternTerm var(std::string name);

    bool is_var() const { return !var_name.empty(); }

    Term term;
    std::string var_name;
};

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;
};

using Bindings = std::map<std::string, Term>;

// In-memory triple set with subject-, predicate-, and object-keyed indexes.
// Set semantics; insert reports whether the triple was new. Reads are
// const and safe from many threads as long as no writer is active
// (single-writer / many-reader contract).
class Graph {
public:
    // True iff newly added.
    bool insert(const Triple& t);

    std::size_t count() const { return count_; }

    bool contains(const Triple& t) const;

    // One binding per matching triple. Uses the index keyed on the
    // leftmost bound position in (subject, predicate, object) order.
    std::vector<Bindings> match(const TriplePattern& pattern) const;

    // Deletes all matches from all indexes; returns how many.
    std::size_t remove_matching(const TriplePattern& pattern);

    // Visits every live triple (unordered scan).
    void for_each(const std::function<void(const Triple&)>& fn) const;

    std::vector<Triple> triples() const;

    std::uint32_t fresh_blank();

private:
    std::vector<std::optional<Triple>> slots_;
    std::unordered_map<Triple, std::uint32_t, TripleHash> lookup_;
    std::unordered_map<Term, std::vector<std::uint32_t>, TermHash> by_subject_;
    std::unordered_map<Term, std::vector<std::uint32_t>, TermHash> by_predicate_;
    std::unordered_map<Term, std::vector<std::uint32_t>, TermHash> by_object_;
    std::size_t count_ = 0;
    std::uint32_t next_blank_ = 0x40000000u;

    bool matches(const Triple& t, const TriplePattern& p, Bindings& out) const;
    const std::vector<std::uint32_t>* candidates(const TriplePattern& p) const;
};

// Canonical N-Triples: one triple per line, sorted by subject, predicate,
// object token text. Deterministic byte output for a given graph.
std::string serialize_ntriples(const Graph& g);

}  // namespace regcheck::rdf
