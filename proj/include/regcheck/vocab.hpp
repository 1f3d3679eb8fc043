#pragma once

#include "regcheck/graph.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace regcheck::vocab {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view ifc = "http://regcheck.org/ns/ifc#";
inline constexpr std::string_view reg = "http://regcheck.org/ns/reg#";
inline constexpr std::string_view geo = "http://regcheck.org/ns/geo#";
inline constexpr std::string_view inst = "http://regcheck.org/model/inst/";
}  // namespace ns

rdf::Iri rdf_type();
rdf::Iri ifc(std::string_view local);
rdf::Iri reg(std::string_view local);
rdf::Iri geo(std::string_view local);
rdf::Iri inst(std::int64_t instance_number);

// Prefix table plus the set of known local names per prefix; rules that
// mention a known prefix with an unknown local name get a lint/compile
// warning rather than an error.
struct VocabTable {
    std::map<std::string, std::string> prefixes;
    std::map<std::string, std::set<std::string>> known_terms;

    // Accepts "prefix:local" or an absolute IRI. Throws std::runtime_error
    // for an unknown prefix. If `known` is non-null it is set to false
    // when the prefix is declared but the local name is not.
    rdf::Iri resolve(std::string_view curie_or_iri, bool* known = nullptr) const;

    void declare(const std::string& prefix, const std::string& iri);
    void add_term(const std::string& prefix, const std::string& local);
};

// The layered default vocabulary: ifc terms emitted by lifting, reg terms
// produced by the builtin inference rules, geo terms from the geometric
// pre-processor.
const VocabTable& default_vocab();

}  // namespace regcheck::vocab
