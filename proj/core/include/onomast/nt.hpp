#pragma once

// Line-oriented N-Triples reader.
//
// Each line holds at most one statement: `subject predicate object .` with an
// optional trailing `# comment`. Subjects are IRIs or blank nodes, predicates
// are IRIs, objects are IRIs, blank nodes or literals. Escape sequences in
// IRIs and literals are resolved to UTF-8.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "onomast/input.hpp"

namespace onomast::nt {

enum class TermKind : std::uint8_t { Iri, BlankNode, Literal };

struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;     // IRI, blank node label, or literal lexical form
  std::string language;  // literals only; empty when absent
  std::string datatype;  // literals only; empty when absent

  static Term iri(std::string v) { return {TermKind::Iri, std::move(v), {}, {}}; }
  static Term literal(std::string v, std::string lang = {}) {
    return {TermKind::Literal, std::move(v), std::move(lang), {}};
  }

  friend bool operator==(const Term&, const Term&) = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// Non-owning views into a LineParser's scratch buffer or the input line.
struct TermView {
  TermKind kind = TermKind::Iri;
  std::string_view value;
  std::string_view language;
  std::string_view datatype;
};

struct TripleView {
  TermView subject;
  TermView predicate;
  TermView object;
};

Term to_owned(const TermView& view);
Triple to_owned(const TripleView& view);

enum class LineKind : std::uint8_t { Statement, Blank, Comment, Malformed };

// Reusable single-line parser. Views written to `out` point either into the
// line itself or into the parser's scratch buffer; both are invalidated by
// the next parse() call.
class LineParser {
 public:
  LineKind parse(std::string_view line, TripleView& out);

 private:
  std::string scratch_;
};

struct ParseStats {
  std::uint64_t lines_read = 0;
  std::uint64_t lines_skipped_malformed = 0;
  std::uint64_t bytes_read = 0;

  ParseStats& operator+=(const ParseStats& other);
  friend bool operator==(const ParseStats&, const ParseStats&) = default;
};

using TripleSink = std::function<void(const TripleView&)>;

// Streams every well-formed statement of `source` to `sink` in file order.
// Malformed lines are counted and skipped.
void parse_nt_stream(io::ByteSource& source, const TripleSink& sink, ParseStats& stats);

// Convenience for small inputs and tests.
std::vector<Triple> parse_nt_string(std::string_view text, ParseStats& stats);

// Encodes a string as an N-Triples literal body (without the quotes).
// unescape_literal(escape_literal(s)) == s for all valid UTF-8 s.
std::string escape_literal(std::string_view text);

// Resolves escapes in a literal body. Returns false on an invalid escape,
// an unescaped quote or a code point outside the Unicode scalar range.
bool unescape_literal(std::string_view body, std::string& out);

// Appends the UTF-8 encoding of a scalar value. Returns false for surrogates
// and values above U+10FFFF.
bool append_utf8(std::uint32_t code_point, std::string& out);

}  // namespace onomast::nt
