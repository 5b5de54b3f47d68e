#include "onomast/nt.hpp"

#include <cstdio>

namespace onomast::nt {
namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_alnum(char c) { return is_alpha(c) || (c >= '0' && c <= '9'); }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool parse_hex(std::string_view digits, std::uint32_t& out) {
  out = 0;
  for (char c : digits) {
    const int v = hex_value(c);
    if (v < 0) return false;
    out = (out << 4) | static_cast<std::uint32_t>(v);
  }
  return true;
}

// Decodes a \u or \U escape starting at text[i] == '\\'. Advances i past it.
bool decode_unicode_escape(std::string_view text, std::size_t& i, std::string& out) {
  const char kind = text[i + 1];
  const std::size_t width = kind == 'u' ? 4 : 8;
  if (i + 2 + width > text.size()) return false;
  std::uint32_t cp = 0;
  if (!parse_hex(text.substr(i + 2, width), cp)) return false;
  if (!append_utf8(cp, out)) return false;
  i += 2 + width;
  return true;
}

class Cursor {
 public:
  Cursor(std::string_view line, std::string& scratch) : line_(line), scratch_(scratch) {}

  void skip_ws() {
    while (pos_ < line_.size() && is_ws(line_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }

  bool term(TermView& out, bool allow_blank, bool allow_literal) {
    if (at_end()) return false;
    const char c = peek();
    if (c == '<') return iri(out);
    if (c == '_' && allow_blank) return blank(out);
    if (c == '"' && allow_literal) return literal(out);
    return false;
  }

  // Trailing "." plus optional comment.
  bool terminator() {
    skip_ws();
    if (at_end() || peek() != '.') return false;
    ++pos_;
    skip_ws();
    return at_end() || peek() == '#';
  }

 private:
  bool iri(TermView& out) {
    ++pos_;  // '<'
    const std::size_t start = pos_;
    bool escaped = false;
    while (pos_ < line_.size() && line_[pos_] != '>') {
      const auto c = static_cast<unsigned char>(line_[pos_]);
      if (c <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`') {
        return false;
      }
      if (c == '\\') {
        if (pos_ + 1 >= line_.size()) return false;
        const char k = line_[pos_ + 1];
        if (k != 'u' && k != 'U') return false;
        escaped = true;
        pos_ += k == 'u' ? 6 : 10;
        continue;
      }
      ++pos_;
    }
    if (pos_ >= line_.size()) return false;
    const std::string_view raw = line_.substr(start, pos_ - start);
    ++pos_;  // '>'
    out = TermView{TermKind::Iri, raw, {}, {}};
    if (escaped) {
      const std::size_t begin = scratch_.size();
      for (std::size_t i = 0; i < raw.size();) {
        if (raw[i] == '\\') {
          if (!decode_unicode_escape(raw, i, scratch_)) return false;
        } else {
          scratch_.push_back(raw[i++]);
        }
      }
      out.value = std::string_view(scratch_).substr(begin);
    }
    return true;
  }

  bool blank(TermView& out) {
    if (pos_ + 2 >= line_.size() || line_[pos_ + 1] != ':') return false;
    pos_ += 2;
    const std::size_t start = pos_;
    while (pos_ < line_.size()) {
      const char c = line_[pos_];
      if (is_ws(c) || c == '<' || c == '"' || c == '#') break;
      const auto u = static_cast<unsigned char>(c);
      if (!(is_alnum(c) || c == '_' || c == '-' || c == '.' || c == ':' || u >= 0x80)) {
        return false;
      }
      ++pos_;
    }
    // A trailing dot terminates the statement, not the label.
    while (pos_ > start && line_[pos_ - 1] == '.') --pos_;
    if (pos_ == start) return false;
    const char first = line_[start];
    if (first == '-' || first == '.') return false;
    out = TermView{TermKind::BlankNode, line_.substr(start, pos_ - start), {}, {}};
    return true;
  }

  bool literal(TermView& out) {
    ++pos_;  // '"'
    const std::size_t start = pos_;
    bool escaped = false;
    while (pos_ < line_.size() && line_[pos_] != '"') {
      if (line_[pos_] == '\\') {
        escaped = true;
        pos_ += 2;
        continue;
      }
      ++pos_;
    }
    if (pos_ >= line_.size()) return false;
    const std::string_view body = line_.substr(start, pos_ - start);
    ++pos_;  // closing quote
    out = TermView{TermKind::Literal, body, {}, {}};
    if (escaped) {
      const std::size_t begin = scratch_.size();
      if (!unescape_literal(body, scratch_)) return false;
      out.value = std::string_view(scratch_).substr(begin);
    }
    if (pos_ < line_.size() && line_[pos_] == '@') {
      const std::size_t tag_start = ++pos_;
      while (pos_ < line_.size() && is_alpha(line_[pos_])) ++pos_;
      if (pos_ == tag_start) return false;
      while (pos_ < line_.size() && line_[pos_] == '-') {
        const std::size_t sub = ++pos_;
        while (pos_ < line_.size() && is_alnum(line_[pos_])) ++pos_;
        if (pos_ == sub) return false;
      }
      out.language = line_.substr(tag_start, pos_ - tag_start);
    } else if (pos_ + 1 < line_.size() && line_[pos_] == '^' && line_[pos_ + 1] == '^') {
      pos_ += 2;
      if (at_end() || peek() != '<') return false;
      TermView datatype;
      if (!iri(datatype)) return false;
      out.datatype = datatype.value;
    }
    return true;
  }

  std::string_view line_;
  std::string& scratch_;
  std::size_t pos_ = 0;
};

}  // namespace

bool append_utf8(std::uint32_t cp, std::string& out) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return true;
}

bool unescape_literal(std::string_view body, std::string& out) {
  for (std::size_t i = 0; i < body.size();) {
    const char c = body[i];
    if (c == '"') return false;
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 >= body.size()) return false;
    const char k = body[i + 1];
    switch (k) {
      case 't': out.push_back('\t'); break;
      case 'b': out.push_back('\b'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'f': out.push_back('\f'); break;
      case '"': out.push_back('"'); break;
      case '\'': out.push_back('\''); break;
      case '\\': out.push_back('\\'); break;
      case 'u':
      case 'U':
        if (!decode_unicode_escape(body, i, out)) return false;
        continue;
      default:
        return false;
    }
    i += 2;
  }
  return true;
}

std::string escape_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

Term to_owned(const TermView& view) {
  return Term{view.kind, std::string(view.value), std::string(view.language),
              std::string(view.datatype)};
}

Triple to_owned(const TripleView& view) {
  return Triple{to_owned(view.subject), to_owned(view.predicate), to_owned(view.object)};
}

LineKind LineParser::parse(std::string_view line, TripleView& out) {
  scratch_.clear();
  // Decoded text is never longer than its escaped form, so views into the
  // scratch buffer stay valid for the whole line.
  scratch_.reserve(line.size());

  Cursor cur(line, scratch_);
  cur.skip_ws();
  if (cur.at_end()) return LineKind::Blank;
  if (cur.peek() == '#') return LineKind::Comment;

  if (!cur.term(out.subject, true, false)) return LineKind::Malformed;
  cur.skip_ws();
  if (!cur.term(out.predicate, false, false)) return LineKind::Malformed;
  cur.skip_ws();
  if (!cur.term(out.object, true, true)) return LineKind::Malformed;
  if (!cur.terminator()) return LineKind::Malformed;
  return LineKind::Statement;
}

ParseStats& ParseStats::operator+=(const ParseStats& other) {
  lines_read += other.lines_read;
  lines_skipped_malformed += other.lines_skipped_malformed;
  bytes_read += other.bytes_read;
  return *this;
}

void parse_nt_stream(io::ByteSource& source, const TripleSink& sink, ParseStats& stats) {
  io::LineReader reader(source);
  LineParser parser;
  TripleView triple;
  std::string_view line;
  const std::uint64_t bytes_before = reader.bytes_consumed();
  while (reader.next(line)) {
    ++stats.lines_read;
    switch (parser.parse(line, triple)) {
      case LineKind::Statement: sink(triple); break;
      case LineKind::Malformed: ++stats.lines_skipped_malformed; break;
      case LineKind::Blank:
      case LineKind::Comment: break;
    }
  }
  stats.bytes_read += reader.bytes_consumed() - bytes_before;
}

std::vector<Triple> parse_nt_string(std::string_view text, ParseStats& stats) {
  std::vector<Triple> triples;
  auto source = io::memory_source(text);
  parse_nt_stream(*source, [&](const TripleView& t) { triples.push_back(to_owned(t)); }, stats);
  return triples;
}

}  // namespace onomast::nt
