#include "onomast/name_normalizer.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>

namespace onomast::names {
namespace {

struct TranslitEntry {
  std::uint32_t code_point;
  const char* ascii;
};

constexpr TranslitEntry kTable[] = {
#include "translit_table.inc"
};

static_assert(std::is_sorted(std::begin(kTable), std::end(kTable),
                             [](const TranslitEntry& a, const TranslitEntry& b) {
                               return a.code_point < b.code_point;
                             }));

const char* lookup(std::uint32_t cp) {
  const auto* it = std::lower_bound(
      std::begin(kTable), std::end(kTable), cp,
      [](const TranslitEntry& e, std::uint32_t value) { return e.code_point < value; });
  if (it == std::end(kTable) || it->code_point != cp) return "";
  return it->ascii;
}

// Decodes one UTF-8 sequence at text[i]. Returns the number of bytes used,
// or 0 for an invalid sequence.
std::size_t decode_utf8(std::string_view text, std::size_t i, std::uint32_t& cp) {
  const auto lead = static_cast<unsigned char>(text[i]);
  std::size_t len = 0;
  std::uint32_t min = 0;
  if (lead < 0x80) {
    cp = lead;
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4, cp = lead & 0x07, min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto c = static_cast<unsigned char>(text[i + k]);
    if ((c & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return len;
}

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool is_initials(std::string_view token, std::size_t max_len) {
  if (token.size() < 2) return false;
  if (max_len != 0 && token.size() > max_len) return false;
  return std::all_of(token.begin(), token.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

}  // namespace

std::string transliterate_ascii(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  for (std::size_t i = 0; i < utf8.size();) {
    std::uint32_t cp = 0;
    const std::size_t len = decode_utf8(utf8, i, cp);
    if (len == 0) {
      ++i;
      continue;
    }
    i += len;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else {
      out += lookup(cp);
    }
  }
  return out;
}

std::optional<CleanName> clean(std::string_view raw, const NormalizerOptions& options) {
  const std::string ascii = transliterate_ascii(raw);

  CleanName name;
  std::size_t i = 0;
  while (i < ascii.size()) {
    while (i < ascii.size() && !is_word_char(ascii[i])) ++i;
    const std::size_t start = i;
    while (i < ascii.size() && is_word_char(ascii[i])) ++i;
    if (i == start) break;

    const std::string_view token(ascii.data() + start, i - start);
    if (token.size() == 1) continue;
    if (is_initials(token, options.initials_max_len)) continue;

    std::string lowered(token);
    for (char& c : lowered) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (!name.text_.empty()) name.text_.push_back(' ');
    name.text_ += lowered;
    name.tokens_.push_back(std::move(lowered));
  }
  if (name.tokens_.empty()) return std::nullopt;
  return name;
}

std::string_view first_token(const CleanName& name) { return name.tokens().front(); }

}  // namespace onomast::names
