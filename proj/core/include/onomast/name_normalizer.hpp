#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace onomast::names {

struct NormalizerOptions {
  // Longest all-uppercase token treated as initials ("TJ", "JRR").
  // 0 removes the cap: every all-uppercase token of two or more letters goes.
  std::size_t initials_max_len = 3;
};

// Maps UTF-8 text to ASCII through the built-in Latin table. ASCII passes
// through; code points outside the table and invalid bytes are dropped.
std::string transliterate_ascii(std::string_view utf8);

// Canonical join key: lower-case ASCII tokens over [a-z0-9_], single spaces.
class CleanName {
 public:
  const std::string& text() const { return text_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  bool compound() const { return tokens_.size() > 1; }

  friend bool operator==(const CleanName& a, const CleanName& b) { return a.text_ == b.text_; }

 private:
  friend std::optional<CleanName> clean(std::string_view, const NormalizerOptions&);
  CleanName() = default;

  std::string text_;
  std::vector<std::string> tokens_;
};

// transliterate -> non-word characters to spaces -> split on whitespace ->
// drop single-character tokens -> drop all-uppercase initials -> lower-case.
// Empty when nothing survives.
std::optional<CleanName> clean(std::string_view raw, const NormalizerOptions& options = {});

std::string_view first_token(const CleanName& name);

}  // namespace onomast::names
