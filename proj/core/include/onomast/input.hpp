#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace onomast::io {

// Sequential byte source. read() returns 0 at end of input.
class ByteSource {
 public:
  virtual ~ByteSource() = default;
  virtual std::size_t read(char* buffer, std::size_t size) = 0;
};

// True when the file starts with the gzip magic bytes 1f 8b.
bool is_gzip(const std::filesystem::path& path);

// Opens a plain or gzip-compressed file; compression is detected from the
// magic bytes, never from the extension.
std::unique_ptr<ByteSource> open_source(const std::filesystem::path& path);

// Reads the half-open byte range [begin, end) of an uncompressed file.
std::unique_ptr<ByteSource> open_range(const std::filesystem::path& path, std::uint64_t begin,
                                       std::uint64_t end);

// Wraps an in-memory buffer; the buffer must outlive the source.
std::unique_ptr<ByteSource> memory_source(std::string_view bytes);

// Splits an uncompressed file into at most `parts` contiguous ranges whose
// boundaries fall just after a '\n'. Ranges are non-empty and cover the file.
std::vector<std::pair<std::uint64_t, std::uint64_t>> split_at_lines(
    const std::filesystem::path& path, std::size_t parts);

// Copies a stream (usually standard input) into a temporary file so it can
// be read twice. The file is removed when the object is destroyed.
class SpooledStdin {
 public:
  explicit SpooledStdin(std::istream& in);
  ~SpooledStdin();
  SpooledStdin(const SpooledStdin&) = delete;
  SpooledStdin& operator=(const SpooledStdin&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Line splitter over a ByteSource. Memory is bounded by the longest line.
// Lines are returned without the terminating "\n" or "\r\n".
class LineReader {
 public:
  explicit LineReader(ByteSource& source, std::size_t buffer_size = 1 << 20);

  // The view stays valid until the next call.
  bool next(std::string_view& line);

  std::uint64_t bytes_consumed() const { return bytes_consumed_; }

 private:
  bool refill();

  ByteSource& source_;
  std::vector<char> buffer_;
  std::size_t begin_ = 0;
  std::size_t end_ = 0;
  bool eof_ = false;
  std::uint64_t bytes_consumed_ = 0;
};

}  // namespace onomast::io
