#include "onomast/input.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>
#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>

#include "onomast/errors.hpp"

namespace onomast::io {
namespace {

std::string errno_message(const std::filesystem::path& path) {
  return path.string() + ": " + std::strerror(errno);
}

class FdRangeSource final : public ByteSource {
 public:
  FdRangeSource(const std::filesystem::path& path, std::uint64_t begin, std::uint64_t end)
      : path_(path), offset_(begin), end_(end) {
    fd_ = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw IoError(errno_message(path));
#ifdef POSIX_FADV_SEQUENTIAL
    ::posix_fadvise(fd_, static_cast<off_t>(begin), static_cast<off_t>(end - begin),
                    POSIX_FADV_SEQUENTIAL);
#endif
  }
  ~FdRangeSource() override { ::close(fd_); }

  std::size_t read(char* buffer, std::size_t size) override {
    if (offset_ >= end_) return 0;
    size = static_cast<std::size_t>(std::min<std::uint64_t>(size, end_ - offset_));
    for (;;) {
      const ssize_t n = ::pread(fd_, buffer, size, static_cast<off_t>(offset_));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError(errno_message(path_));
      }
      offset_ += static_cast<std::uint64_t>(n);
      if (n == 0) end_ = offset_;  // file shrank
      return static_cast<std::size_t>(n);
    }
  }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t offset_;
  std::uint64_t end_;
};

class GzipSource final : public ByteSource {
 public:
  explicit GzipSource(const std::filesystem::path& path) : path_(path) {
    file_ = ::gzopen(path.c_str(), "rb");
    if (file_ == nullptr) throw IoError("cannot open " + path.string());
    ::gzbuffer(file_, 1 << 18);
  }
  ~GzipSource() override { ::gzclose(file_); }

  std::size_t read(char* buffer, std::size_t size) override {
    const auto chunk = static_cast<unsigned>(std::min<std::size_t>(size, 1u << 30));
    const int n = ::gzread(file_, buffer, chunk);
    if (n < 0) {
      int code = 0;
      const char* message = ::gzerror(file_, &code);
      throw IoError(path_.string() + ": " + (message ? message : "gzip read error"));
    }
    return static_cast<std::size_t>(n);
  }

 private:
  std::filesystem::path path_;
  gzFile file_ = nullptr;
};

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(std::string_view bytes) : bytes_(bytes) {}

  std::size_t read(char* buffer, std::size_t size) override {
    const std::size_t n = std::min(size, bytes_.size() - pos_);
    std::memcpy(buffer, bytes_.data() + pos_, n);
    pos_ += n;
    return n;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t checked_size(const std::filesystem::path& path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError(path.string() + ": " + ec.message());
  return size;
}

}  // namespace

bool is_gzip(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  unsigned char magic[2] = {0, 0};
  in.read(reinterpret_cast<char*>(magic), 2);
  return in.gcount() == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

std::unique_ptr<ByteSource> open_source(const std::filesystem::path& path) {
  if (is_gzip(path)) return std::make_unique<GzipSource>(path);
  return std::make_unique<FdRangeSource>(path, 0, checked_size(path));
}

std::unique_ptr<ByteSource> open_range(const std::filesystem::path& path, std::uint64_t begin,
                                       std::uint64_t end) {
  return std::make_unique<FdRangeSource>(path, begin, end);
}

std::unique_ptr<ByteSource> memory_source(std::string_view bytes) {
  return std::make_unique<MemorySource>(bytes);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> split_at_lines(
    const std::filesystem::path& path, std::size_t parts) {
  const std::uint64_t size = checked_size(path);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  if (size == 0) return ranges;
  parts = std::max<std::size_t>(parts, 1);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<std::uint64_t> starts{0};
  for (std::size_t i = 1; i < parts; ++i) {
    std::uint64_t probe = std::max(size * i / parts, starts.back());
    if (probe >= size) break;
    // Start the next range just after the first newline at or after probe-1,
    // so a probe landing on a line start keeps that line whole.
    in.clear();
    in.seekg(static_cast<std::streamoff>(probe == 0 ? 0 : probe - 1));
    std::uint64_t pos = probe == 0 ? 0 : probe - 1;
    char c = 0;
    bool found = false;
    while (in.get(c)) {
      ++pos;
      if (c == '\n') {
        found = true;
        break;
      }
    }
    if (!found || pos >= size) break;
    if (pos > starts.back()) starts.push_back(pos);
  }
  for (std::size_t i = 0; i < starts.size(); ++i) {
    ranges.emplace_back(starts[i], i + 1 < starts.size() ? starts[i + 1] : size);
  }
  return ranges;
}

SpooledStdin::SpooledStdin(std::istream& in) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("onomast-stdin-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw IoError("cannot create " + path_.string());
  if (in.peek() != std::char_traits<char>::eof()) out << in.rdbuf();
  if (in.bad()) throw IoError("error reading standard input");
  if (!out) throw IoError("error writing " + path_.string());
}

SpooledStdin::~SpooledStdin() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

LineReader::LineReader(ByteSource& source, std::size_t buffer_size)
    : source_(source), buffer_(std::max<std::size_t>(buffer_size, 64)) {}

bool LineReader::refill() {
  if (eof_) return false;
  if (begin_ > 0) {
    std::memmove(buffer_.data(), buffer_.data() + begin_, end_ - begin_);
    end_ -= begin_;
    begin_ = 0;
  }
  if (end_ == buffer_.size()) buffer_.resize(buffer_.size() * 2);
  const std::size_t n = source_.read(buffer_.data() + end_, buffer_.size() - end_);
  if (n == 0) {
    eof_ = true;
    return false;
  }
  end_ += n;
  return true;
}

bool LineReader::next(std::string_view& line) {
  std::size_t scanned = begin_;
  for (;;) {
    const char* base = buffer_.data();
    const void* nl = std::memchr(base + scanned, '\n', end_ - scanned);
    if (nl != nullptr) {
      const auto pos = static_cast<std::size_t>(static_cast<const char*>(nl) - base);
      std::size_t stop = pos;
      if (stop > begin_ && base[stop - 1] == '\r') --stop;
      line = std::string_view(base + begin_, stop - begin_);
      bytes_consumed_ += pos + 1 - begin_;
      begin_ = pos + 1;
      return true;
    }
    const std::size_t pending = end_ - begin_;
    if (!refill()) {
      if (pending == 0) return false;
      std::size_t stop = end_;
      if (buffer_[stop - 1] == '\r') --stop;
      line = std::string_view(buffer_.data() + begin_, stop - begin_);
      bytes_consumed_ += end_ - begin_;
      begin_ = end_;
      return true;
    }
    scanned = begin_ + pending;
  }
}

}  // namespace onomast::io
