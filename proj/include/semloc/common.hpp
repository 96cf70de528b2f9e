// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace semloc {

/// Failure classes. The CLI maps them onto exit codes 1, 2 and 3.
enum class ErrorKind { usage, data, numeric };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Bad argument or violated precondition on the caller side.
struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(ErrorKind::usage, what) {}
};

/// Malformed or inconsistent input data (files, datasets).
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// Numerical breakdown (non-convergence, non-finite values).
struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

// ---------------------------------------------------------------------------
// Threading
// ---------------------------------------------------------------------------

namespace detail {
inline std::atomic<unsigned>& thread_limit_storage() {
  static std::atomic<unsigned> limit{0};
  return limit;
}
// Set inside pool workers; nested parallel_for calls then run inline.
inline thread_local bool in_parallel_worker = false;
}  // namespace detail

/// Sets the worker count used by every parallel stage. 0 means hardware concurrency.
inline void set_thread_count(unsigned n) { detail::thread_limit_storage().store(n); }

inline unsigned thread_count() {
  unsigned n = detail::thread_limit_storage().load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Runs fn(i) for i in [0, n) over contiguous blocks. Each index is visited
/// exactly once, so results written per-index do not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = detail::in_parallel_worker ? 1 : std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t block = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * block;
    const std::size_t end = std::min(n, begin + block);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      detail::in_parallel_worker = true;
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------------------------
// Little-endian binary streams
// ---------------------------------------------------------------------------

namespace binary {

template <typename T>
T byteswap_if_needed(T value) {
  if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return value;
}

template <typename T>
void write(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  value = byteswap_if_needed(value);
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read(std::istream& is) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw DataError("unexpected end of binary stream");
  return byteswap_if_needed(value);
}

inline void write_string(std::ostream& os, const std::string& s) {
  write<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& is, std::size_t max_len = 1u << 20) {
  const auto n = read<std::uint32_t>(is);
  if (n > max_len) throw DataError("string field too long in binary stream");
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) throw DataError("unexpected end of binary stream");
  return s;
}

/// Writes a fixed 8-byte magic tag followed by a format version.
inline void write_header(std::ostream& os, const char (&magic)[9], std::uint32_t version) {
  os.write(magic, 8);
  write<std::uint32_t>(os, version);
}

inline std::uint32_t read_header(std::istream& is, const char (&magic)[9]) {
  char got[8];
  is.read(got, 8);
  if (!is || std::memcmp(got, magic, 8) != 0)
    throw DataError(std::string("bad magic, expected ") + std::string(magic, 8));
  return read<std::uint32_t>(is);
}

}  // namespace binary

/// 64-bit FNV-1a, used for cache keys (stable across runs and platforms).
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a(s.data(), s.size(), h);
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

}  // namespace semloc
