#include "internal.hpp"

#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace latkick::detail {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

CsvBuilder& CsvBuilder::begin_row() {
  if (in_row_ && row_cells_ != columns_) {
    throw std::logic_error("CsvBuilder: row has wrong number of cells");
  }
  if (in_row_) body_ += '\n';
  in_row_ = true;
  row_cells_ = 0;
  return *this;
}

CsvBuilder& CsvBuilder::add(double v) { return add(format_double(v)); }

CsvBuilder& CsvBuilder::add(int v) { return add(std::to_string(v)); }

CsvBuilder& CsvBuilder::add(const std::string& v) {
  if (!in_row_) throw std::logic_error("CsvBuilder: add outside a row");
  if (row_cells_ > 0) body_ += ',';
  body_ += v;
  ++row_cells_;
  return *this;
}

std::string CsvBuilder::str() const {
  std::string out = body_;
  if (in_row_) {
    if (row_cells_ != columns_) {
      throw std::logic_error("CsvBuilder: last row has wrong number of cells");
    }
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::span<const char> bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xF];
    h >>= 4;
  }
  return out;
}

void parallel_for_indexed(std::size_t n, int threads,
                          const std::function<void(std::size_t)>& fn) {
  if (threads < 1) threads = 1;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace latkick::detail
