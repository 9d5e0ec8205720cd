#pragma once

// Internal helpers shared by the scenario sources: CSV building with
// shortest round-trip numeric formatting, FNV-1a checksums, and a small
// indexed parallel map for sweep points.

#include <charconv>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace latkick::detail {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);

  CsvBuilder& begin_row();
  CsvBuilder& add(double v);
  CsvBuilder& add(int v);
  CsvBuilder& add(const std::string& v);

  std::string str() const;

 private:
  std::size_t columns_;
  std::string body_;
  std::size_t row_cells_ = 0;
  bool in_row_ = false;
};

std::uint64_t fnv1a64(std::span<const char> bytes);
std::string fnv1a64_hex(std::span<const char> bytes);

/// Evaluates fn(i) for i in [0, n) with at most `threads` workers; results
/// are stored by index so output order never depends on completion order.
void parallel_for_indexed(std::size_t n, int threads,
                          const std::function<void(std::size_t)>& fn);

}  // namespace latkick::detail
