#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dislo {

/// printf("%.17g").
std::string format_double(double v);

/// Serializes JSON with every floating-point value at 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// Writes to a temporary sibling, then renames over path. Parent directories
/// are created as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Resolves a relative output directory against $DISLO_OUTPUT_ROOT when set.
std::filesystem::path resolve_output(const std::filesystem::path& p);

/// Accumulates a CSV document in memory.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string> header);
  explicit CsvWriter(const std::vector<std::string>& header);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  std::size_t rows() const noexcept { return rows_; }
  const std::string& str() const noexcept { return text_; }
  void save(const std::filesystem::path& path) const { atomic_write(path, text_); }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

}  // namespace dislo
