#pragma once

// Plain CSV with '#'-prefixed comment lines ahead of a single header row.
// Numbers use the shortest round-trip decimal form; a missing value is an
// empty cell.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace attnsphere::harness {

inline constexpr std::array<const char*, 7> kMetricColumns = {"time",         "align_E", "align_F", "align_Fabs",
                                                               "w2_to_target", "v_p",     "energy"};
inline constexpr std::array<const char*, 4> kEnvelopeColumns = {"envelope_theorem", "envelope_w2_stated",
                                                                "envelope_w2_proof", "envelope_lyapunov"};

std::string format_number(double value);
std::string format_cell(const std::optional<double>& value);

struct CsvTable {
  std::vector<std::string> comments;  ///< without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  /// Column index; throws InvalidArgument if absent.
  std::size_t column(std::string_view name) const;
  /// Value of `key=` among the comment lines, if present.
  std::optional<std::string> comment_value(std::string_view key) const;
};

/// Throws IoFailure or ParseError.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace attnsphere::harness
