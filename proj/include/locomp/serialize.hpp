#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "locomp/covering.hpp"
#include "locomp/diagnostics.hpp"
#include "locomp/localization.hpp"
#include "locomp/quadrature.hpp"
#include "locomp/space.hpp"

namespace locomp {

using Json = nlohmann::ordered_json;

/// "%.17g": enough digits to read the same double back.
std::string format_double(double v);

Json to_json(const SpaceDescriptor& s);
Json to_json(const RuleSpec& s);
Json to_json(const Point& z);  // [[re, im], ...]
Json to_json(const Profile& p);
Json to_json(const TailProfile& t);
Json to_json(const LocalizationCertificate& c);
Json to_json(const RudinForelliCheck& c);
Json to_json(const CoveringReport& r);
Json to_json(const DecompositionError& d);
Json to_json(const EquivalenceReport& e);
Json to_json(const CompactnessReport& r);

/// Comma-separated, UTF-8, LF line endings.  An optional first line "# ..." carries metadata.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  void add_numbers(const std::vector<double>& row);
  std::string render(const std::string& comment = "") const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// CSV for a profile: shell_or_r, value, error_bar.
CsvTable profile_table(const Profile& p);
CsvTable profile_table(const TailProfile& t);

/// Writes bytes exactly (binary mode, so no CRLF translation).
void write_text(const std::filesystem::path& path, const std::string& text);
/// dump(2) plus a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace locomp
