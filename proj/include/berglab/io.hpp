#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "berglab/domain.hpp"

namespace berglab {

using json = nlohmann::json;

// Parsed domain description. Zalcman and Cantor keep their parameters so
// reports can echo them; disk and annulus are reference domains.
struct DomainSpec {
  enum class Type { Zalcman, Cantor, Disk, Annulus };
  Type type = Type::Disk;
  std::string family;     // h1 / h2
  double param = 0.0;     // alpha or beta
  double x1 = 0.0;
  int K = 0;
  Truncation variant = Truncation::Superset;
  double l0 = 0.0;
  int J = 0;
  double radius = 1.0;    // disk
  double inner = 0.5;     // annulus
};

// Throws ConfigInvalid on unknown types, missing or malformed fields.
DomainSpec parse_domain(const json& j);
json to_json(const DomainSpec& d);

ScaleFunction scale_of(const DomainSpec& d);
ZalcmanDomain make_zalcman(const DomainSpec& d);
CantorSet make_cantor(const DomainSpec& d);
PlanarDomain make_planar(const DomainSpec& d);

// Shortest round-trip decimal.
std::string format_double(double v);

using CsvCell = std::variant<std::monostate, double, std::int64_t, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::size_t> column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const json& j);

}  // namespace berglab
