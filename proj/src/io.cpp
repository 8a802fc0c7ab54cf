#include "berglab/io.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include <openssl/evp.h>

#include "berglab/error.hpp"

namespace berglab {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) invalid(std::string("domain: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    invalid(std::string("domain: field '") + key + "' has the wrong type");
  }
}

}  // namespace

DomainSpec parse_domain(const json& j) {
  if (!j.is_object()) invalid("domain must be an object");
  DomainSpec d;
  const auto type = field<std::string>(j, "type");
  if (type == "zalcman") {
    d.type = DomainSpec::Type::Zalcman;
    d.family = field<std::string>(j, "family");
    if (d.family == "h1") {
      d.param = field<double>(j, "alpha");
    } else if (d.family == "h2") {
      d.param = field<double>(j, "beta");
    } else {
      invalid("domain: family must be h1 or h2");
    }
    d.x1 = field<double>(j, "x1");
    d.K = field<int>(j, "K");
    const std::string v = j.value("variant", std::string("superset"));
    if (v == "superset") {
      d.variant = Truncation::Superset;
    } else if (v == "sandwich") {
      d.variant = Truncation::Sandwich;
    } else {
      invalid("domain: variant must be superset or sandwich");
    }
    if (!(d.x1 > 0.0 && d.x1 < 1.0) || d.K < 1) invalid("domain: need 0 < x1 < 1 and K >= 1");
  } else if (type == "cantor") {
    d.type = DomainSpec::Type::Cantor;
    d.l0 = field<double>(j, "l0");
    d.param = field<double>(j, "alpha");
    d.J = field<int>(j, "J");
  } else if (type == "disk") {
    d.type = DomainSpec::Type::Disk;
    d.radius = j.value("radius", 1.0);
    if (!(d.radius > 0.0)) invalid("domain: disk radius must be positive");
  } else if (type == "annulus") {
    d.type = DomainSpec::Type::Annulus;
    d.inner = field<double>(j, "inner");
    if (!(d.inner > 0.0 && d.inner < 1.0)) invalid("domain: annulus needs 0 < inner < 1");
  } else {
    invalid("domain: unknown type '" + type + "'");
  }
  return d;
}

json to_json(const DomainSpec& d) {
  switch (d.type) {
    case DomainSpec::Type::Zalcman: {
      json j{{"type", "zalcman"}, {"family", d.family}, {"x1", d.x1}, {"K", d.K},
             {"variant", d.variant == Truncation::Superset ? "superset" : "sandwich"}};
      j[d.family == "h1" ? "alpha" : "beta"] = d.param;
      return j;
    }
    case DomainSpec::Type::Cantor:
      return {{"type", "cantor"}, {"l0", d.l0}, {"alpha", d.param}, {"J", d.J}};
    case DomainSpec::Type::Disk:
      return {{"type", "disk"}, {"radius", d.radius}};
    case DomainSpec::Type::Annulus:
      return {{"type", "annulus"}, {"inner", d.inner}};
  }
  return {};
}

ScaleFunction scale_of(const DomainSpec& d) {
  if (d.type != DomainSpec::Type::Zalcman) invalid("domain has no scale function");
  return d.family == "h1" ? ScaleFunction::power(d.param) : ScaleFunction::log_power(d.param);
}

ZalcmanDomain make_zalcman(const DomainSpec& d) {
  if (d.type != DomainSpec::Type::Zalcman) invalid("pipeline needs a zalcman domain");
  return build_zalcman(scale_of(d), d.x1, d.K, d.variant);
}

CantorSet make_cantor(const DomainSpec& d) {
  if (d.type != DomainSpec::Type::Cantor) invalid("pipeline needs a cantor domain");
  return build_cantor(d.l0, d.param, d.J);
}

PlanarDomain make_planar(const DomainSpec& d) {
  switch (d.type) {
    case DomainSpec::Type::Zalcman: return make_zalcman(d).planar();
    case DomainSpec::Type::Disk: return PlanarDomain(Disk{0.0, d.radius}, {}, false);
    case DomainSpec::Type::Annulus: return PlanarDomain::annulus(d.inner);
    case DomainSpec::Type::Cantor: break;
  }
  invalid("cantor sets have no planar domain here");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) throw Error(ErrorCode::PreconditionViolated, "csv row width");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            out_ << v;
          } else if constexpr (std::is_same_v<T, std::string>) {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
}

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read " + path.string());
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(in, line)) invalid(path.string() + " is empty");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty()) t.rows.push_back(split(line));
  }
  return t;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot hash " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 14> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigInvalid, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace berglab
