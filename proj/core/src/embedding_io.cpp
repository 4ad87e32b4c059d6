#include <litmap/embedding.hpp>

#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace litmap::embedding {

std::string_view to_string(Kind kind) {
  return kind == Kind::document ? "document" : "word";
}

Kind parse_kind(std::string_view name) {
  if (name == "document") return Kind::document;
  if (name == "word") return Kind::word;
  throw InvalidArgument("unknown embedding kind: " + std::string(name));
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::size_t dim,
                                 std::vector<double> values, Kind kind)
    : ids_(std::move(ids)), dim_(dim), values_(std::move(values)), kind_(kind) {
  if (dim_ == 0) throw InvalidArgument("embedding dim must be >= 1");
  if (values_.size() != ids_.size() * dim_) {
    throw InvalidArgument("embedding value count does not match rows * dim");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw NonFiniteValue(i / dim_ + 1);
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) throw DuplicateId(ids_[i]);
  }
}

std::optional<std::size_t> EmbeddingMatrix::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix EmbeddingMatrix::subset(std::span<const std::size_t> indices) const {
  std::vector<std::string> ids;
  std::vector<double> values;
  ids.reserve(indices.size());
  values.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    ids.push_back(ids_.at(i));
    const auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
  }
  return EmbeddingMatrix(std::move(ids), dim_, std::move(values), kind_);
}

EmbeddingMatrix parse_embeddings(std::string_view content) {
  const auto lines = text::split_lines(content);
  if (lines.empty()) throw FormatError(1, "missing header");
  std::string_view header = lines[0];
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  if (!header.starts_with("#")) throw FormatError(1, "header must start with '#dim='");
  header.remove_prefix(1);

  std::optional<std::size_t> dim;
  Kind kind = Kind::document;
  for (auto field : text::split(header, '\t')) {
    field = text::trim(field);
    const auto eq = field.find('=');
    if (eq == std::string_view::npos) throw FormatError(1, "bad header field");
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "dim") {
      char* end = nullptr;
      const std::string v(value);
      const long d = std::strtol(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0' || d < 1) throw FormatError(1, "bad dim");
      dim = static_cast<std::size_t>(d);
    } else if (key == "kind") {
      try {
        kind = parse_kind(value);
      } catch (const InvalidArgument&) {
        throw FormatError(1, "bad kind");
      }
    }
  }
  if (!dim) throw FormatError(1, "header lacks dim");

  std::vector<std::string> ids;
  std::vector<double> values;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    if (text::trim(lines[li]).empty()) continue;
    const auto fields = text::split(lines[li], '\t');
    if (fields[0].empty()) throw FormatError(line_no, "empty id");
    if (fields.size() - 1 != *dim) throw DimensionMismatch(*dim, fields.size() - 1, line_no);
    std::string id(fields[0]);
    if (!seen.emplace(id, line_no).second) throw DuplicateId(id);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const std::string v(text::trim(fields[k]));
      char* end = nullptr;
      const double x = std::strtod(v.c_str(), &end);
      if (v.empty() || *end != '\0') throw FormatError(line_no, "bad number '" + v + "'");
      if (!std::isfinite(x)) throw NonFiniteValue(line_no);
      values.push_back(x);
    }
    ids.push_back(std::move(id));
  }
  return EmbeddingMatrix(std::move(ids), *dim, std::move(values), kind);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(text::read_file(path));
}

std::string format_embeddings(const EmbeddingMatrix& m) {
  std::string out = "#dim=" + std::to_string(m.dim()) + "\tkind=" + std::string(to_string(m.kind())) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += m.ids()[i];
    for (double v : m.row(i)) {
      std::snprintf(buf, sizeof buf, "\t%.9g", v);
      out += buf;
    }
    out.push_back('\n');
  }
  return out;
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  text::write_file(path, format_embeddings(m));
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size(), 0);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) throw ZeroVector();
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

std::string_view to_string(ProviderMode mode) {
  switch (mode) {
    case ProviderMode::file: return "file";
    case ProviderMode::http: return "http";
    case ProviderMode::hash: return "hash";
  }
  return "hash";
}

ProviderMode parse_provider_mode(std::string_view name) {
  if (name == "file") return ProviderMode::file;
  if (name == "http") return ProviderMode::http;
  if (name == "hash") return ProviderMode::hash;
  throw ConfigInvalid("embedding.mode", "expected file, http, or hash");
}

void ProviderConfig::validate() const {
  if (mode == ProviderMode::http && (!endpoint || endpoint->empty())) {
    throw ConfigInvalid("embedding.endpoint", "required when mode=http");
  }
  if (mode != ProviderMode::http && endpoint && !endpoint->empty()) {
    throw ConfigInvalid("embedding.endpoint", "only valid when mode=http");
  }
  if (batch_size == 0) throw ConfigInvalid("embedding.batch_size", "must be >= 1");
  if (max_attempts == 0) throw ConfigInvalid("embedding.max_attempts", "must be >= 1");
  if (mode == ProviderMode::hash && hash_dim < 2) {
    throw ConfigInvalid("embedding.hash_dim", "must be >= 2");
  }
}

}  // namespace litmap::embedding
