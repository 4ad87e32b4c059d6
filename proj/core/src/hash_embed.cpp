#include <litmap/embedding.hpp>

#include <litmap/error.hpp>
#include <litmap/hashing.hpp>
#include <litmap/textprep.hpp>

#include <cmath>

namespace litmap::embedding {

HashEmbedResult hash_embed(const std::vector<IdText>& texts, std::size_t dim, Kind kind) {
  if (dim < 2) throw InvalidArgument("hash_embed dim must be >= 2");
  std::vector<std::string> ids;
  std::vector<double> values(texts.size() * dim, 0.0);
  HashEmbedResult result;
  ids.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    double* row = values.data() + i * dim;
    for (const auto& token : textprep::tokenize(texts[i].text)) {
      const std::uint64_t h = hashing::fnv1a64(token);
      const double sign = (hashing::mix64(h) >> 63) ? -1.0 : 1.0;
      row[h % dim] += sign;
    }
    double norm = 0.0;
    for (std::size_t k = 0; k < dim; ++k) norm += row[k] * row[k];
    if (norm == 0.0) {
      row[0] = 1.0;
      result.degenerate_ids.push_back(texts[i].id);
    } else {
      norm = std::sqrt(norm);
      for (std::size_t k = 0; k < dim; ++k) row[k] /= norm;
    }
    ids.push_back(texts[i].id);
  }
  result.matrix = EmbeddingMatrix(std::move(ids), dim, std::move(values), kind);
  return result;
}

}  // namespace litmap::embedding
