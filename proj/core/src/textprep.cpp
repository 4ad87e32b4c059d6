#include <litmap/textprep.hpp>

#include <litmap/error.hpp>
#include <litmap/resources.hpp>
#include <litmap/text_util.hpp>

#include <json.hpp>

#include <unordered_map>

namespace litmap::textprep {

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') || u >= 0x80;
}

bool is_lower_alpha(std::string_view w) {
  for (char c : w) {
    if (c < 'a' || c > 'z') return false;
  }
  return !w.empty();
}

bool has_vowel(std::string_view w) {
  return w.find_first_of("aeiouy") != std::string_view::npos;
}

bool is_consonant(char c) { return c >= 'a' && c <= 'z' && std::string_view("aeiou").find(c) == std::string_view::npos; }

// "runn" -> "run", "stopp" -> "stop"; l, s and z doubles are genuine ("fill").
std::string repair_double(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && is_consonant(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

}  // namespace

Tokens tokenize(std::string_view text) {
  Tokens tokens;
  std::string current;
  auto flush = [&] {
    while (!current.empty() && current.back() == '-') current.pop_back();
    if (text::codepoint_count(current) >= 2) tokens.push_back(current);
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (is_word_byte(c)) {
      current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (c == '-' && !current.empty() && current.back() != '-' && i + 1 < text.size() &&
               is_word_byte(text[i + 1])) {
      current.push_back('-');
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

// ---- stop words --------------------------------------------------------------

StopwordList::StopwordList(std::set<std::string> words, std::string provenance)
    : words_(words.begin(), words.end()), provenance_(std::move(provenance)) {}

StopwordList StopwordList::parse(std::string_view content, std::string provenance) {
  std::set<std::string> words;
  for (const auto& raw : text::split_lines(content)) {
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.find_first_of(" \t") != std::string_view::npos) {
      throw InvalidArgument("stop word contains whitespace: '" + std::string(line) + "'");
    }
    words.insert(text::to_lower(line));
  }
  return StopwordList(std::move(words), std::move(provenance));
}

StopwordList StopwordList::builtin() {
  return parse(resources::get("stopwords_en.txt"), "builtin:stopwords_en.txt");
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  return parse(text::read_file(path), path.string());
}

bool StopwordList::contains(std::string_view token) const { return words_.contains(token); }

Tokens remove_stopwords(const Tokens& tokens, const StopwordList& list) {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!list.contains(t)) out.push_back(t);
  }
  return out;
}

// ---- bigrams -----------------------------------------------------------------

bool BigramModel::accepts(const std::string& a, const std::string& b) const {
  const auto it = pair_scores.find({a, b});
  return it != pair_scores.end() && it->second > threshold;
}

BigramModel learn_bigrams(const std::vector<Tokens>& corpus, std::size_t min_count,
                          double threshold) {
  if (min_count < 1) throw InvalidArgument("bigram min_count must be >= 1");
  std::unordered_map<std::string, std::size_t> unigrams;
  std::map<std::pair<std::string, std::string>, std::size_t> pairs;
  for (const auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++unigrams[doc[i]];
      if (i + 1 < doc.size()) ++pairs[{doc[i], doc[i + 1]}];
    }
  }
  if (unigrams.empty()) throw EmptyCorpus("cannot learn bigrams from an empty corpus");

  BigramModel model;
  model.min_count = min_count;
  model.threshold = threshold;
  const double vocab = static_cast<double>(unigrams.size());
  for (const auto& [pair, count] : pairs) {
    if (count < min_count) continue;
    const double ca = static_cast<double>(unigrams.at(pair.first));
    const double cb = static_cast<double>(unigrams.at(pair.second));
    const double score = (static_cast<double>(count) - static_cast<double>(min_count)) * vocab /
                         (ca * cb);
    model.pair_scores.emplace(pair, score);
  }
  return model;
}

Tokens apply_bigrams(const Tokens& tokens, const BigramModel& model) {
  Tokens out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size();) {
    if (i + 1 < tokens.size() && model.accepts(tokens[i], tokens[i + 1])) {
      out.push_back(tokens[i] + "_" + tokens[i + 1]);
      i += 2;
    } else {
      out.push_back(tokens[i]);
      ++i;
    }
  }
  return out;
}

// ---- lemmatizer --------------------------------------------------------------

Lemmatizer Lemmatizer::parse(std::string_view tsv) {
  Lemmatizer lem;
  std::size_t line_no = 0;
  for (const auto& raw : text::split_lines(tsv)) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto parts = text::split(line, '\t');
    if (parts.size() != 2) throw FormatError(line_no, "expected inflected<TAB>lemma");
    lem.table_[text::to_lower(text::trim(parts[0]))] = text::to_lower(text::trim(parts[1]));
  }
  return lem;
}

Lemmatizer Lemmatizer::builtin() { return parse(resources::get("lemmas_en.tsv")); }

std::string Lemmatizer::step(const std::string& w) const {
  if (const auto it = table_.find(w); it != table_.end()) return it->second;
  if (!is_lower_alpha(w)) return w;
  const std::size_t n = w.size();
  if (n > 4 && w.ends_with("ies")) return w.substr(0, n - 3) + "y";
  if (w.ends_with("sses")) return w.substr(0, n - 2);
  if (n > 3 && w.ends_with('s') && !w.ends_with("ss") && !w.ends_with("us") &&
      !w.ends_with("is")) {
    return w.substr(0, n - 1);
  }
  if (n > 5 && w.ends_with("ing")) {
    const std::string stem = w.substr(0, n - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return repair_double(stem);
  }
  if (n > 4 && w.ends_with("ed")) {
    const std::string stem = w.substr(0, n - 2);
    if (stem.size() >= 3 && has_vowel(stem) && !stem.ends_with('e')) return repair_double(stem);
  }
  return w;
}

std::string Lemmatizer::lemmatize_word(std::string_view word) const {
  std::string current(word);
  // Every rule shortens the word and table chains are short, so this
  // terminates well inside the bound.
  for (int i = 0; i < 16; ++i) {
    std::string next = step(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string Lemmatizer::lemmatize(std::string_view token) const {
  if (token.find('_') == std::string_view::npos) return lemmatize_word(token);
  std::string out;
  for (auto part : text::split(token, '_')) {
    if (!out.empty()) out.push_back('_');
    out += lemmatize_word(part);
  }
  return out;
}

Tokens Lemmatizer::lemmatize(const Tokens& tokens) const {
  Tokens out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lemmatize(std::string_view(t)));
  return out;
}

// ---- pipeline ----------------------------------------------------------------

std::vector<SanitizedDoc> sanitize_corpus(const std::vector<PrepInput>& docs,
                                          const StopwordList& stopwords,
                                          const Lemmatizer& lemmatizer,
                                          const PrepOptions& options) {
  std::vector<Tokens> filtered;
  filtered.reserve(docs.size());
  for (const auto& d : docs) filtered.push_back(remove_stopwords(tokenize(d.text), stopwords));

  const BigramModel model =
      learn_bigrams(filtered, options.bigram_min_count, options.bigram_threshold);

  std::vector<SanitizedDoc> out;
  out.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    SanitizedDoc doc{docs[i].record_id, {}};
    for (auto& t : lemmatizer.lemmatize(apply_bigrams(filtered[i], model))) {
      if (!t.empty() && !stopwords.contains(t)) doc.tokens.push_back(std::move(t));
    }
    out.push_back(std::move(doc));
  }
  return out;
}

std::string to_jsonl(const std::vector<SanitizedDoc>& docs) {
  std::string out;
  for (const auto& d : docs) {
    nlohmann::ordered_json j;
    j["record_id"] = d.record_id;
    j["tokens"] = d.tokens;
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

std::vector<SanitizedDoc> from_jsonl(std::string_view content) {
  std::vector<SanitizedDoc> docs;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(content)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      docs.push_back({j.at("record_id").get<std::string>(), j.at("tokens").get<Tokens>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return docs;
}

void save_sanitized(const std::filesystem::path& path, const std::vector<SanitizedDoc>& docs) {
  text::write_file(path, to_jsonl(docs));
}

std::vector<SanitizedDoc> load_sanitized(const std::filesystem::path& path) {
  return from_jsonl(text::read_file(path));
}

}  // namespace litmap::textprep
