#pragma once

// Corpus sanitization: tokenization, stop-word removal, bigram phrases, and
// lemmatization.

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace litmap::textprep {

using Tokens = std::vector<std::string>;

/// Lowercases and splits on anything that is not a letter or digit, keeping
/// hyphens between two word characters ("covid-19", "state-of-the-art").
/// Tokens shorter than two characters are dropped. Bytes >= 0x80 count as
/// letters.
Tokens tokenize(std::string_view text);

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::set<std::string> words, std::string provenance);

  /// Bundled English list plus abstract boilerplate ("method", "background",
  /// "result", ...).
  static StopwordList builtin();
  /// One token per line; `#` starts a comment.
  static StopwordList parse(std::string_view content, std::string provenance);
  static StopwordList load(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  const std::set<std::string, std::less<>>& words() const noexcept { return words_; }
  const std::string& provenance() const noexcept { return provenance_; }

 private:
  std::set<std::string, std::less<>> words_;
  std::string provenance_;
};

Tokens remove_stopwords(const Tokens& tokens, const StopwordList& list);

struct BigramModel {
  /// Every adjacent pair seen at least min_count times, with its score.
  std::map<std::pair<std::string, std::string>, double> pair_scores;
  std::size_t min_count = 5;
  double threshold = 10.0;

  bool accepts(const std::string& a, const std::string& b) const;
};

/// score(a,b) = (count(a,b) - min_count) * V / (count(a) * count(b)), V the
/// number of distinct tokens. Throws EmptyCorpus if there are no tokens and
/// InvalidArgument if min_count is 0.
BigramModel learn_bigrams(const std::vector<Tokens>& corpus, std::size_t min_count = 5,
                          double threshold = 10.0);

/// Single left-to-right pass; an accepted pair is joined with '_' and both
/// tokens are consumed.
Tokens apply_bigrams(const Tokens& tokens, const BigramModel& model);

class Lemmatizer {
 public:
  /// Bundled English lemma table.
  static Lemmatizer builtin();
  /// TSV `inflected<TAB>lemma`; `#` comments allowed.
  static Lemmatizer parse(std::string_view tsv);

  /// Table lookup, then suffix rules (ies->y, sses->ss, plural s, ing/ed with
  /// doubled-consonant repair), iterated to a fixpoint so the result is
  /// stable under re-lemmatization. Bigram parts are lemmatized separately.
  std::string lemmatize(std::string_view token) const;
  Tokens lemmatize(const Tokens& tokens) const;

  std::size_t table_size() const noexcept { return table_.size(); }

 private:
  std::string step(const std::string& word) const;
  std::string lemmatize_word(std::string_view word) const;
  std::unordered_map<std::string, std::string> table_;
};

struct SanitizedDoc {
  std::string record_id;
  Tokens tokens;
  bool operator==(const SanitizedDoc&) const = default;
};

struct PrepOptions {
  std::size_t bigram_min_count = 5;
  double bigram_threshold = 10.0;
};

struct PrepInput {
  std::string record_id;
  std::string text;
};

/// stop words -> bigrams (learned over the whole corpus) -> lemmas. Tokens
/// whose lemma is itself a stop word are dropped so no output token is in
/// the list.
std::vector<SanitizedDoc> sanitize_corpus(const std::vector<PrepInput>& docs,
                                          const StopwordList& stopwords,
                                          const Lemmatizer& lemmatizer,
                                          const PrepOptions& options = {});

/// JSONL, one {"record_id":..., "tokens":[...]} per line.
std::string to_jsonl(const std::vector<SanitizedDoc>& docs);
std::vector<SanitizedDoc> from_jsonl(std::string_view content);
void save_sanitized(const std::filesystem::path& path, const std::vector<SanitizedDoc>& docs);
std::vector<SanitizedDoc> load_sanitized(const std::filesystem::path& path);

}  // namespace litmap::textprep
