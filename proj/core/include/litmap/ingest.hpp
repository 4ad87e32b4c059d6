#pragma once

// Bibliographic record model, format parsers, deduplication, and relevance
// screening with PRISMA-style accounting.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace litmap::ingest {

enum class SourceDb { pubmed, scopus, wos, other };

std::string_view to_string(SourceDb db);
/// Accepts the canonical names plus a few common spellings ("web of science",
/// "medline"); anything else maps to `other`.
SourceDb parse_source_db(std::string_view name);

struct Affiliation {
  std::string institution;
  std::string country;
  bool operator==(const Affiliation&) const = default;
};

struct AuthorRef {
  std::string last_name;
  std::string first_name;
  /// Source order; the first entry is the credited institution.
  std::vector<Affiliation> affiliations;

  /// Case-folded, whitespace-normalized "last, first".
  std::string identity_key() const;
  bool operator==(const AuthorRef&) const = default;
};

struct BiblioRecord {
  std::string record_id;
  SourceDb source_db = SourceDb::other;
  std::string title;
  std::string abstract;
  std::optional<int> year;
  std::optional<int> month;
  std::optional<std::string> doi;
  std::optional<std::string> language;
  bool retracted = false;
  std::vector<AuthorRef> authors;

  bool operator==(const BiblioRecord&) const = default;
};

struct PrismaReport {
  std::size_t collected = 0;
  std::size_t removed_duplicates = 0;
  std::size_t removed_no_abstract = 0;
  std::size_t removed_irrelevant = 0;
  std::size_t removed_non_english = 0;
  std::size_t removed_retracted = 0;
  std::size_t final_count = 0;

  std::size_t total_removed() const noexcept {
    return removed_duplicates + removed_no_abstract + removed_irrelevant +
           removed_non_english + removed_retracted;
  }
  /// collected == final + sum of removals.
  bool balanced() const noexcept { return collected == final_count + total_removed(); }

  /// Flat `key=value` lines.
  std::string to_key_value() const;
  /// CSV `stage,count` table.
  std::string to_csv() const;
  bool operator==(const PrismaReport&) const = default;
};

// ---- parsing ---------------------------------------------------------------

enum class InputFormat { ris, medline, csv };

InputFormat parse_input_format(std::string_view name);

/// A per-record problem. Parsing continues past it.
struct MalformedRecord {
  std::size_t ordinal = 0;  // 1-based position of the record in the file
  std::string reason;
};

struct ParseResult {
  std::vector<BiblioRecord> records;
  std::vector<MalformedRecord> issues;
  bool lossy_utf8 = false;
};

/// Throws FileUnreadable or EmptyFile; everything else is reported per record.
ParseResult parse_records(const std::filesystem::path& path, InputFormat format);

/// Same as parse_records but over in-memory text. `origin` seeds generated
/// record ids.
ParseResult parse_text(std::string text, InputFormat format, std::string_view origin);

/// Lowercases and strips `https://doi.org/`, `doi:` and similar prefixes.
/// Returns nullopt unless the result looks like `10.<digits>/<suffix>`.
std::optional<std::string> normalize_doi(std::string_view raw);

/// Canonical corpus CSV with the header
/// `record_id,source_db,title,abstract,year,month,doi,language,retracted,authors_json`.
std::string write_corpus_csv(const std::vector<BiblioRecord>& records);
void save_corpus(const std::filesystem::path& path, const std::vector<BiblioRecord>& records);
/// Loads a canonical corpus; malformed rows throw FormatError.
std::vector<BiblioRecord> load_corpus(const std::filesystem::path& path);

// ---- dedup and screening -----------------------------------------------------

/// Case-fold, strip punctuation, collapse whitespace.
std::string normalize_title(std::string_view title);

struct DedupResult {
  std::vector<BiblioRecord> kept;
  std::size_t removed = 0;
};

/// Keeps the first record per key (normalized DOI, else normalized title plus
/// year). Records with neither a DOI nor a title are never merged.
DedupResult deduplicate(std::vector<BiblioRecord> records);

struct ScreenResult {
  std::vector<BiblioRecord> kept;
  PrismaReport report;
};

inline const std::vector<std::string>& default_relevance_terms() {
  static const std::vector<std::string> terms{"disaster", "crisis", "pandemic", "COVID-19"};
  return terms;
}

/// Removal precedence: duplicates, empty abstract, irrelevant, non-English,
/// retracted. Each record is counted once, under the first reason it hits.
/// Throws InvalidArgument when relevance_terms is empty.
ScreenResult screen(std::vector<BiblioRecord> records,
                    const std::vector<std::string>& relevance_terms);

/// Title and abstract joined by a single space.
std::string build_corpus_text(const BiblioRecord& record);

}  // namespace litmap::ingest
