#include <litmap/ingest.hpp>

#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <cctype>
#include <unordered_set>

namespace litmap::ingest {

std::string normalize_title(std::string_view title) {
  std::string stripped;
  stripped.reserve(title.size());
  for (char c : title) {
    if (std::ispunct(static_cast<unsigned char>(c))) continue;
    stripped.push_back(c);
  }
  return text::to_lower(text::collapse_whitespace(stripped));
}

namespace {

std::optional<std::string> dedup_key(const BiblioRecord& r) {
  if (r.doi && !r.doi->empty()) return "doi:" + *r.doi;
  std::string title = normalize_title(r.title);
  if (title.empty()) return std::nullopt;
  return "title:" + title + "|" + (r.year ? std::to_string(*r.year) : std::string("?"));
}

bool contains_any(const std::string& haystack_lower, const std::vector<std::string>& needles) {
  for (const auto& n : needles) {
    if (haystack_lower.find(n) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

DedupResult deduplicate(std::vector<BiblioRecord> records) {
  DedupResult result;
  result.kept.reserve(records.size());
  std::unordered_set<std::string> seen;
  for (auto& r : records) {
    const auto key = dedup_key(r);
    if (key && !seen.insert(*key).second) {
      ++result.removed;
      continue;
    }
    result.kept.push_back(std::move(r));
  }
  return result;
}

ScreenResult screen(std::vector<BiblioRecord> records,
                    const std::vector<std::string>& relevance_terms) {
  if (relevance_terms.empty()) throw InvalidArgument("relevance_terms must not be empty");
  std::vector<std::string> terms;
  for (const auto& t : relevance_terms) {
    std::string lowered = text::to_lower(text::trim(t));
    if (!lowered.empty()) terms.push_back(std::move(lowered));
  }
  if (terms.empty()) throw InvalidArgument("relevance_terms must not be blank");

  ScreenResult result;
  PrismaReport& report = result.report;
  report.collected = records.size();

  DedupResult dedup = deduplicate(std::move(records));
  report.removed_duplicates = dedup.removed;

  for (auto& r : dedup.kept) {
    if (text::trim(r.abstract).empty()) {
      ++report.removed_no_abstract;
      continue;
    }
    if (!contains_any(text::to_lower(r.title + " " + r.abstract), terms)) {
      ++report.removed_irrelevant;
      continue;
    }
    // Missing language is taken as English.
    if (r.language && !r.language->empty() && *r.language != "en") {
      ++report.removed_non_english;
      continue;
    }
    if (r.retracted) {
      ++report.removed_retracted;
      continue;
    }
    r.language = "en";
    result.kept.push_back(std::move(r));
  }
  report.final_count = result.kept.size();
  return result;
}

std::string build_corpus_text(const BiblioRecord& record) {
  const std::string_view title = text::trim(record.title);
  const std::string_view abstract = text::trim(record.abstract);
  if (title.empty()) return std::string(abstract);
  if (abstract.empty()) return std::string(title);
  std::string out;
  out.reserve(title.size() + abstract.size() + 1);
  out.append(title).push_back(' ');
  out.append(abstract);
  return out;
}

std::string PrismaReport::to_key_value() const {
  std::string out;
  auto line = [&](std::string_view key, std::size_t v) {
    out.append(key).append("=").append(std::to_string(v)).push_back('\n');
  };
  line("collected", collected);
  line("removed_duplicates", removed_duplicates);
  line("removed_no_abstract", removed_no_abstract);
  line("removed_irrelevant", removed_irrelevant);
  line("removed_non_english", removed_non_english);
  line("removed_retracted", removed_retracted);
  line("final", final_count);
  return out;
}

std::string PrismaReport::to_csv() const {
  std::string out = "stage,count\n";
  auto row = [&](std::string_view key, std::size_t v) {
    out.append(key).append(",").append(std::to_string(v)).push_back('\n');
  };
  row("collected", collected);
  row("removed_duplicates", removed_duplicates);
  row("removed_no_abstract", removed_no_abstract);
  row("removed_irrelevant", removed_irrelevant);
  row("removed_non_english", removed_non_english);
  row("removed_retracted", removed_retracted);
  row("final", final_count);
  return out;
}

}  // namespace litmap::ingest
