#include <litmap/ingest.hpp>

#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <utility>

namespace litmap::ingest {

std::string_view to_string(SourceDb db) {
  switch (db) {
    case SourceDb::pubmed: return "pubmed";
    case SourceDb::scopus: return "scopus";
    case SourceDb::wos: return "wos";
    case SourceDb::other: return "other";
  }
  return "other";
}

SourceDb parse_source_db(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "pubmed" || n == "medline" || n == "pubmed central" || n == "pmc") {
    return SourceDb::pubmed;
  }
  if (n == "scopus") return SourceDb::scopus;
  if (n == "wos" || n == "web of science" || n == "isi") return SourceDb::wos;
  return SourceDb::other;
}

InputFormat parse_input_format(std::string_view name) {
  const std::string n = text::to_lower(text::trim(name));
  if (n == "ris") return InputFormat::ris;
  if (n == "medline" || n == "nbib") return InputFormat::medline;
  if (n == "csv") return InputFormat::csv;
  throw InvalidArgument("unknown input format: " + std::string(name));
}

std::string AuthorRef::identity_key() const {
  return text::to_lower(text::collapse_whitespace(last_name)) + ", " +
         text::to_lower(text::collapse_whitespace(first_name));
}

std::optional<std::string> normalize_doi(std::string_view raw) {
  std::string s = text::to_lower(text::trim(raw));
  static constexpr std::array<std::string_view, 6> kPrefixes{
      "https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
      "http://dx.doi.org/", "doi.org/", "doi:"};
  for (auto prefix : kPrefixes) {
    if (s.starts_with(prefix)) {
      s.erase(0, prefix.size());
      break;
    }
  }
  s = std::string(text::trim(s));
  if (!s.starts_with("10.")) return std::nullopt;
  const std::size_t slash = s.find('/');
  if (slash == std::string::npos || slash == 3 || slash + 1 >= s.size()) return std::nullopt;
  for (std::size_t i = 3; i < slash; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  return s;
}

namespace {

std::optional<int> parse_int(std::string_view s) {
  s = text::trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Year from the leading four digits of a date-ish string.
std::optional<int> leading_year(std::string_view s) {
  s = text::trim(s);
  if (s.size() < 4) return std::nullopt;
  for (int i = 0; i < 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[static_cast<std::size_t>(i)]))) {
      return std::nullopt;
    }
  }
  return parse_int(s.substr(0, 4));
}

std::optional<int> month_from_name(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths{
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  const std::string lower = text::to_lower(s.substr(0, std::min<std::size_t>(3, s.size())));
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (lower == kMonths[i]) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

// "2021/03/15", "2021-03", "2021 Mar 15".
std::optional<int> month_from_date(std::string_view s) {
  s = text::trim(s);
  if (s.size() <= 5) return std::nullopt;
  std::string_view rest = text::trim(s.substr(5));
  if (rest.empty()) return std::nullopt;
  if (std::isdigit(static_cast<unsigned char>(rest[0]))) {
    std::size_t n = 0;
    while (n < rest.size() && std::isdigit(static_cast<unsigned char>(rest[n]))) ++n;
    auto m = parse_int(rest.substr(0, n));
    if (m && *m >= 1 && *m <= 12) return m;
    return std::nullopt;
  }
  return month_from_name(rest);
}

std::string normalize_language(std::string_view raw) {
  const std::string s = text::to_lower(text::trim(raw));
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 24> kMap{{
      {"eng", "en"},     {"english", "en"}, {"fre", "fr"},    {"fra", "fr"},
      {"french", "fr"},  {"ger", "de"},     {"deu", "de"},    {"german", "de"},
      {"spa", "es"},     {"spanish", "es"}, {"ita", "it"},    {"italian", "it"},
      {"por", "pt"},     {"portuguese", "pt"}, {"chi", "zh"}, {"zho", "zh"},
      {"chinese", "zh"}, {"jpn", "ja"},     {"japanese", "ja"}, {"rus", "ru"},
      {"russian", "ru"}, {"kor", "ko"},     {"korean", "ko"}, {"dut", "nl"},
  }};
  for (const auto& [from, to] : kMap) {
    if (s == from) return std::string(to);
  }
  return s;
}

AuthorRef author_from_name(std::string_view raw) {
  AuthorRef a;
  const std::string_view name = text::trim(raw);
  const std::size_t comma = name.find(',');
  if (comma != std::string_view::npos) {
    a.last_name = std::string(text::trim(name.substr(0, comma)));
    a.first_name = std::string(text::trim(name.substr(comma + 1)));
  } else {
    // MEDLINE short form "Smith JA": last token is initials.
    const std::size_t space = name.rfind(' ');
    if (space == std::string_view::npos) {
      a.last_name = std::string(name);
    } else {
      a.last_name = std::string(text::trim(name.substr(0, space)));
      a.first_name = std::string(text::trim(name.substr(space + 1)));
    }
  }
  return a;
}

// Affiliation strings are not annotated; the first comma-separated segment
// is taken as the institution and the last as the country.
Affiliation affiliation_from_string(std::string_view raw) {
  const auto parts = text::split(text::trim(raw), ',');
  Affiliation aff;
  aff.institution = std::string(text::trim(parts.front()));
  if (parts.size() > 1) {
    std::string_view country = text::trim(parts.back());
    while (!country.empty() && country.back() == '.') country.remove_suffix(1);
    aff.country = std::string(text::trim(country));
  }
  return aff;
}

bool mentions_retraction(std::string_view value) {
  return text::to_lower(value).find("retracted publication") != std::string::npos ||
         text::iequals(text::trim(value), "retracted");
}

void append_text(std::string& field, std::string_view more) {
  more = text::trim(more);
  if (more.empty()) return;
  if (!field.empty()) field.push_back(' ');
  field.append(more);
}

std::string generated_id(std::string_view origin, std::size_t ordinal) {
  return std::string(origin) + ":" + std::to_string(ordinal);
}

// ---- RIS -------------------------------------------------------------------

struct TaggedLine {
  std::string tag;
  std::string value;
};

// "TI  - value"; "ER  -" may end at the hyphen.
std::optional<TaggedLine> split_ris_line(std::string_view line) {
  if (line.size() < 5) return std::nullopt;
  const auto c0 = static_cast<unsigned char>(line[0]);
  const auto c1 = static_cast<unsigned char>(line[1]);
  if (!std::isupper(c0) || !(std::isupper(c1) || std::isdigit(c1))) return std::nullopt;
  if (line.substr(2, 3) != "  -") return std::nullopt;
  TaggedLine t;
  t.tag = std::string(line.substr(0, 2));
  if (line.size() > 5) {
    if (line[5] != ' ') return std::nullopt;
    t.value = std::string(text::trim(line.substr(6)));
  }
  return t;
}

ParseResult parse_ris(const std::string& content, std::string_view origin) {
  ParseResult result;
  std::optional<BiblioRecord> current;
  std::string* last_field = nullptr;
  std::size_t ordinal = 0;
  std::size_t line_no = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->record_id.empty()) current->record_id = generated_id(origin, ordinal);
    result.records.push_back(std::move(*current));
    current.reset();
    last_field = nullptr;
  };

  for (const std::string& raw : text::split_lines(content)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (text::trim(line).empty()) continue;
    const auto tagged = split_ris_line(line);

    if (!current) {
      if (tagged && tagged->tag == "TY") {
        ++ordinal;
        current.emplace();
        continue;
      }
      result.issues.push_back({ordinal + 1, "line " + std::to_string(line_no) +
                                                " outside a TY..ER record"});
      continue;
    }
    if (!tagged) {
      if (last_field) {
        append_text(*last_field, line);
      } else {
        result.issues.push_back({ordinal, "untagged line " + std::to_string(line_no)});
      }
      continue;
    }

    const std::string& tag = tagged->tag;
    const std::string& value = tagged->value;
    BiblioRecord& rec = *current;
    last_field = nullptr;
    if (tag == "ER") {
      finish();
    } else if (tag == "TY") {
      result.issues.push_back({ordinal, "record not terminated by ER"});
      finish();
      ++ordinal;
      current.emplace();
    } else if (tag == "TI" || tag == "T1") {
      if (rec.title.empty()) {
        rec.title = value;
        last_field = &rec.title;
      }
    } else if (tag == "AB" || tag == "N2") {
      if (rec.abstract.empty()) {
        rec.abstract = value;
        last_field = &rec.abstract;
      }
    } else if (tag == "AU" || tag == "A1") {
      rec.authors.push_back(author_from_name(value));
    } else if (tag == "AD") {
      if (rec.authors.empty()) {
        result.issues.push_back({ordinal, "AD before any AU"});
      } else if (!value.empty()) {
        rec.authors.back().affiliations.push_back(affiliation_from_string(value));
      }
    } else if (tag == "PY" || tag == "Y1") {
      if (!rec.year) {
        rec.year = leading_year(value);
        if (!rec.year) result.issues.push_back({ordinal, "unparseable year '" + value + "'"});
        if (!rec.month) rec.month = month_from_date(value);
      }
    } else if (tag == "DA") {
      if (!rec.month) rec.month = month_from_date(value);
      if (!rec.year) rec.year = leading_year(value);
    } else if (tag == "DO") {
      rec.doi = normalize_doi(value);
      if (!rec.doi) result.issues.push_back({ordinal, "invalid DOI '" + value + "'"});
    } else if (tag == "LA") {
      if (!value.empty()) rec.language = normalize_language(value);
    } else if (tag == "ID" || tag == "AN") {
      if (rec.record_id.empty()) rec.record_id = value;
    } else if (tag == "DB" || tag == "DP") {
      rec.source_db = parse_source_db(value);
    } else if (tag == "M3" || tag == "N1" || tag == "PT") {
      if (mentions_retraction(value)) rec.retracted = true;
    }
  }
  if (current) {
    result.issues.push_back({ordinal, "record not terminated by ER"});
    finish();
  }
  return result;
}

// ---- MEDLINE -----------------------------------------------------------------

// "PMID- 123", "TI  - ...", continuation lines indented by spaces.
std::optional<TaggedLine> split_medline_line(std::string_view line) {
  if (line.size() < 5 || line[4] != '-') return std::nullopt;
  std::string_view tag = text::trim(line.substr(0, 4));
  if (tag.empty() || line[0] == ' ') return std::nullopt;
  for (char c : tag) {
    if (!std::isupper(static_cast<unsigned char>(c)) &&
        !std::isdigit(static_cast<unsigned char>(c))) {
      return std::nullopt;
    }
  }
  TaggedLine t;
  t.tag = std::string(tag);
  if (line.size() > 5) t.value = std::string(text::trim(line.substr(5)));
  return t;
}

ParseResult parse_medline(const std::string& content, std::string_view origin) {
  ParseResult result;
  std::optional<BiblioRecord> current;
  std::string* last_field = nullptr;
  std::string last_tag;
  bool author_from_fau = false;
  std::size_t ordinal = 0;
  std::size_t line_no = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->record_id.empty()) current->record_id = generated_id(origin, ordinal);
    result.records.push_back(std::move(*current));
    current.reset();
    last_field = nullptr;
    last_tag.clear();
  };

  for (const std::string& raw : text::split_lines(content)) {
    ++line_no;
    std::string_view line = raw;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (text::trim(line).empty()) {
      finish();
      continue;
    }
    const auto tagged = split_medline_line(line);
    if (!tagged) {
      if (current && line.front() == ' ') {
        if (last_field) {
          append_text(*last_field, line);
        } else if (last_tag == "AD" && !current->authors.empty() &&
                   !current->authors.back().affiliations.empty()) {
          // Continued affiliation: re-split the whole string.
          auto& affs = current->authors.back().affiliations;
          std::string joined = affs.back().institution;
          if (!affs.back().country.empty()) joined += ", " + affs.back().country;
          append_text(joined, line);
          affs.back() = affiliation_from_string(joined);
        }
        continue;
      }
      result.issues.push_back({current ? ordinal : ordinal + 1,
                               "unrecognized line " + std::to_string(line_no)});
      continue;
    }
    if (!current) {
      ++ordinal;
      current.emplace();
      current->source_db = SourceDb::pubmed;
      if (tagged->tag != "PMID") {
        result.issues.push_back({ordinal, "record does not start with PMID"});
      }
    }
    const std::string& tag = tagged->tag;
    const std::string& value = tagged->value;
    BiblioRecord& rec = *current;
    last_field = nullptr;
    last_tag = tag;
    if (tag == "PMID") {
      if (rec.record_id.empty() && !value.empty()) rec.record_id = "pmid:" + value;
    } else if (tag == "TI") {
      rec.title = value;
      last_field = &rec.title;
    } else if (tag == "AB") {
      rec.abstract = value;
      last_field = &rec.abstract;
    } else if (tag == "FAU") {
      rec.authors.push_back(author_from_name(value));
      author_from_fau = true;
    } else if (tag == "AU") {
      if (author_from_fau) {
        author_from_fau = false;  // short form of the FAU just seen
      } else {
        rec.authors.push_back(author_from_name(value));
      }
    } else if (tag == "AD") {
      if (rec.authors.empty()) {
        result.issues.push_back({ordinal, "AD before any author"});
      } else if (!value.empty()) {
        rec.authors.back().affiliations.push_back(affiliation_from_string(value));
      }
    } else if (tag == "DP") {
      rec.year = leading_year(value);
      if (!rec.year) result.issues.push_back({ordinal, "unparseable date '" + value + "'"});
      rec.month = month_from_date(value);
    } else if (tag == "LID" || tag == "AID") {
      if (!rec.doi && value.find("[doi]") != std::string::npos) {
        rec.doi = normalize_doi(value.substr(0, value.find("[doi]")));
        if (!rec.doi) result.issues.push_back({ordinal, "invalid DOI '" + value + "'"});
      }
    } else if (tag == "LA") {
      if (!rec.language && !value.empty()) rec.language = normalize_language(value);
    } else if (tag == "PT") {
      if (mentions_retraction(value)) rec.retracted = true;
    }
  }
  finish();
  return result;
}

}  // namespace

namespace detail {
ParseResult parse_corpus_csv(const std::string& content, std::string_view origin);
}  // namespace detail

ParseResult parse_text(std::string content, InputFormat format, std::string_view origin) {
  const bool lossy = text::sanitize_utf8(content);
  ParseResult result;
  switch (format) {
    case InputFormat::ris: result = parse_ris(content, origin); break;
    case InputFormat::medline: result = parse_medline(content, origin); break;
    case InputFormat::csv: result = detail::parse_corpus_csv(content, origin); break;
  }
  result.lossy_utf8 = lossy;
  return result;
}

ParseResult parse_records(const std::filesystem::path& path, InputFormat format) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw FileUnreadable(path.string());
  std::string content = text::read_file(path);
  if (text::trim(content).empty()) throw EmptyFile(path.string());
  return parse_text(std::move(content), format, path.stem().string());
}

}  // namespace litmap::ingest
