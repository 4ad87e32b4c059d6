#include <litmap/ingest.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <json.hpp>

#include <array>
#include <charconv>

namespace litmap::ingest {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 10> kColumns{
    "record_id", "source_db", "title", "abstract", "year",
    "month",     "doi",       "language", "retracted", "authors_json"};

json authors_to_json(const std::vector<AuthorRef>& authors) {
  json arr = json::array();
  for (const auto& a : authors) {
    json affs = json::array();
    for (const auto& aff : a.affiliations) {
      affs.push_back({{"institution", aff.institution}, {"country", aff.country}});
    }
    arr.push_back({{"last", a.last_name}, {"first", a.first_name}, {"affiliations", affs}});
  }
  return arr;
}

std::vector<AuthorRef> authors_from_json(const json& arr) {
  std::vector<AuthorRef> authors;
  if (!arr.is_array()) throw std::invalid_argument("authors_json is not an array");
  for (const auto& a : arr) {
    AuthorRef ref;
    ref.last_name = a.value("last", "");
    ref.first_name = a.value("first", "");
    if (a.contains("affiliations")) {
      for (const auto& aff : a.at("affiliations")) {
        ref.affiliations.push_back(
            {aff.value("institution", ""), aff.value("country", "")});
      }
    }
    authors.push_back(std::move(ref));
  }
  return authors;
}

std::optional<int> optional_int(std::string_view s, bool& ok) {
  s = text::trim(s);
  ok = true;
  if (s.empty()) return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    ok = false;
    return std::nullopt;
  }
  return v;
}

bool parse_bool(std::string_view s) {
  const std::string v = text::to_lower(text::trim(s));
  return v == "true" || v == "1" || v == "yes";
}

}  // namespace

namespace detail {

ParseResult parse_corpus_csv(const std::string& content, std::string_view origin) {
  ParseResult result;
  std::vector<csv::ParsedRow> rows = csv::parse(content);
  if (rows.empty()) return result;

  // Header columns located by name so reordered exports still load.
  std::array<int, kColumns.size()> index{};
  index.fill(-1);
  auto& header = rows.front().fields;
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);
  for (std::size_t i = 0; i < header.size(); ++i) {
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (text::trim(header[i]) == kColumns[c]) index[c] = static_cast<int>(i);
    }
  }
  if (index[0] < 0 && index[2] < 0) {
    throw FormatError(1, "CSV header lacks record_id and title columns");
  }

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t ordinal = r;
    const auto& fields = rows[r].fields;
    if (fields.size() != header.size()) {
      result.issues.push_back({ordinal, "expected " + std::to_string(header.size()) +
                                            " columns, got " + std::to_string(fields.size())});
    }
    auto get = [&](std::size_t col) -> std::string {
      const int i = index[col];
      if (i < 0 || static_cast<std::size_t>(i) >= fields.size()) return {};
      return fields[static_cast<std::size_t>(i)];
    };
    BiblioRecord rec;
    rec.record_id = get(0);
    if (rec.record_id.empty()) rec.record_id = std::string(origin) + ":" + std::to_string(ordinal);
    rec.source_db = parse_source_db(get(1));
    rec.title = get(2);
    rec.abstract = get(3);
    bool ok = true;
    rec.year = optional_int(get(4), ok);
    if (!ok) result.issues.push_back({ordinal, "unparseable year '" + get(4) + "'"});
    rec.month = optional_int(get(5), ok);
    if (!ok || (rec.month && (*rec.month < 1 || *rec.month > 12))) {
      result.issues.push_back({ordinal, "invalid month '" + get(5) + "'"});
      rec.month.reset();
    }
    if (const std::string doi = get(6); !text::trim(doi).empty()) {
      rec.doi = normalize_doi(doi);
      if (!rec.doi) result.issues.push_back({ordinal, "invalid DOI '" + doi + "'"});
    }
    if (const std::string lang = get(7); !text::trim(lang).empty()) {
      rec.language = text::to_lower(text::trim(lang));
    }
    rec.retracted = parse_bool(get(8));
    if (const std::string authors = get(9); !text::trim(authors).empty()) {
      try {
        rec.authors = authors_from_json(json::parse(authors));
      } catch (const std::exception& e) {
        result.issues.push_back({ordinal, std::string("bad authors_json: ") + e.what()});
      }
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace detail

std::string write_corpus_csv(const std::vector<BiblioRecord>& records) {
  std::string out;
  csv::Row header(kColumns.begin(), kColumns.end());
  out += csv::format_row(header);
  for (const auto& r : records) {
    out += csv::format_row({
        r.record_id,
        std::string(to_string(r.source_db)),
        r.title,
        r.abstract,
        r.year ? std::to_string(*r.year) : std::string(),
        r.month ? std::to_string(*r.month) : std::string(),
        r.doi.value_or(""),
        r.language.value_or(""),
        r.retracted ? "true" : "false",
        authors_to_json(r.authors).dump(),
    });
  }
  return out;
}

void save_corpus(const std::filesystem::path& path, const std::vector<BiblioRecord>& records) {
  text::write_file(path, write_corpus_csv(records));
}

std::vector<BiblioRecord> load_corpus(const std::filesystem::path& path) {
  std::string content = text::read_file(path);
  ParseResult parsed = parse_text(std::move(content), InputFormat::csv, path.stem().string());
  if (!parsed.issues.empty()) {
    throw FormatError(parsed.issues.front().ordinal + 1, parsed.issues.front().reason);
  }
  return std::move(parsed.records);
}

}  // namespace litmap::ingest
