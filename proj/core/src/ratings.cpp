#include <litmap/summarizer.hpp>

#include <litmap/csv.hpp>
#include <litmap/error.hpp>
#include <litmap/text_util.hpp>

#include <cstdio>
#include <set>
#include <sstream>

namespace litmap::summarize {

std::size_t aligned_count(const EvaluationSheet& sheet) {
  std::size_t n = 0;
  for (const auto& [_, r] : sheet.ratings) n += r.rater1 && r.rater2;
  return n;
}

double comprehensiveness(const EvaluationSheet& sheet) {
  if (sheet.ratings.empty()) throw EmptySheet();
  return static_cast<double>(aligned_count(sheet)) / static_cast<double>(sheet.ratings.size());
}

KappaResult cohens_kappa(const EvaluationSheet& sheet) {
  if (sheet.ratings.empty()) throw EmptySheet();
  if (sheet.ratings.size() < 2) throw InvalidArgument("kappa needs at least two ratings");
  const double n = static_cast<double>(sheet.ratings.size());
  double agree = 0, yes1 = 0, yes2 = 0;
  for (const auto& [_, r] : sheet.ratings) {
    agree += r.rater1 == r.rater2;
    yes1 += r.rater1;
    yes2 += r.rater2;
  }
  const double p_o = agree / n;
  const double p_e = (yes1 / n) * (yes2 / n) + (1.0 - yes1 / n) * (1.0 - yes2 / n);
  if (p_e >= 1.0) return {p_o == 1.0 ? 1.0 : 0.0, true};
  return {(p_o - p_e) / (1.0 - p_e), false};
}

namespace {

bool parse_yes_no(std::string_view raw, std::size_t line) {
  const std::string v = text::to_lower(text::trim(raw));
  if (v == "yes" || v == "y" || v == "1" || v == "true") return true;
  if (v == "no" || v == "n" || v == "0" || v == "false") return false;
  throw FormatError(line, "rating must be yes or no, got '" + std::string(raw) + "'");
}

}  // namespace

std::map<int, EvaluationSheet> parse_ratings_csv(std::string_view content) {
  const auto rows = csv::parse(content);
  if (rows.empty()) throw EmptySheet();
  const csv::Row expected{"topic_id", "abstract_id", "rater1", "rater2"};
  csv::Row header;
  for (const auto& f : rows.front().fields) header.push_back(text::to_lower(text::trim(f)));
  if (header != expected) throw FormatError(rows.front().line, "expected header " +
                                                                   std::string("topic_id,abstract_id,rater1,rater2"));
  std::map<int, EvaluationSheet> sheets;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.fields.size() != 4) throw FormatError(r.line, "expected 4 columns");
    int topic = 0;
    try {
      std::size_t used = 0;
      const std::string t(text::trim(r.fields[0]));
      topic = std::stoi(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::logic_error&) {
      throw FormatError(r.line, "topic_id must be an integer");
    }
    const std::string id(text::trim(r.fields[1]));
    if (id.empty()) throw FormatError(r.line, "abstract_id is empty");
    auto& sheet = sheets[topic];
    sheet.topic_id = topic;
    const RaterPair pair{parse_yes_no(r.fields[2], r.line), parse_yes_no(r.fields[3], r.line)};
    if (!sheet.ratings.emplace(id, pair).second) {
      throw DuplicateId(std::to_string(topic) + "/" + id);
    }
  }
  if (sheets.empty()) throw EmptySheet();
  return sheets;
}

std::map<int, EvaluationSheet> load_ratings(const std::filesystem::path& path) {
  return parse_ratings_csv(text::read_file(path));
}

std::string ratings_to_csv(const std::map<int, EvaluationSheet>& sheets) {
  std::string out = "topic_id,abstract_id,rater1,rater2\n";
  for (const auto& [t, sheet] : sheets) {
    for (const auto& [id, r] : sheet.ratings) {
      out += csv::format_row(
          {std::to_string(t), id, r.rater1 ? "yes" : "no", r.rater2 ? "yes" : "no"});
    }
  }
  return out;
}

double round_ratio_half_even(std::size_t num, std::size_t den, int decimals) {
  if (den == 0) throw InvalidArgument("denominator must be positive");
  if (decimals < 0 || decimals > 9) throw InvalidArgument("decimals must be in [0, 9]");
  std::size_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  std::size_t q = num * scale / den;
  const std::size_t r = num * scale % den;
  if (2 * r > den || (2 * r == den && q % 2 == 1)) ++q;
  return static_cast<double>(q) / static_cast<double>(scale);
}

double TopicEvalRow::rounded() const { return round_ratio_half_even(aligned, n_docs, 2); }

TopicEvalRow evaluate_sheet(const EvaluationSheet& sheet) {
  TopicEvalRow row;
  row.topic_id = sheet.topic_id;
  row.n_docs = sheet.ratings.size();
  row.aligned = aligned_count(sheet);
  row.comprehensiveness = comprehensiveness(sheet);
  if (sheet.ratings.size() >= 2) row.kappa = cohens_kappa(sheet).value;
  return row;
}

double ModelEval::mean_comprehensiveness() const {
  if (rows.empty()) throw EmptySheet();
  double sum = 0.0;
  for (const auto& r : rows) sum += r.comprehensiveness;
  return sum / static_cast<double>(rows.size());
}

ModelComparison compare_models(const std::vector<ModelEval>& models) {
  if (models.empty()) throw InvalidArgument("no models to compare");
  std::set<int> topics;
  for (const auto& r : models.front().rows) topics.insert(r.topic_id);
  std::vector<std::map<int, const TopicEvalRow*>> by_topic(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (const auto& r : models[m].rows) by_topic[m][r.topic_id] = &r;
    std::set<int> mine;
    for (const auto& [t, _] : by_topic[m]) mine.insert(t);
    if (mine != topics || by_topic[m].size() != models[m].rows.size()) {
      throw InvalidArgument("model " + models[m].model + " covers different topics");
    }
  }

  ModelComparison c;
  c.wins.assign(models.size(), 0);
  for (std::size_t m = 0; m < models.size(); ++m) {
    c.means.push_back(models[m].mean_comprehensiveness());
    if (c.means[m] > c.means[c.selected]) c.selected = m;
  }
  for (int t : topics) {
    double best = -1.0;
    std::size_t best_count = 0, best_model = 0;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const double v = by_topic[m].at(t)->rounded();
      if (v > best) {
        best = v;
        best_count = 1;
        best_model = m;
      } else if (v == best) {
        ++best_count;
      }
    }
    if (best_count == 1) {
      ++c.wins[best_model];
    } else {
      ++c.ties;
    }
  }
  return c;
}

std::string evaluation_report(const std::vector<ModelEval>& models) {
  const auto cmp = compare_models(models);
  std::map<int, std::size_t> docs;
  for (const auto& r : models.front().rows) docs[r.topic_id] = r.n_docs;
  std::vector<std::map<int, const TopicEvalRow*>> by_topic(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (const auto& r : models[m].rows) by_topic[m][r.topic_id] = &r;
  }

  std::ostringstream o;
  char buf[64];
  o << "topic  docs";
  for (const auto& m : models) o << "  | " << m.model << ": aligned  comp  kappa";
  o << '\n';
  for (const auto& [t, n] : docs) {
    std::snprintf(buf, sizeof buf, "%5d  %4zu", t, n);
    o << buf;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto* r = by_topic[m].at(t);
      std::snprintf(buf, sizeof buf, "  | %7zu  %.2f  ", r->aligned, r->rounded());
      o << buf;
      if (r->kappa) {
        std::snprintf(buf, sizeof buf, "%.2f", *r->kappa);
        o << buf;
      } else {
        o << "-";
      }
    }
    o << '\n';
  }
  for (std::size_t m = 0; m < models.size(); ++m) {
    std::snprintf(buf, sizeof buf, "%.4f", cmp.means[m]);
    o << "mean comprehensiveness " << models[m].model << ": " << buf << ", wins " << cmp.wins[m]
      << '\n';
  }
  o << "ties: " << cmp.ties << '\n' << "selected: " << models[cmp.selected].model << '\n';
  return o.str();
}

}  // namespace litmap::summarize
