// Writes a deterministic synthetic corpus in the canonical corpus CSV format:
// four themes with disjoint vocabularies, shared boilerplate, author pools
// per theme, and a few records that screening must remove.

#include <litmap/ingest.hpp>
#include <litmap/text_util.hpp>

#include <CLI11.hpp>

#include <array>
#include <iostream>
#include <random>

namespace {

using litmap::ingest::Affiliation;
using litmap::ingest::AuthorRef;
using litmap::ingest::BiblioRecord;

struct Theme {
  std::vector<std::string> words;
  std::vector<std::string> authors;
  std::vector<Affiliation> institutions;
};

const std::array<Theme, 4>& themes() {
  static const std::array<Theme, 4> t{{
      {{"vaccine", "hospital", "mortality", "epidemiology", "surveillance", "clinician",
        "quarantine", "infection", "patient", "ventilator", "outbreak", "transmission",
        "immunization", "nurse", "icu", "antibody"},
       {"Garcia, Maria", "Chen, Wei", "Okafor, Ngozi", "Smith, John", "Rossi, Luca",
        "Kim, Minji", "Novak, Petra", "Haddad, Karim"},
       {{"University of Lagos", "Nigeria"},
        {"Harvard University", "USA"},
        {"Peking University", "China"},
        {"University of Milan", "Italy"}}},
      {{"twitter", "tweet", "misinformation", "hashtag", "sentiment", "rumor", "volunteer",
        "crowdsourcing", "platform", "message", "retweet", "influencer", "chatbot", "facebook",
        "messaging", "audience"},
       {"Nguyen, Linh", "Brown, Emma", "Tanaka, Yuki", "Silva, Pedro", "Muller, Anna",
        "Ahmed, Sara", "Jones, David", "Costa, Ines"},
       {{"University of Washington", "USA"},
        {"Kyoto University", "Japan"},
        {"University of Sao Paulo", "Brazil"},
        {"University of Sydney", "Australia"}}},
      {{"earthquake", "flood", "satellite", "imagery", "lidar", "wildfire", "hurricane",
        "landslide", "inundation", "rainfall", "sensor", "drone", "terrain", "seismic", "tsunami",
        "radar"},
       {"Sato, Kenji", "Lopez, Carmen", "Wang, Fang", "Patel, Ravi", "Fischer, Jonas",
        "Ali, Omar", "Martin, Claire", "Ivanova, Olga"},
       {{"University of Tokyo", "Japan"},
        {"Wuhan University", "China"},
        {"Indian Institute of Technology Bombay", "India"},
        {"ETH Zurich", "Switzerland"}}},
      {{"logistics", "warehouse", "supplier", "inventory", "shipment", "procurement",
        "resilience", "infrastructure", "freight", "port", "manufacturer", "shortage", "retailer",
        "routing", "blockchain", "distribution"},
       {"Johnson, Mark", "Li, Na", "Kowalski, Adam", "Dubois, Marie", "Singh, Arjun",
        "Andersen, Lars", "Moreno, Lucia", "Park, Joon"},
       {{"Massachusetts Institute of Technology", "USA"},
        {"Tsinghua University", "China"},
        {"Delft University of Technology", "Netherlands"},
        {"University of Toronto", "Canada"}}},
  }};
  return t;
}

const std::vector<std::string> kRelevance{"disaster", "crisis", "pandemic", "COVID-19"};
// Mostly stopwords around the theme slots, so theme words dominate after
// preprocessing.
const std::vector<std::string> kTemplates{
    "We study {} and {} with {} in this {}.",
    "Our {} of {} was tied to {} and {}.",
    "How {} and {} shape {} is shown for {}.",
    "The {} between {} and {} was measured for {}.",
    "Both {} and {} were used with {} and {}.",
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string sentence(const Theme& th) {
    std::string out;
    const std::string& tpl = kTemplates[pick(kTemplates.size())];
    int slot = 0;  // four theme words per sentence
    for (std::size_t i = 0; i < tpl.size(); ++i) {
      if (tpl[i] == '{' && i + 1 < tpl.size() && tpl[i + 1] == '}') {
        out += th.words[pick(th.words.size())];
        ++slot;
        ++i;
      } else {
        out += tpl[i];
      }
    }
    return out;
  }

  AuthorRef author(std::size_t theme, std::size_t idx) {
    const auto& th = themes()[theme];
    const auto parts = litmap::text::split(th.authors[idx], ',');
    AuthorRef a;
    a.last_name = std::string(litmap::text::trim(parts[0]));
    a.first_name = std::string(litmap::text::trim(parts[1]));
    a.affiliations.push_back(th.institutions[idx % th.institutions.size()]);
    if (idx % 3 == 0) a.affiliations.push_back(th.institutions[(idx + 1) % th.institutions.size()]);
    return a;
  }

  BiblioRecord record(std::size_t n, std::size_t theme) {
    const auto& th = themes()[theme];
    BiblioRecord r;
    r.record_id = "syn:" + std::to_string(n);
    r.source_db = static_cast<litmap::ingest::SourceDb>(n % 3);
    std::string w1 = th.words[pick(th.words.size())];
    w1[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w1[0])));
    r.title = w1 + " and " + th.words[pick(th.words.size())] + " in " +
              kRelevance[pick(kRelevance.size())] + " research";
    const std::size_t sentences = 4 + pick(3);
    for (std::size_t s = 0; s < sentences; ++s) r.abstract += (s ? " " : "") + sentence(th);
    r.year = 2020 + static_cast<int>(pick(3));
    r.month = 1 + static_cast<int>(pick(12));
    r.doi = "10.5555/litmap." + std::to_string(n);
    r.language = "en";

    std::vector<std::size_t> chosen;
    const std::size_t n_auth = 2 + pick(3);
    while (chosen.size() < n_auth) {
      const std::size_t idx = pick(th.authors.size());
      if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
    }
    for (auto idx : chosen) r.authors.push_back(author(theme, idx));
    if (chance(0.15)) {
      const std::size_t other = (theme + 1 + pick(3)) % themes().size();
      r.authors.push_back(author(other, pick(themes()[other].authors.size())));
    }
    return r;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic evaluation corpus"};
  std::string out = "synthetic_corpus.csv";
  std::size_t docs = 200;
  std::uint64_t seed = 7;
  app.add_option("-o,--out", out, "Output CSV path");
  app.add_option("-n,--docs", docs, "Number of records, including the ones screening removes")
      ->check(CLI::Range(20, 100000));
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  Generator gen(seed);
  std::vector<BiblioRecord> records;
  const std::size_t screened_out = 14;
  for (std::size_t i = 0; i + screened_out < docs; ++i) records.push_back(gen.record(i + 1, i % 4));

  std::size_t n = records.size();
  for (std::size_t i = 0; i < 4; ++i) {  // duplicates of earlier records, same DOI
    auto dup = records[i * 7];
    dup.record_id = "syn:" + std::to_string(++n);
    records.push_back(std::move(dup));
  }
  for (std::size_t i = 0; i < 3; ++i) {  // no abstract
    auto r = gen.record(++n, i);
    r.abstract.clear();
    records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < 3; ++i) {  // off-topic: no relevance term anywhere
    auto r = gen.record(++n, i);
    r.title = "Sourdough fermentation and bread texture";
    r.abstract = "We compare flour blends and proofing times for home baking.";
    records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < 2; ++i) {  // not English
    auto r = gen.record(++n, i);
    r.language = "de";
    records.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < 2; ++i) {  // retracted
    auto r = gen.record(++n, i + 2);
    r.retracted = true;
    records.push_back(std::move(r));
  }

  litmap::ingest::save_corpus(out, records);
  std::cout << "wrote " << records.size() << " records to " << out << "\n";
  return 0;
}
