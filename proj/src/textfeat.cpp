#include "memeflow/textfeat.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace memeflow {

DocumentBag tokenize(const std::string& text) {
  DocumentBag bag;
  std::string tok;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      tok.push_back(static_cast<char>(std::tolower(c)));
    } else if (!tok.empty()) {
      ++bag[tok];
      tok.clear();
    }
  }
  if (!tok.empty()) ++bag[tok];
  return bag;
}

std::optional<double> score(const DocumentBag& doc, const Lexicon& lex,
                            ScoreMode mode) {
  if (lex.scores.empty()) throw std::invalid_argument("empty lexicon");
  double weighted = 0.0;
  double in_lex_tokens = 0.0;
  for (const auto& [word, count] : doc) {
    auto it = lex.scores.find(word);
    if (it == lex.scores.end()) continue;  // out-of-vocabulary scores zero
    weighted += it->second * count;
    in_lex_tokens += count;
  }
  if (mode == ScoreMode::weighted_average) {
    if (in_lex_tokens == 0.0) return std::nullopt;
    return weighted / in_lex_tokens;
  }
  double lex_sum = 0.0;
  for (const auto& [word, s] : lex.scores) lex_sum += s;
  if (lex_sum == 0.0) return std::nullopt;
  return weighted / lex_sum;
}

std::array<double, 4> language_features(const std::vector<std::string>& paragraphs,
                                        const std::array<Lexicon, 4>& lexicons) {
  if (paragraphs.empty())
    throw std::invalid_argument("language_features requires at least one paragraph");
  std::vector<DocumentBag> bags;
  bags.reserve(paragraphs.size());
  for (const auto& p : paragraphs) bags.push_back(tokenize(p));

  std::array<double, 4> out{};
  for (std::size_t a = 0; a < 4; ++a) {
    double sum = 0.0;
    int scored = 0;
    for (const auto& bag : bags) {
      if (auto s = score(bag, lexicons[a])) {
        sum += *s;
        ++scored;
      }
    }
    out[a] = scored > 0 ? sum / scored : 0.0;
  }
  return out;
}

Lexicon load_lexicon(const std::string& path, const std::string& axis_name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  Lexicon lex;
  lex.axis_name = axis_name;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected word<TAB>score");
    std::string word = line.substr(0, tab);
    for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    double s;
    try {
      s = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad score");
    }
    lex.scores[word] = s;
  }
  if (lex.scores.empty())
    throw std::runtime_error("lexicon is empty: " + path);
  return lex;
}

}  // namespace memeflow
