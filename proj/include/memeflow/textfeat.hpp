#pragma once

#include <array>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace memeflow {

struct Lexicon {
  std::string axis_name;
  std::unordered_map<std::string, double> scores;  // lowercase words
};

using DocumentBag = std::unordered_map<std::string, int>;  // word -> count >= 1

enum class ScoreMode {
  // mean lexicon score over lexicon-word tokens, counted with multiplicity
  weighted_average,
  // s^T x / s^T 1 with the denominator a lexicon constant; degenerate when
  // the lexicon scores sum to zero
  literal,
};

/// Lowercase, split on non-alphanumeric runs, count token frequencies.
DocumentBag tokenize(const std::string& text);

/// Absent when the document has no lexicon word (weighted_average) or when
/// the lexicon score sum is zero (literal).
std::optional<double> score(const DocumentBag& doc, const Lexicon& lex,
                            ScoreMode mode = ScoreMode::weighted_average);

/// Per axis, the mean of per-paragraph scores over paragraphs that scored;
/// 0 when every paragraph is absent on that axis.
std::array<double, 4> language_features(const std::vector<std::string>& paragraphs,
                                        const std::array<Lexicon, 4>& lexicons);

/// TSV "word<TAB>score" per line, '#' comments; words lowercased on load.
Lexicon load_lexicon(const std::string& path, const std::string& axis_name);

}  // namespace memeflow
