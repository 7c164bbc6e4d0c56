#include "meboost/common.hpp"

namespace meboost {

std::string_view to_string(Label label) {
  return label == Label::positive ? "positive" : "negative";
}

std::string_view to_string(LearnerKind kind) {
  return kind == LearnerKind::decision_tree ? "decision_tree" : "extra_tree";
}

LearnerKind learner_kind_from_string(std::string_view text) {
  if (text == "decision_tree") return LearnerKind::decision_tree;
  if (text == "extra_tree") return LearnerKind::extra_tree;
  throw InvalidArgument("unknown learner kind '" + std::string(text) + "'");
}

Label label_from_string(std::string_view text) {
  if (text == "positive") return Label::positive;
  if (text == "negative") return Label::negative;
  throw InvalidArgument("unknown label '" + std::string(text) + "'");
}

ParseError::ParseError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

}  // namespace meboost
