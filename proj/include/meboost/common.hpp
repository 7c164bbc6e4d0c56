#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace meboost {

/// Binary class tag. The minority class is always `positive`.
enum class Label : std::uint8_t { negative = 0, positive = 1 };

/// +1 for positive, -1 for negative.
inline int vote(Label label) { return label == Label::positive ? 1 : -1; }

enum class LearnerKind : std::uint8_t { decision_tree, extra_tree };

std::string_view to_string(Label label);
std::string_view to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(std::string_view text);
Label label_from_string(std::string_view text);

inline LearnerKind other_kind(LearnerKind kind) {
  return kind == LearnerKind::decision_tree ? LearnerKind::extra_tree
                                            : LearnerKind::decision_tree;
}

/// Raised on malformed input files. `line` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Raised when inputs violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when training cannot produce a model (no learner accepted,
/// numeric underflow in the weight update).
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SplitMix64 finalizer; used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t value);

/// Deterministic child seed for (base, a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace meboost
