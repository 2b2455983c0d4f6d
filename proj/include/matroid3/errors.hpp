#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace matroid3 {

enum class errc {
  pair_covered_twice,
  pair_uncovered,
  improper_block,
  not_integrally_splitting,
  malformed_permutation,
  not_a_basis,
  dimension_mismatch,
  parse_error,
  duplicate_key,
  unknown_field,
  next_after_done,
  incomplete_classification,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::pair_covered_twice: return "PairCoveredTwice";
    case errc::pair_uncovered: return "PairUncovered";
    case errc::improper_block: return "ImproperBlock";
    case errc::not_integrally_splitting: return "NotIntegrallySplitting";
    case errc::malformed_permutation: return "MalformedPermutation";
    case errc::not_a_basis: return "NotABasis";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::parse_error: return "ParseError";
    case errc::duplicate_key: return "DuplicateKey";
    case errc::unknown_field: return "UnknownField";
    case errc::next_after_done: return "NextAfterDone";
    case errc::incomplete_classification: return "IncompleteClassification";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace matroid3
