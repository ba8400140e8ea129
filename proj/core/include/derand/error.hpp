#pragma once

#include <stdexcept>
#include <string>

namespace derand {

enum class Errc {
  NonStochasticRow,
  NegativeEntry,
  InvalidDistribution,
  DimensionMismatch,
  SymbolOutOfRange,
  RateTooLarge,
  EmptyAlphabet,
  DegreeTooSmall,
  InfeasibleDegreeSequence,
  RejectionBudgetExhausted,
  ComponentCountMismatch,
  InfeasibleOccurrenceBound,
  LengthMismatch,
  OutputTooLong,
  SeedTooLong,
  FamilyTooLarge,
  StateSpaceTooLarge,
  IndexOutOfRange,
  RetriesExhausted,
  ConfigError,
  IoError,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace derand
