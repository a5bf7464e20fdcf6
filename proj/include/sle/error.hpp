#ifndef SLE_ERROR_HPP
#define SLE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace sle {

/// Failure kinds surfaced by the library. The CLI maps each to an exit code.
enum class ErrorKind {
  EmptyDocument,
  TokenCapExceeded,
  NonSymmetricInput,
  DimensionMismatch,
  RankDeficient,
  NonFiniteValue,
  KTooLarge,
  SingleClass,
  FoldTooSmall,
  EmptyVocabulary,
  SchemaError,
  ParseError,
  InvalidSpec,
  InvalidConfig,
  IoError,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::TokenCapExceeded: return "TokenCapExceeded";
    case ErrorKind::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::FoldTooSmall: return "FoldTooSmall";
    case ErrorKind::EmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// True for errors caused by numerical breakdown rather than bad input.
constexpr bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::NonSymmetricInput || kind == ErrorKind::RankDeficient ||
         kind == ErrorKind::NonFiniteValue;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// what() without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace sle

#endif  // SLE_ERROR_HPP
