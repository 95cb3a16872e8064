#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace skillmap {

enum class ErrorCode {
  UnsupportedFormat,
  OversizeDocument,
  EncodingError,
  FormatMismatch,
  MalformedMarkup,
  EmptyDocument,
  EmptyInput,
  ZeroVector,
  NonFinite,
  MissingEmbedding,
  DimensionMismatch,
  DuplicateId,
  EmptyCatalog,
  FormatError,
  ChecksumError,
  IoError,
  CatalogError,
  CatalogTooSmall,
  MissingAltLabels,
  ConfigError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// the CLI and the HTTP layer can map it onto exit codes / status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace skillmap
