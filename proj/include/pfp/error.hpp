#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfp {

// Every failure the library reports maps to one of these kinds. The CLI
// turns any of them into exit code 2 and the server into a 4xx/5xx body.
enum class ErrorKind {
  // corpus
  NoSpeakersFound,
  MalformedInput,
  AllSpeakersExcluded,
  // nlu
  SchemaError,
  RangeError,
  EmptyDocument,
  // vsm
  DimMismatch,
  EmptyFile,
  ParseError,
  Unembeddable,
  ZeroVector,
  EmptyInput,
  ZeroWeightSum,
  DegenerateData,
  // footprint
  NothingEmbeddable,
  SeedNotInFootprint,
  ThemeNotInSpace,
  KTooLarge,
  InvalidArgument,
  // export / server
  IoError,
  BindError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NoSpeakersFound: return "NoSpeakersFound";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::AllSpeakersExcluded: return "AllSpeakersExcluded";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::EmptyDocument: return "EmptyDocument";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Unembeddable: return "Unembeddable";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ZeroWeightSum: return "ZeroWeightSum";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::NothingEmbeddable: return "NothingEmbeddable";
    case ErrorKind::SeedNotInFootprint: return "SeedNotInFootprint";
    case ErrorKind::ThemeNotInSpace: return "ThemeNotInSpace";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::BindError: return "BindError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
        kind_(kind),
        detail_(detail) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace pfp
