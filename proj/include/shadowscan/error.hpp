#ifndef SHADOWSCAN_ERROR_HPP
#define SHADOWSCAN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace shadowscan {

enum class Errc {
  InvalidCoordinate,
  InvalidClassName,
  MalformedXml,
  MissingCoordinate,
  DuplicateDeclaration,
  IoFailure,
  CoordinateMismatch,
  NotFound,
  UnresolvableDependency,
  DepthLimitExceeded,
  NotAZip,
  CorruptArchive,
  InvalidEntryName,
  DuplicateClassName,
  MissingContent,
  UnknownArtifact,
  InvalidPattern,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::InvalidCoordinate: return "InvalidCoordinate";
    case Errc::InvalidClassName: return "InvalidClassName";
    case Errc::MalformedXml: return "MalformedXml";
    case Errc::MissingCoordinate: return "MissingCoordinate";
    case Errc::DuplicateDeclaration: return "DuplicateDeclaration";
    case Errc::IoFailure: return "IoFailure";
    case Errc::CoordinateMismatch: return "CoordinateMismatch";
    case Errc::NotFound: return "NotFound";
    case Errc::UnresolvableDependency: return "UnresolvableDependency";
    case Errc::DepthLimitExceeded: return "DepthLimitExceeded";
    case Errc::NotAZip: return "NotAZip";
    case Errc::CorruptArchive: return "CorruptArchive";
    case Errc::InvalidEntryName: return "InvalidEntryName";
    case Errc::DuplicateClassName: return "DuplicateClassName";
    case Errc::MissingContent: return "MissingContent";
    case Errc::UnknownArtifact: return "UnknownArtifact";
    case Errc::InvalidPattern: return "InvalidPattern";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the condition;
/// the message carries the offending input.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace shadowscan

#endif
