#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kgcrs {

enum class ErrorCode {
  MalformedLine,
  EmptyGraph,
  SelfLoop,
  KindMismatch,
  UnknownNode,
  InconsistentIntent,
  TemplateNotFound,
  InvalidConfig,
  UnresolvedAlias,
  BotNotFound,
  SessionNotFound,
  CorpusFormat,
  BadRequest,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
/// `line` is set for file-format errors, `stage` for pipeline failures.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail,
        std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(detail), code_(code), line_(line) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

  const std::string& stage() const noexcept { return stage_; }
  Error& with_stage(std::string stage) {
    stage_ = std::move(stage);
    return *this;
  }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string stage_;
};

}  // namespace kgcrs
