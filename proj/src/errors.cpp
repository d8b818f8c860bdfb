#include "kgcrs/errors.hpp"

namespace kgcrs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InconsistentIntent: return "InconsistentIntent";
    case ErrorCode::TemplateNotFound: return "TemplateNotFound";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnresolvedAlias: return "UnresolvedAlias";
    case ErrorCode::BotNotFound: return "BotNotFound";
    case ErrorCode::SessionNotFound: return "SessionNotFound";
    case ErrorCode::CorpusFormat: return "CorpusFormat";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::Internal: return "Internal";
  }
  return "Internal";
}

}  // namespace kgcrs
