#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sortenv/config.hpp"
#include "sortenv/env.hpp"

namespace sortenv {

inline constexpr int kProtocolVersion = 1;

/// Wire error codes.
namespace wire_error {
inline constexpr std::string_view kBadRequest = "BAD_REQUEST";
inline constexpr std::string_view kUnknownOp = "UNKNOWN_OP";
inline constexpr std::string_view kVersion = "VERSION_MISMATCH";
inline constexpr std::string_view kNoEpisode = "NO_EPISODE";
inline constexpr std::string_view kEpisodeDone = "EPISODE_DONE";
inline constexpr std::string_view kBadAction = "BAD_ACTION";
inline constexpr std::string_view kBadConfig = "BAD_CONFIG";
}  // namespace wire_error

/// One client session of the line protocol. Each request line is a JSON
/// object; each call returns exactly one JSON response line (without the
/// trailing newline). Sessions own their environment and share nothing.
///
///   {"op":"hello","version":1}                    -> {"type":"spec",...}
///   {"op":"reset","seed":42,"config":{...}}       -> {"type":"state",...}
///   {"op":"step","action":7}                      -> {"type":"state",...}
///   {"op":"step","action":{"speed":8,"mode":"positive"}}
///   {"op":"close"}                                -> {"type":"closed"}
///
/// Failures produce {"type":"error","code":...,"message":...} and leave the
/// session usable.
class ProtocolSession {
 public:
  explicit ProtocolSession(EnvConfig base);

  std::string handle(std::string_view line);
  bool closed() const { return closed_; }

 private:
  EnvConfig base_;
  EnvConfig active_;
  std::unique_ptr<SortingEnv> env_;
  bool closed_ = false;
};

}  // namespace sortenv
