#pragma once

#include <memory>
#include <string>

#include "sortenv/config.hpp"

namespace sortenv {

/// TCP server for the line protocol. Every connection gets its own
/// ProtocolSession; all sessions run on one I/O thread.
class EnvServer {
 public:
  /// Binds immediately; port 0 picks an ephemeral port.
  EnvServer(EnvConfig base, const std::string& address, unsigned short port);
  ~EnvServer();

  EnvServer(const EnvServer&) = delete;
  EnvServer& operator=(const EnvServer&) = delete;

  unsigned short port() const;

  /// Serve until stop() is called or, when `handle_signals` is set, until
  /// SIGINT/SIGTERM arrives.
  void run(bool handle_signals = false);

  /// Thread-safe.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sortenv
