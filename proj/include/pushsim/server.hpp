#pragma once

#include <iostream>
#include <optional>

#include "pushsim/config.hpp"
#include "pushsim/env.hpp"
#include "pushsim/protocol.hpp"

namespace pushsim {

// One simulator per session; strict request/response ordering. Invalid
// requests produce an error response and leave the session usable.
class EnvSession {
 public:
  explicit EnvSession(SimConfig cfg);

  // Handles one raw request line; always returns exactly one response line.
  std::string handle_line(const std::string& line);
  ProtocolMessage handle(const ProtocolMessage& request);

  bool closed() const { return closed_; }

 private:
  ProtocolMessage do_hello(const ProtocolMessage& req);
  ProtocolMessage do_reset(const ProtocolMessage& req);
  ProtocolMessage do_step(const ProtocolMessage& req);
  nlohmann::json obs_payload() const;

  SimConfig cfg_;
  std::optional<Environment> env_;
  bool include_depth_ = false;
  bool closed_ = false;
};

// Reads newline-delimited requests from `in`, writes responses to `out`,
// until EOF or a close message.
void serve_stdio(const SimConfig& cfg, std::istream& in, std::ostream& out);

// One session per connection; blocks forever. Returns only on listen errors.
void serve_tcp(const SimConfig& cfg, int port);

}  // namespace pushsim
