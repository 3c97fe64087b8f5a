#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

namespace pushsim {

// Newline-delimited JSON messages; one request -> one response with the
// matching id.
enum class MessageKind { Hello, Reset, Step, Close, Obs, Result, Error };

const char* to_string(MessageKind k);
MessageKind message_kind_from_string(const std::string& s);

struct ProtocolMessage {
  MessageKind kind = MessageKind::Hello;
  int64_t id = 0;
  nlohmann::json payload = nlohmann::json::object();

  bool operator==(const ProtocolMessage& o) const {
    return kind == o.kind && id == o.id && payload == o.payload;
  }
};

// Single line, no embedded newlines.
std::string encode_message(const ProtocolMessage& m);

// Throws std::invalid_argument on malformed input.
ProtocolMessage decode_message(const std::string& line);

// Round to 9 significant decimal digits (the serialization precision).
double round9(double v);

constexpr int kProtocolVersion = 1;

}  // namespace pushsim
