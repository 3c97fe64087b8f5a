#include "pushsim/protocol.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace pushsim {

using nlohmann::json;

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Hello: return "hello";
    case MessageKind::Reset: return "reset";
    case MessageKind::Step: return "step";
    case MessageKind::Close: return "close";
    case MessageKind::Obs: return "obs";
    case MessageKind::Result: return "result";
    case MessageKind::Error: return "error";
  }
  return "?";
}

MessageKind message_kind_from_string(const std::string& s) {
  if (s == "hello") return MessageKind::Hello;
  if (s == "reset") return MessageKind::Reset;
  if (s == "step") return MessageKind::Step;
  if (s == "close") return MessageKind::Close;
  if (s == "obs") return MessageKind::Obs;
  if (s == "result") return MessageKind::Result;
  if (s == "error") return MessageKind::Error;
  throw std::invalid_argument("protocol: unknown message kind '" + s + "'");
}

std::string encode_message(const ProtocolMessage& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["id"] = m.id;
  j["payload"] = m.payload;
  return j.dump();
}

ProtocolMessage decode_message(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("protocol: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("protocol: message must be an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("protocol: missing string field 'kind'");
  if (!j.contains("id") || !j["id"].is_number_integer())
    throw std::invalid_argument("protocol: missing integer field 'id'");
  ProtocolMessage m;
  m.kind = message_kind_from_string(j["kind"].get<std::string>());
  m.id = j["id"].get<int64_t>();
  if (j.contains("payload")) {
    if (!j["payload"].is_object())
      throw std::invalid_argument("protocol: payload must be an object");
    m.payload = j["payload"];
  }
  return m;
}

double round9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace pushsim
