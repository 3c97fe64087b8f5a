#include "pushsim/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <thread>

namespace pushsim {

using nlohmann::json;

namespace {

ProtocolMessage error_response(int64_t id, const std::string& message) {
  ProtocolMessage m;
  m.kind = MessageKind::Error;
  m.id = id;
  m.payload = {{"message", message}};
  return m;
}

json num_array(const double* data, size_t n) {
  json a = json::array();
  for (size_t i = 0; i < n; ++i) a.push_back(round9(data[i]));
  return a;
}

}  // namespace

EnvSession::EnvSession(SimConfig cfg) : cfg_(std::move(cfg)) {}

std::string EnvSession::handle_line(const std::string& line) {
  ProtocolMessage req;
  try {
    req = decode_message(line);
  } catch (const std::exception& e) {
    return encode_message(error_response(-1, e.what()));
  }
  return encode_message(handle(req));
}

ProtocolMessage EnvSession::handle(const ProtocolMessage& req) {
  try {
    switch (req.kind) {
      case MessageKind::Hello: return do_hello(req);
      case MessageKind::Reset: return do_reset(req);
      case MessageKind::Step: return do_step(req);
      case MessageKind::Close: {
        closed_ = true;
        ProtocolMessage m;
        m.kind = MessageKind::Result;
        m.id = req.id;
        m.payload = {{"closed", true}};
        return m;
      }
      default:
        return error_response(req.id, "protocol: expected a request kind");
    }
  } catch (const std::exception& e) {
    return error_response(req.id, e.what());
  }
}

ProtocolMessage EnvSession::do_hello(const ProtocolMessage& req) {
  ProtocolMessage m;
  m.kind = MessageKind::Result;
  m.id = req.id;
  m.payload = {{"protocol_version", kProtocolVersion},
               {"teacher_actor_dim", kTeacherObsDim},
               {"critic_priv_dim", kCriticObsDim},
               {"student_proprio_dim", kStudentObsDim},
               {"action_dim", kActionDim},
               {"depth_stack", kDepthStackLen},
               {"depth_width", cfg_.camera.width},
               {"depth_height", cfg_.camera.height},
               {"dt", round9(cfg_.physics.dt)}};
  return m;
}

ProtocolMessage EnvSession::do_reset(const ProtocolMessage& req) {
  const json& p = req.payload;
  for (auto it = p.begin(); it != p.end(); ++it) {
    std::string k = it.key();
    if (k != "seed" && k != "preset" && k != "perception" && k != "augment" &&
        k != "trace" && k != "include_depth" && k != "scenario")
      throw std::invalid_argument("reset: unknown field '" + k + "'");
  }
  if (!p.contains("seed") || !p["seed"].is_number_integer())
    throw std::invalid_argument("reset: integer field 'seed' is required");
  uint64_t seed = p["seed"].get<uint64_t>();

  EnvOptions opt;
  opt.preset = p.value("preset", std::string("fa"));
  opt.use_perception = p.value("perception", true);
  opt.augment = p.value("augment", false);
  opt.trace = p.value("trace", false);
  include_depth_ = p.value("include_depth", false);

  ScenarioConfig scen = cfg_.scenario;
  if (p.contains("scenario"))
    scen = parse_scenario_overrides(p["scenario"].dump(), scen);

  env_.emplace(cfg_, opt);
  env_->reset(seed, scen);

  ProtocolMessage m;
  m.kind = MessageKind::Obs;
  m.id = req.id;
  m.payload = obs_payload();
  return m;
}

ProtocolMessage EnvSession::do_step(const ProtocolMessage& req) {
  if (!env_) throw std::logic_error("step: no active episode, send reset first");
  if (env_->world().status != EpisodeStatus::Running)
    throw std::logic_error("step: episode is terminal, send reset");
  const json& p = req.payload;
  if (!p.contains("action") || !p["action"].is_array())
    throw std::invalid_argument("step: array field 'action' is required");
  if (p["action"].size() != kActionDim)
    throw std::invalid_argument("step: action must have exactly " +
                                std::to_string(kActionDim) + " elements");
  std::array<double, kActionDim> a{};
  for (int i = 0; i < kActionDim; ++i) {
    if (!p["action"][i].is_number())
      throw std::invalid_argument("step: action elements must be numbers");
    a[i] = p["action"][i].get<double>();
  }

  StepResult res = env_->step(CommandVector::from_flat(a));

  ProtocolMessage m;
  m.kind = MessageKind::Obs;
  m.id = req.id;
  m.payload = obs_payload();
  m.payload["reward"] = {{"reach", round9(res.reward.reach)},
                         {"push", round9(res.reward.push)},
                         {"track", round9(res.reward.track)},
                         {"align", round9(res.reward.align)},
                         {"smooth_pen", round9(res.reward.smooth_pen)},
                         {"balance_pen", round9(res.reward.balance_pen)},
                         {"upper_pen", round9(res.reward.upper_pen)},
                         {"total", round9(res.reward.total)}};
  m.payload["info"] = {{"contact", res.contact},
                       {"applied_force", round9(res.applied_force)},
                       {"command_clamped", res.command_clamped},
                       {"step", res.step}};
  return m;
}

json EnvSession::obs_payload() const {
  ObservationSet obs = env_->observe();
  json p;
  p["teacher_actor"] = num_array(obs.teacher_actor.data(), obs.teacher_actor.size());
  p["critic_priv"] = num_array(obs.critic_priv.data(), obs.critic_priv.size());
  p["student_proprio"] =
      num_array(obs.student_proprio.data(), obs.student_proprio.size());
  p["relative_goal"] = {round9(obs.relative_goal.x), round9(obs.relative_goal.y)};
  p["status"] = to_string(env_->world().status);
  if (include_depth_) {
    json stack = json::array();
    for (const auto& img : obs.depth_stack)
      stack.push_back(num_array(img.pixels.data(), img.pixels.size()));
    p["depth_stack"] = stack;
  }
  return p;
}

void serve_stdio(const SimConfig& cfg, std::istream& in, std::ostream& out) {
  EnvSession session(cfg);
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (line.empty()) continue;
    out << session.handle_line(line) << "\n";
    out.flush();
  }
}

namespace {

void serve_connection(const SimConfig& cfg, int fd) {
  EnvSession session(cfg);
  std::string buffer;
  char chunk[4096];
  while (!session.closed()) {
    ssize_t n = ::read(fd, chunk, sizeof(chunk));
    if (n <= 0) break;
    buffer.append(chunk, static_cast<size_t>(n));
    size_t pos;
    while (!session.closed() && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (line.empty()) continue;
      std::string resp = session.handle_line(line) + "\n";
      size_t off = 0;
      while (off < resp.size()) {
        ssize_t w = ::write(fd, resp.data() + off, resp.size() - off);
        if (w <= 0) { ::close(fd); return; }
        off += static_cast<size_t>(w);
      }
    }
  }
  ::close(fd);
}

}  // namespace

void serve_tcp(const SimConfig& cfg, int port) {
  int listen_fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd < 0) throw std::runtime_error("serve_tcp: socket() failed");
  int opt = 1;
  ::setsockopt(listen_fd, SOL_SOCKET, SO_REUSEADDR, &opt, sizeof(opt));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(listen_fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    ::close(listen_fd);
    throw std::runtime_error("serve_tcp: bind() failed on port " + std::to_string(port));
  }
  if (::listen(listen_fd, 8) < 0) {
    ::close(listen_fd);
    throw std::runtime_error("serve_tcp: listen() failed");
  }
  while (true) {
    int fd = ::accept(listen_fd, nullptr, nullptr);
    if (fd < 0) continue;
    std::thread(serve_connection, cfg, fd).detach();
  }
}

}  // namespace pushsim
