#include "kgcrs/http_server.hpp"

#include <httplib.h>

#include "kgcrs/serialize.hpp"

namespace kgcrs {

using nlohmann::json;

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BotNotFound:
    case ErrorCode::SessionNotFound:
      return 404;
    case ErrorCode::MalformedLine:
    case ErrorCode::EmptyGraph:
    case ErrorCode::SelfLoop:
    case ErrorCode::InvalidConfig:
    case ErrorCode::UnresolvedAlias:
    case ErrorCode::BadRequest:
    case ErrorCode::KindMismatch:
    case ErrorCode::UnknownNode:
    case ErrorCode::CorpusFormat:
      return 400;
    default:
      return 500;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
  json body{{"error", to_string(e.code())},
            {"detail", e.what()},
            {"stage", e.stage().empty() ? json(nullptr) : json(e.stage())}};
  if (e.line()) body["line"] = *e.line();
  if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
    json findings = json::array();
    for (const ConfigFinding& f : v->findings()) {
      findings.push_back(json{{"code", f.code}, {"field", f.field}, {"detail", f.detail}});
    }
    body["findings"] = findings;
  }
  send_json(res, status_for(e.code()), body);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json doc = json::parse(req.body, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  return doc;
}

json bot_doc(const BotInfo& info) {
  return json{{"id", info.id},
              {"name", info.name},
              {"created_at", info.created_at},
              {"graph", {{"nodes", info.stats.nodes},
                         {"edges", info.stats.edges},
                         {"duplicate_lines", info.stats.duplicate_lines}}}};
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, e);
    } catch (const json::exception& e) {
      send_error(res, Error(ErrorCode::BadRequest, e.what()));
    } catch (const std::exception& e) {
      send_error(res, Error(ErrorCode::Internal, e.what()));
    }
  };
}

std::string form_value(const httplib::Request& req, const std::string& key) {
  if (req.has_file(key)) return req.get_file_value(key).content;
  if (req.has_param(key)) return req.get_param_value(key);
  return {};
}

}  // namespace

HttpServer::HttpServer(Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>()) {
  routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::routes() {
  httplib::Server& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/bots", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::string name;
    std::string tsv;
    std::string source;
    json config = json::object();
    if (req.is_multipart_form_data()) {
      name = form_value(req, "name");
      tsv = form_value(req, "kg");
      source = form_value(req, "kg_from");
      std::string cfg = form_value(req, "config");
      if (!cfg.empty()) {
        config = json::parse(cfg, nullptr, false);
        if (config.is_discarded()) throw Error(ErrorCode::BadRequest, "config is not valid JSON");
      }
    } else {
      json body = parse_body(req);
      name = body.value("name", "");
      tsv = body.value("kg", "");
      source = body.value("kg_from", "");
      if (body.contains("config")) config = body["config"];
    }
    if (name.empty()) name = "bot";
    BotInfo info;
    if (!source.empty()) {
      info = engine_.create_bot_from(name, source, config);
    } else {
      if (tsv.empty()) throw Error(ErrorCode::BadRequest, "missing data file field 'kg'");
      info = engine_.create_bot(name, tsv, config);
    }
    json body = bot_doc(info);
    body["config"] = config_to_json(*engine_.bot_runtime(info.id)->config);
    send_json(res, 201, body);
  }));

  s.Get("/bots", guarded([this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const BotInfo& b : engine_.list_bots()) out.push_back(bot_doc(b));
    send_json(res, 200, out);
  }));

  s.Get(R"(/bots/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    auto rt = engine_.bot_runtime(id);
    json body = bot_doc(engine_.bot_info(id));
    body["config"] = config_to_json(*rt->config);
    body["graph"] = json_doc::graph_stats(*rt->graph, engine_.bot_info(id).stats);
    send_json(res, 200, body);
  }));

  s.Patch(R"(/bots/([^/]+)/config)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    BotConfig cfg = engine_.update_config(req.matches[1], parse_body(req));
    send_json(res, 200, config_to_json(cfg));
  }));

  s.Post(R"(/bots/([^/]+)/sessions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    std::optional<std::uint64_t> seed;
    if (body.contains("seed")) {
      if (!body["seed"].is_number_unsigned() && !body["seed"].is_number_integer()) {
        throw Error(ErrorCode::BadRequest, "seed must be a non-negative integer");
      }
      seed = body["seed"].get<std::uint64_t>();
    }
    auto handle = engine_.create_session(req.matches[1], seed);
    send_json(res, 201, json{{"session_id", handle.id}, {"bot_id", handle.bot_id}, {"seed", handle.seed}});
  }));

  s.Post(R"(/sessions/([^/]+)/messages)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body = parse_body(req);
    if (!body.contains("utterance") || !body["utterance"].is_string()) {
      throw Error(ErrorCode::BadRequest, "body needs a string 'utterance'");
    }
    send_json(res, 200, engine_.post_message(req.matches[1], body["utterance"].get<std::string>()));
  }));

  s.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, engine_.get_state(req.matches[1]));
  }));

  s.Get(R"(/bots/([^/]+)/kg/focus)", guarded([this](const httplib::Request& req, httplib::Response& res) {
    std::string id = req.matches[1];
    std::vector<NodeId> seeds;
    std::string list = req.get_param_value("nodes");
    std::size_t start = 0;
    while (start < list.size()) {
      std::size_t comma = list.find(',', start);
      std::string item = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!item.empty()) {
        try {
          seeds.push_back(NodeId{static_cast<std::uint32_t>(std::stoul(item))});
        } catch (const std::exception&) {
          throw Error(ErrorCode::BadRequest, "nodes must be a comma-separated list of node ids");
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    int radius = 1;
    if (req.has_param("radius")) {
      try {
        radius = std::stoi(req.get_param_value("radius"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadRequest, "radius must be 0, 1 or 2");
      }
    }
    auto rt = engine_.bot_runtime(id);
    send_json(res, 200, json_doc::subgraph(engine_.kg_focus(id, seeds, radius), *rt->graph));
  }));
}

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

bool HttpServer::serve() { return server_->listen_after_bind(); }

bool HttpServer::listen(const std::string& host, int port) { return bind(host, port) && serve(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace kgcrs
