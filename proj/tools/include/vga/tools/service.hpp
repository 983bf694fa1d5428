#pragma once

// JSON-over-HTTP front end. The handler is transport independent so that it
// can be driven directly in tests; mount() wires it into an httplib server.

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "vga/dataset.hpp"
#include "vga/four_phase.hpp"

namespace httplib {
class Server;
}

namespace vga::tools {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::string content_type;
  std::string idempotency_key;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

inline constexpr std::uint16_t kDefaultPort = 8080;
inline constexpr const char* kPortEnv = "VGA_PORT";

class Service {
 public:
  /// With `data_dir`, datasets and session operation logs are written there
  /// after every change and replayed on construction.
  explicit Service(std::optional<std::filesystem::path> data_dir = std::nullopt);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  HttpResponse handle(const HttpRequest& req);
  void mount(httplib::Server& server);

  std::size_t dataset_count() const;
  std::size_t session_count() const;

 private:
  struct Slot {
    std::shared_mutex mu;
    std::string dataset_id;
    std::optional<std::string> parent;
    std::size_t parent_ops = 0;
    std::set<std::string> exclusion;  // ids dropped relative to the parent
    nlohmann::json ops = nlohmann::json::array();
    std::optional<Phase4Session> session;
  };
  struct Replay;
  struct IdempotentEntry {
    std::mutex mu;
    std::string fingerprint;
    std::optional<HttpResponse> response;
  };

  HttpResponse route(const HttpRequest& req);
  HttpResponse post_dataset(const HttpRequest& req);
  HttpResponse post_assess(const std::string& dataset_id, const HttpRequest& req);
  HttpResponse post_session(const HttpRequest& req);
  HttpResponse get_session(const std::string& id);
  HttpResponse post_trial(const std::string& id, const HttpRequest& req, bool finalize);
  HttpResponse post_exclude(const std::string& id, const HttpRequest& req);
  HttpResponse get_geometry(const std::string& id, const HttpRequest& req);
  HttpResponse get_sbm(const std::string& dataset_id, const std::string& dmu);
  HttpResponse get_dataset(const std::string& id);

  std::shared_ptr<const Dataset> find_dataset(const std::string& id) const;
  std::shared_ptr<Slot> find_session(const std::string& id) const;
  std::string add_session(std::shared_ptr<Slot> slot);
  nlohmann::json session_body(const std::string& id, const Slot& slot) const;

  void persist_dataset(const std::string& id, const Dataset& d) const;
  void persist_session(const std::string& id, const Slot& slot) const;
  void restore();

  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex store_mu_;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_dataset_ = 1;
  std::uint64_t next_session_ = 1;

  std::mutex idem_mu_;
  std::map<std::string, std::shared_ptr<IdempotentEntry>> idempotent_;
};

/// --port if given, else $VGA_PORT, else kDefaultPort.
std::uint16_t resolve_port(std::optional<int> flag);

int serve(std::uint16_t port, std::optional<std::filesystem::path> data_dir, const std::string& host = "0.0.0.0");

}  // namespace vga::tools
