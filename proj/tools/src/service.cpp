#include "vga/tools/service.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <httplib.h>

#include "common.hpp"
#include "vga/errors.hpp"
#include "vga/report.hpp"
#include "vga/sbm.hpp"

namespace vga::tools {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MethodNotAllowed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HttpResponse respond(int status, json body) { return {status, dump_report(std::move(body))}; }

HttpResponse failure(int status, const std::string& kind, const std::string& message) {
  return respond(status, error_report(kind, message));
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream is(path);
  while (std::getline(is, part, '/'))
    if (!part.empty()) out.push_back(part);
  return out;
}

json object_body(const HttpRequest& req) {
  if (req.body.empty()) throw BadRequest("request body must be a JSON object");
  auto j = json::parse(req.body);
  if (!j.is_object()) throw BadRequest("request body must be a JSON object");
  return j;
}

double number_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw BadRequest(std::string("'") + key + "' must be a number");
  return it->get<double>();
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw BadRequest(std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::uint64_t id_number(const std::string& id) {
  if (id.size() < 2) return 0;
  return std::strtoull(id.c_str() + 1, nullptr, 10);
}

void write_atomically(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void apply_op(Phase4Session& s, const json& op) {
  const auto name = op.at("op").get<std::string>();
  const double kappa = op.at("kappa").get<double>();
  if (name == "what_if") s.what_if(kappa);
  else if (name == "finalize") s.finalize(kappa);
}

}  // namespace

struct Service::Replay {
  std::map<std::string, json> records;
  std::map<std::string, std::shared_ptr<const Dataset>>& datasets;

  Phase4Session build(const std::string& id, std::size_t op_limit) {
    const auto& rec = records.at(id);
    std::optional<Phase4Session> s;
    if (!rec.at("parent").is_null()) {
      const auto parent = rec.at("parent").get<std::string>();
      auto base = build(parent, rec.at("parent_ops").get<std::size_t>());
      s = base.exclude_and_rerun(rec.at("exclusion").get<std::set<std::string>>());
    } else {
      s = Phase4Session::start(datasets.at(rec.at("dataset_id").get<std::string>()), rec.at("dmu").get<std::string>());
    }
    const auto& ops = rec.at("ops");
    for (std::size_t k = 0; k < std::min(op_limit, ops.size()); ++k) apply_op(*s, ops[k]);
    return std::move(*s);
  }
};

Service::Service(std::optional<fs::path> data_dir) : data_dir_(std::move(data_dir)) {
  if (data_dir_) restore();
}

Service::~Service() = default;

std::size_t Service::dataset_count() const {
  std::shared_lock lock(store_mu_);
  return datasets_.size();
}

std::size_t Service::session_count() const {
  std::shared_lock lock(store_mu_);
  return sessions_.size();
}

HttpResponse Service::handle(const HttpRequest& req) {
  auto guarded = [&] {
    try {
      return route(req);
    } catch (const NotFound& e) {
      return failure(404, "not_found", e.what());
    } catch (const MethodNotAllowed& e) {
      return failure(405, "method_not_allowed", e.what());
    } catch (const BadRequest& e) {
      return failure(400, "bad_request", e.what());
    } catch (const ParseError& e) {
      return failure(400, "parse_error", e.what());
    } catch (const ValidationError& e) {
      return failure(400, "validation_error", e.what());
    } catch (const json::exception& e) {
      return failure(400, "bad_request", e.what());
    } catch (const std::invalid_argument& e) {
      return failure(400, "bad_request", e.what());
    } catch (const AssessmentError& e) {
      return failure(422, "assessment_error", e.what());
    } catch (const NumericalError& e) {
      return failure(500, "numerical_error", e.what());
    } catch (const std::exception& e) {
      return failure(500, "internal_error", e.what());
    }
  };

  if (req.method != "POST" || req.idempotency_key.empty()) return guarded();

  std::shared_ptr<IdempotentEntry> entry;
  {
    std::lock_guard lock(idem_mu_);
    auto& slot = idempotent_[req.idempotency_key];
    if (!slot) slot = std::make_shared<IdempotentEntry>();
    entry = slot;
  }
  std::lock_guard lock(entry->mu);
  const auto fingerprint = req.method + " " + req.path + "\n" + req.body;
  if (entry->response) {
    if (entry->fingerprint != fingerprint)
      return failure(400, "bad_request", "idempotency key reused with a different request");
    return *entry->response;
  }
  auto out = guarded();
  if (out.status < 500) {
    entry->fingerprint = fingerprint;
    entry->response = out;
  }
  return out;
}

HttpResponse Service::route(const HttpRequest& req) {
  const auto parts = split_path(req.path);
  const bool get = req.method == "GET";
  const bool post = req.method == "POST";
  auto only = [&](bool ok) {
    if (!ok) throw MethodNotAllowed(req.method + " not allowed on " + req.path);
  };

  if (parts.size() == 1 && parts[0] == "health") {
    only(get);
    return respond(200, {{"status", "ok"}});
  }
  if (!parts.empty() && parts[0] == "datasets") {
    if (parts.size() == 1) return only(post), post_dataset(req);
    if (parts.size() == 2) return only(get), get_dataset(parts[1]);
    if (parts.size() == 3 && parts[2] == "assess") return only(post), post_assess(parts[1], req);
    if (parts.size() == 4 && parts[2] == "sbm") return only(get), get_sbm(parts[1], parts[3]);
  }
  if (!parts.empty() && parts[0] == "sessions") {
    if (parts.size() == 1) return only(post), post_session(req);
    if (parts.size() == 2) return only(get), get_session(parts[1]);
    if (parts.size() == 3) {
      const auto& action = parts[2];
      if (action == "what-if") return only(post), post_trial(parts[1], req, false);
      if (action == "finalize") return only(post), post_trial(parts[1], req, true);
      if (action == "exclude") return only(post), post_exclude(parts[1], req);
      if (action == "geometry") return only(get), get_geometry(parts[1], req);
    }
  }
  throw NotFound("no route for " + req.path);
}

std::shared_ptr<const Dataset> Service::find_dataset(const std::string& id) const {
  std::shared_lock lock(store_mu_);
  auto it = datasets_.find(id);
  if (it == datasets_.end()) throw NotFound("unknown dataset '" + id + "'");
  return it->second;
}

std::shared_ptr<Service::Slot> Service::find_session(const std::string& id) const {
  std::shared_lock lock(store_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

HttpResponse Service::post_dataset(const HttpRequest& req) {
  std::optional<Dataset> d;
  if (req.content_type.starts_with("text/csv")) {
    d = parse_csv(req.body);
  } else {
    auto j = object_body(req);
    if (auto it = j.find("csv"); it != j.end()) d = parse_csv(it->get<std::string>());
    else d = parse_json(req.body);
  }
  auto shared = std::make_shared<const Dataset>(std::move(*d));
  std::string id;
  {
    std::unique_lock lock(store_mu_);
    id = "d" + std::to_string(next_dataset_++);
    datasets_[id] = shared;
  }
  persist_dataset(id, *shared);
  auto body = json::parse(to_json_text(*shared));
  body["dataset_id"] = id;
  body["n"] = shared->n();
  body["m"] = shared->m();
  body["s"] = shared->s();
  return respond(201, std::move(body));
}

HttpResponse Service::get_dataset(const std::string& id) {
  auto d = find_dataset(id);
  auto body = json::parse(to_json_text(*d));
  body["dataset_id"] = id;
  body["n"] = d->n();
  body["m"] = d->m();
  body["s"] = d->s();
  return respond(200, std::move(body));
}

HttpResponse Service::post_assess(const std::string& dataset_id, const HttpRequest& req) {
  auto d = find_dataset(dataset_id);
  auto j = object_body(req);
  const auto dmu = string_field(j, "dmu");
  if (!d->index_of(dmu)) throw NotFound("unknown DMU '" + dmu + "'");
  std::optional<double> kappa;
  if (j.contains("kappa") && !j["kappa"].is_null()) kappa = number_field(j, "kappa");
  const auto kind = program_kind(j.value("program", std::string("pte")), kappa);
  return respond(200, assessment_report(*d, assess(*d, dmu, kind)));
}

HttpResponse Service::get_sbm(const std::string& dataset_id, const std::string& dmu) {
  auto d = find_dataset(dataset_id);
  if (!d->index_of(dmu)) throw NotFound("unknown DMU '" + dmu + "'");
  return respond(200, sbm_report(compare_sbm_vga(*d, dmu)));
}

std::string Service::add_session(std::shared_ptr<Slot> slot) {
  std::string id;
  {
    std::unique_lock lock(store_mu_);
    id = "s" + std::to_string(next_session_++);
    sessions_[id] = slot;
  }
  std::shared_lock lock(slot->mu);
  persist_session(id, *slot);
  return id;
}

json Service::session_body(const std::string& id, const Slot& slot) const {
  return {{"session_id", id},
          {"dataset_id", slot.dataset_id},
          {"previous", slot.parent ? json(*slot.parent) : json(nullptr)},
          {"session", session_report(*slot.session)}};
}

HttpResponse Service::post_session(const HttpRequest& req) {
  auto j = object_body(req);
  const auto dataset_id = string_field(j, "dataset_id");
  const auto dmu = string_field(j, "dmu");
  auto d = find_dataset(dataset_id);
  if (!d->index_of(dmu)) throw NotFound("unknown DMU '" + dmu + "'");

  auto slot = std::make_shared<Slot>();
  slot->dataset_id = dataset_id;
  slot->session = Phase4Session::start(d, dmu);
  const auto id = add_session(slot);
  std::shared_lock lock(slot->mu);
  return respond(201, session_body(id, *slot));
}

HttpResponse Service::get_session(const std::string& id) {
  auto slot = find_session(id);
  std::shared_lock lock(slot->mu);
  return respond(200, session_body(id, *slot));
}

HttpResponse Service::post_trial(const std::string& id, const HttpRequest& req, bool finalize) {
  auto slot = find_session(id);
  const double kappa = number_field(object_body(req), "kappa");
  std::unique_lock lock(slot->mu);
  auto& s = *slot->session;
  const auto result = finalize ? s.finalize(kappa) : s.what_if(kappa);
  switch (result.outcome) {
    case Outcome::already_finalized:
      return failure(409, "already_finalized", result.reason);
    case Outcome::outside_interval: {
      auto body = error_report("rejected", result.reason);
      body["kappa"] = kappa;
      body["interval"] = {{"lower", s.interval().lower}, {"upper", s.interval().upper}};
      return respond(422, std::move(body));
    }
    case Outcome::accepted:
      break;
  }
  slot->ops.push_back({{"op", finalize ? "finalize" : "what_if"}, {"kappa", kappa}});
  persist_session(id, *slot);
  return respond(200, {{"session_id", id},
                       {"kappa", kappa},
                       {"final", finalize},
                       {"report", assessment_report(s.dataset(), result.trial->assessment)}});
}

HttpResponse Service::post_exclude(const std::string& id, const HttpRequest& req) {
  auto slot = find_session(id);
  auto j = object_body(req);
  auto it = j.find("ids");
  if (it == j.end() || !it->is_array()) throw BadRequest("'ids' must be an array of DMU ids");
  const auto ids = it->get<std::set<std::string>>();

  std::shared_lock lock(slot->mu);
  if (ids.empty()) return respond(200, session_body(id, *slot));
  auto next = std::make_shared<Slot>();
  next->dataset_id = slot->dataset_id;
  next->parent = id;
  next->parent_ops = slot->ops.size();
  next->exclusion = ids;
  next->session = slot->session->exclude_and_rerun(ids);
  lock.unlock();

  const auto new_id = add_session(next);
  std::shared_lock next_lock(next->mu);
  return respond(201, session_body(new_id, *next));
}

HttpResponse Service::get_geometry(const std::string& id, const HttpRequest& req) {
  auto slot = find_session(id);
  auto get = [&](const char* key, std::string fallback) {
    auto it = req.query.find(key);
    return it == req.query.end() ? fallback : it->second;
  };
  const auto frame_name = get("frame", "ste");
  if (frame_name != "pte" && frame_name != "ste") throw BadRequest("frame must be pte or ste");
  const auto frame = frame_name == "pte" ? Frame::pte : Frame::ste;
  const auto source = get("source", frame == Frame::pte ? "pte" : "ste1");

  std::shared_lock lock(slot->mu);
  const auto& s = *slot->session;
  const VgaAssessment* a = nullptr;
  if (source == "pte") a = &s.phase1().pte;
  else if (source == "ste1") a = &s.phase2().ste1;
  else if (source == "ste2") a = &s.phase3().ste2;
  else if (source == "final") {
    if (!s.final_choice()) throw NotFound("session has no final assessment");
    a = &s.final_choice()->assessment;
  } else if (source == "latest") {
    if (s.what_if_log().empty()) throw NotFound("session has no what-if trials");
    a = &s.what_if_log().back().assessment;
  } else {
    throw BadRequest("source must be pte, ste1, ste2, final or latest");
  }
  auto body = geometry_report(s.dataset(), *a, frame);
  body["session_id"] = id;
  body["source"] = source;
  return respond(200, std::move(body));
}

void Service::persist_dataset(const std::string& id, const Dataset& d) const {
  if (!data_dir_) return;
  write_atomically(*data_dir_ / "datasets" / (id + ".csv"), to_csv(d));
}

void Service::persist_session(const std::string& id, const Slot& slot) const {
  if (!data_dir_) return;
  json rec = {{"dataset_id", slot.dataset_id},
              {"dmu", slot.session->dmu()},
              {"parent", slot.parent ? json(*slot.parent) : json(nullptr)},
              {"parent_ops", slot.parent_ops},
              {"exclusion", slot.exclusion},
              {"ops", slot.ops}};
  write_atomically(*data_dir_ / "sessions" / (id + ".json"), rec.dump(2) + "\n");
}

void Service::restore() {
  const auto ddir = *data_dir_ / "datasets";
  const auto sdir = *data_dir_ / "sessions";
  auto by_number = [](const fs::path& dir, const char* ext) {
    std::vector<std::pair<std::uint64_t, fs::path>> files;
    if (fs::is_directory(dir))
      for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ext) files.emplace_back(id_number(e.path().stem().string()), e.path());
    std::sort(files.begin(), files.end());
    return files;
  };

  for (const auto& [num, path] : by_number(ddir, ".csv")) {
    datasets_[path.stem().string()] = std::make_shared<const Dataset>(load_csv(path));
    next_dataset_ = std::max(next_dataset_, num + 1);
  }
  Replay replay{{}, datasets_};
  const auto files = by_number(sdir, ".json");
  for (const auto& [num, path] : files) replay.records[path.stem().string()] = json::parse(read_file(path));
  for (const auto& [num, path] : files) {
    const auto id = path.stem().string();
    const auto& rec = replay.records[id];
    auto slot = std::make_shared<Slot>();
    slot->dataset_id = rec.at("dataset_id").get<std::string>();
    if (!rec.at("parent").is_null()) slot->parent = rec.at("parent").get<std::string>();
    slot->parent_ops = rec.at("parent_ops").get<std::size_t>();
    slot->exclusion = rec.at("exclusion").get<std::set<std::string>>();
    slot->ops = rec.at("ops");
    slot->session = replay.build(id, slot->ops.size());
    sessions_[id] = slot;
    next_session_ = std::max(next_session_, num + 1);
  }
}

void Service::mount(httplib::Server& server) {
  auto handler = [this](const httplib::Request& r, httplib::Response& res) {
    HttpRequest req{r.method, r.path, {}, r.body, r.get_header_value("Content-Type"),
                    r.get_header_value("Idempotency-Key")};
    for (const auto& [k, v] : r.params) req.query.emplace(k, v);
    auto out = handle(req);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(".*", handler);
  server.Post(".*", handler);
  server.Put(".*", handler);
  server.Delete(".*", handler);
}

std::uint16_t resolve_port(std::optional<int> flag) {
  int port = kDefaultPort;
  if (flag) {
    port = *flag;
  } else if (const char* env = std::getenv(kPortEnv); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0') throw ValidationError({std::string(kPortEnv) + " is not a port number"});
    port = int(v);
  }
  if (port < 1 || port > 65535) throw ValidationError({"port out of range: " + std::to_string(port)});
  return static_cast<std::uint16_t>(port);
}

int serve(std::uint16_t port, std::optional<fs::path> data_dir, const std::string& host) {
  Service service(std::move(data_dir));
  httplib::Server server;
  service.mount(server);
  std::cerr << "vga: listening on " << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "vga: cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vga::tools
