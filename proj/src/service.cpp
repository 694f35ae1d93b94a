#include "depocheck/service.hpp"

#include <iostream>
#include <random>

#include "depocheck/error.hpp"
#include "depocheck/pipeline.hpp"
#include "depocheck/serialize.hpp"

namespace depocheck {

namespace {

ApiResponse json_response(int status, const Json& body) { return {status, dump_document(body)}; }

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput:
    case ErrorCode::BadSpanRef:
    case ErrorCode::InvalidConfig:
      return 400;
    case ErrorCode::SpanOutOfRange:
    case ErrorCode::NotFound:
    case ErrorCode::UnknownNugget:
      return 404;
    case ErrorCode::Conflict:
      return 409;
    case ErrorCode::TranscriptMismatch:
    case ErrorCode::IncompleteAlignment:
    case ErrorCode::MissingVerdicts:
      return 422;
    case ErrorCode::JudgeUnavailable:
    case ErrorCode::MalformedJudgeResponse:
      return 503;
    case ErrorCode::StoreUnavailable:
    case ErrorCode::CorruptRecord:
      return 500;
  }
  return 500;
}

ApiResponse error_response(int status, std::string_view code, const std::string& message) {
  return json_response(status, {{"code", code}, {"message", message}});
}

ApiResponse error_response(const Error& e) {
  return error_response(status_for(e.code()), error_code_name(e.code()), e.what());
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto slash = path.find('/', pos);
    auto end = slash == std::string_view::npos ? path.size() : slash;
    if (end > pos) parts.emplace_back(path.substr(pos, end - pos));
    pos = end + 1;
  }
  return parts;
}

Json parse_body(const std::string& body) {
  Json doc = Json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::MalformedInput, "request body must be a JSON object");
  }
  return doc;
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id = "sess-";
  auto bits = rng();
  for (int i = 0; i < 12; ++i) {
    id += kHex[bits & 0xF];
    bits >>= 4;
  }
  return id;
}

void recompute_report(Session& s) {
  if (s.state != SessionState::Ready || !s.bank) return;
  if (s.kind == SessionKind::Comparison) {
    s.comparison = compare_summaries(*s.bank, s.alignments.at(0), s.alignments.at(1));
  } else {
    s.refinement = build_refinement_report(segment_summary(s.summaries.at(0).text), *s.bank,
                                           s.alignments.at(0), s.verdicts);
  }
}

}  // namespace

Service::Service(ServiceOptions options)
    : store_(options.data_dir), judge_(make_judge(options.judge)) {
  worker_ = std::thread([this] { worker_loop(); });
  for (const auto& id : store_.session_ids()) {
    try {
      auto s = store_.load_session(id);
      if (s.state == SessionState::Pending || s.state == SessionState::Running) {
        enqueue([this, id] { process_session(id); });
      }
    } catch (const Error& e) {
      std::cerr << "depocheck: skipping session " << id << ": " << e.what() << "\n";
    }
  }
}

Service::~Service() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void Service::enqueue(std::function<void()> job) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(std::move(job));
  }
  queue_cv_.notify_one();
}

void Service::worker_loop() {
  for (;;) {
    std::function<void()> job;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (queue_.empty()) return;
      job = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
    }
    try {
      job();
    } catch (const std::exception& e) {
      std::cerr << "depocheck: background job failed: " << e.what() << "\n";
    }
    {
      std::lock_guard lock(queue_mutex_);
      busy_ = false;
    }
    idle_cv_.notify_all();
  }
}

void Service::wait_idle() {
  std::unique_lock lock(queue_mutex_);
  idle_cv_.wait(lock, [&] { return queue_.empty() && !busy_; });
}

std::mutex& Service::session_lock(const std::string& id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = session_locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

ApiResponse Service::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

ApiResponse Service::route(const ApiRequest& r) {
  const auto parts = split_path(r.path);
  const auto n = parts.size();
  if (n < 2 || parts[0] != "api") return error_response(404, "NotFound", "no route " + r.path);
  const auto& method = r.method;

  if (parts[1] == "transcripts") {
    if (n == 2 && method == "POST") return post_transcript(r);
    if (n == 3 && method == "GET") return get_transcript(parts[2]);
    if (n == 4 && parts[3] == "span" && method == "GET") return get_span(parts[2], r);
    if (n == 4 && parts[3] == "nuggets" && method == "POST") return post_nuggets(parts[2], r);
    if (n == 4 && parts[3] == "nuggets" && method == "GET") return get_nuggets(parts[2]);
  } else if (parts[1] == "sessions") {
    if (n == 2 && method == "POST") return post_session(r);
    if (n == 3 && method == "GET") return get_session(parts[2]);
    if (n == 5 && parts[3] == "nuggets" && method == "PATCH") return patch_nugget(parts[2], parts[4], r);
  }
  return error_response(404, "NotFound", "no route " + method + " " + r.path);
}

Transcript Service::require_transcript(const std::string& id) const {
  auto t = store_.find_transcript(id);
  if (!t) throw Error(ErrorCode::NotFound, "no transcript '" + id + "'");
  return std::move(*t);
}

ApiResponse Service::post_transcript(const ApiRequest& r) {
  Json body = parse_body(r.body);
  if (!body.contains("text") || !body["text"].is_string()) {
    throw Error(ErrorCode::MalformedInput, "body needs a \"text\" string");
  }
  auto format = transcript_format_from_name(body.value("format", std::string("pagemarked")));
  if (!format) throw Error(ErrorCode::MalformedInput, "format must be pagemarked or normalized");
  ParseOptions options;
  options.allow_page_gaps = body.value("allow_page_gaps", false);
  Transcript t = parse_transcript(body["text"].get<std::string>(), *format, options);
  if (body.contains("title") && body["title"].is_string()) t.title = body["title"].get<std::string>();
  if (body.contains("deponent") && body["deponent"].is_string()) {
    t.deponent = body["deponent"].get<std::string>();
  }
  store_.put_transcript(t);
  return json_response(201, {{"transcript_id", t.id},
                             {"pages", t.pages.size()},
                             {"total_lines", t.total_lines()}});
}

ApiResponse Service::get_transcript(const std::string& id) {
  return json_response(200, to_json(require_transcript(id)));
}

ApiResponse Service::get_span(const std::string& id, const ApiRequest& r) {
  Transcript t = require_transcript(id);
  auto it = r.query.find("ref");
  if (it == r.query.end()) throw Error(ErrorCode::BadSpanRef, "missing ?ref=");
  auto span = parse_span_ref(it->second);
  return json_response(200, {{"ref", format_span_ref(span)}, {"text", resolve_span(t, span)}});
}

void Service::run_extraction(const std::string& transcript_id) {
  try {
    Transcript t = require_transcript(transcript_id);
    auto result = judge_->extract_nuggets(t);
    for (const auto& w : result.warnings) std::cerr << "depocheck: " << w << "\n";
    store_.put_bank(result.bank);
    std::lock_guard lock(bank_mutex_);
    extractions_[transcript_id] = {};
  } catch (const Error& e) {
    std::lock_guard lock(bank_mutex_);
    extractions_[transcript_id] = {false, std::string(error_code_name(e.code())) + ": " + e.what()};
  } catch (const std::exception& e) {
    std::lock_guard lock(bank_mutex_);
    extractions_[transcript_id] = {false, std::string("Internal: ") + e.what()};
  }
}

ApiResponse Service::post_nuggets(const std::string& id, const ApiRequest& r) {
  Transcript t = require_transcript(id);
  if (r.body.find_first_not_of(" \t\r\n") == std::string::npos) {
    {
      std::lock_guard lock(bank_mutex_);
      auto& status = extractions_[id];
      if (status.running) return json_response(202, {{"status", "running"}});
      status = {true, {}};
    }
    enqueue([this, id] { run_extraction(id); });
    return json_response(202, {{"status", "running"}});
  }
  NuggetBank bank = bank_from_json(parse_document(r.body));
  if (bank.transcript_id != t.id) {
    return error_response(422, "TranscriptMismatch", "bank is for transcript '" + bank.transcript_id + "'");
  }
  auto issues = validate_bank(bank, t);
  if (!issues.empty()) {
    Json list = Json::array();
    for (const auto& i : issues) list.push_back(to_json(i));
    return json_response(422, {{"code", "InvalidBank"},
                               {"message", std::to_string(issues.size()) + " validation issue(s)"},
                               {"issues", list}});
  }
  {
    std::lock_guard lock(bank_mutex_);
    auto it = extractions_.find(id);
    if (it != extractions_.end() && it->second.running) {
      return error_response(409, "Conflict", "an extraction for this transcript is running");
    }
    extractions_.erase(id);
    store_.put_bank(bank);
  }
  return json_response(202, {{"status", "ready"}});
}

ApiResponse Service::get_nuggets(const std::string& id) {
  require_transcript(id);
  {
    std::lock_guard lock(bank_mutex_);
    auto it = extractions_.find(id);
    if (it != extractions_.end()) {
      if (it->second.running) return json_response(202, {{"status", "running"}});
      if (!it->second.error.empty()) return error_response(503, "ExtractionFailed", it->second.error);
    }
  }
  auto bank = store_.find_bank(id);
  if (!bank) return error_response(404, "NotFound", "no nugget bank for transcript '" + id + "'");
  return json_response(200, to_json(*bank));
}

ApiResponse Service::post_session(const ApiRequest& r) {
  Json body = parse_body(r.body);
  Session s;
  auto kind = session_kind_from_name(body.value("kind", std::string()));
  if (!kind) throw Error(ErrorCode::MalformedInput, "kind must be comparison or refinement");
  s.kind = *kind;
  s.transcript_id = body.value("transcript_id", std::string());
  require_transcript(s.transcript_id);
  if (!body.contains("summaries") || !body["summaries"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "body needs a \"summaries\" array");
  }
  for (const auto& text : body["summaries"]) {
    if (!text.is_string() || text.get<std::string>().find_first_not_of(" \t\r\n") == std::string::npos) {
      throw Error(ErrorCode::MalformedInput, "summaries must be non-empty strings");
    }
    s.summaries.push_back({summary_id_for(text.get<std::string>()), text.get<std::string>()});
  }
  if (s.summaries.size() != s.expected_summaries()) {
    throw Error(ErrorCode::MalformedInput, std::string(session_kind_name(s.kind)) + " sessions take " +
                                               std::to_string(s.expected_summaries()) + " summaries");
  }
  s.id = new_session_id();
  {
    std::lock_guard lock(session_lock(s.id));
    store_.persist_session(s);
  }
  enqueue([this, id = s.id] { process_session(id); });
  return json_response(201, {{"session_id", s.id}, {"status", session_state_name(s.state)}});
}

ApiResponse Service::get_session(const std::string& id) {
  std::lock_guard lock(session_lock(id));
  return json_response(200, to_json(store_.load_session(id)));
}

NuggetBank Service::bank_for(const Transcript& t) {
  if (auto bank = store_.find_bank(t.id)) return std::move(*bank);
  auto result = judge_->extract_nuggets(t);
  for (const auto& w : result.warnings) std::cerr << "depocheck: " << w << "\n";
  store_.put_bank(result.bank);
  return std::move(result.bank);
}

void Service::process_session(const std::string& id) {
  Session s;
  {
    std::lock_guard lock(session_lock(id));
    s = store_.load_session(id);
    if (s.state == SessionState::Ready || s.state == SessionState::Failed) return;
    s.state = SessionState::Running;
    store_.persist_session(s);
  }
  try {
    Transcript t = require_transcript(s.transcript_id);
    NuggetBank bank = s.bank ? *s.bank : bank_for(t);
    std::vector<AlignmentMap> alignments;
    VerdictMap verdicts;
    std::optional<ComparisonReport> comparison;
    std::optional<RefinementReport> refinement;
    if (s.kind == SessionKind::Comparison) {
      auto run = run_comparison(*judge_, bank, s.summaries[0].text, s.summaries[1].text);
      alignments = {std::move(run.alignments_a), std::move(run.alignments_b)};
      comparison = std::move(run.report);
    } else {
      auto run = run_refinement(*judge_, t, bank, s.summaries[0].text);
      alignments = {std::move(run.alignments)};
      verdicts = std::move(run.verdicts);
      refinement = std::move(run.report);
    }
    std::lock_guard lock(session_lock(id));
    s = store_.load_session(id);
    s.bank = std::move(bank);
    s.alignments = std::move(alignments);
    s.verdicts = std::move(verdicts);
    s.comparison = std::move(comparison);
    s.refinement = std::move(refinement);
    s.state = SessionState::Ready;
    store_.persist_session(s);
  } catch (const Error& e) {
    std::lock_guard lock(session_lock(id));
    s = store_.load_session(id);
    s.state = SessionState::Failed;
    s.message = std::string(error_code_name(e.code())) + ": " + e.what();
    store_.persist_session(s);
  } catch (const std::exception& e) {
    std::lock_guard lock(session_lock(id));
    s = store_.load_session(id);
    s.state = SessionState::Failed;
    s.message = std::string("Internal: ") + e.what();
    store_.persist_session(s);
  }
}

ApiResponse Service::patch_nugget(const std::string& session_id, const std::string& nugget_id,
                                  const ApiRequest& r) {
  Json body = parse_body(r.body);
  auto label = importance_from_name(body.value("importance", std::string()));
  if (!label) {
    throw Error(ErrorCode::MalformedInput, "importance must be unlabeled, vital, okay or non_relevant");
  }
  std::lock_guard lock(session_lock(session_id));
  Session s = store_.load_session(session_id);
  if (s.state == SessionState::Pending || s.state == SessionState::Running) {
    return error_response(409, "Conflict", "session is still being processed");
  }
  if (!s.bank) return error_response(409, "Conflict", "session has no nugget bank");
  s.bank = set_importance(*s.bank, nugget_id, *label);
  recompute_report(s);
  store_.persist_session(s);
  return json_response(200, to_json(*s.bank));
}

}  // namespace depocheck
