#include "support.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "depocheck/cli.hpp"
#include "depocheck/io.hpp"
#include "depocheck/sentences.hpp"
#include "depocheck/service.hpp"
#include "depocheck/tokens.hpp"
#include "httplib.h"

namespace depocheck::testing {

namespace fs = std::filesystem;

fs::path samples_dir() { return DEPOCHECK_SAMPLES_DIR; }
fs::path fixtures_dir() { return DEPOCHECK_FIXTURES_DIR; }
fs::path golden_dir() { return DEPOCHECK_GOLDEN_DIR; }
fs::path cli_path() { return DEPOCHECK_CLI_PATH; }

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "depocheck-test-XXXXXX").string();
  if (mkdtemp(pattern.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "policy",   "claim",     "premium",  "letter",   "agent",    "beneficiary", "office",
      "contract", "signed",    "meeting",  "account",  "payment",  "denied",      "approved",
      "doctor",   "hospital",  "records",  "insurer",  "employer", "witness",     "attorney",
      "company",  "warehouse", "shipment", "invoice",  "manager",  "board",       "million",
      "thousand", "january",   "march",    "august",   "october",  "2015",        "2019",
      "2021",     "the",       "a",        "was",      "to",       "of",          "and",
      "in",       "on",        "at",       "with",     "his",      "her",         "not",
      "$10",      "$250",      "review",   "amended",  "coverage", "heart",       "condition",
      "disclosed", "filed",    "appeal",   "upheld",   "estate",   "trust",       "safe"};
  return words;
}

}  // namespace

std::string random_sentence(std::mt19937& rng, int words) {
  const auto& vocab = vocabulary();
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string out;
  for (int i = 0; i < words; ++i) {
    std::string w = vocab[pick(rng)];
    if (i == 0 && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    if (i > 0) out += ' ';
    out += w;
  }
  return out + ".";
}

std::string generate_deposition(int pages, int lines_per_page, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> length(3, 14);
  std::string out;
  for (int p = 1; p <= pages; ++p) {
    out += "=== PAGE " + std::to_string(p) + " ===\n";
    for (int l = 1; l <= lines_per_page; ++l) {
      char number[8];
      std::snprintf(number, sizeof number, "%2d ", l);
      out += number;
      if (l % 11 == 0) {
        out += "MR. SMITH: Objection, form.";
      } else if (l % 2 == 1) {
        std::string q = random_sentence(rng, length(rng));
        q.back() = '?';
        out += "Q. " + q;
      } else {
        out += "A. " + random_sentence(rng, length(rng));
      }
      out += '\n';
    }
  }
  return out;
}

std::unique_ptr<Judge> heuristic_judge() { return make_judge(JudgeConfig{}); }

std::optional<std::string> brute_force_span(const Transcript& t, const CitationSpan& span) {
  bool start_exists = false;
  bool end_exists = false;
  std::vector<std::string> picked;
  for (const auto& page : t.pages) {
    for (const auto& line : page.lines) {
      const bool after_start = page.number > span.start_page ||
                               (page.number == span.start_page && line.number >= span.start_line);
      const bool before_end = page.number < span.end_page ||
                              (page.number == span.end_page && line.number <= span.end_line);
      if (page.number == span.start_page && line.number == span.start_line) start_exists = true;
      if (page.number == span.end_page && line.number == span.end_line) end_exists = true;
      if (after_start && before_end) picked.push_back(line.text);
    }
  }
  if (!start_exists || !end_exists) return std::nullopt;
  std::string out;
  for (std::size_t i = 0; i < picked.size(); ++i) {
    if (i > 0) out += '\n';
    out += picked[i];
  }
  return out;
}

WindowChoice brute_force_window(std::string_view nugget_text, std::string_view summary) {
  const auto wanted = content_token_set(nugget_text);
  const auto sentences = segment_sentences(summary);
  WindowChoice best;
  best.total = wanted.size();
  for (std::size_t start = 0; start < sentences.size(); ++start) {
    for (std::size_t len = 1; len <= 3 && start + len <= sentences.size(); ++len) {
      const TextRange range{sentences[start].begin, sentences[start + len - 1].end};
      const auto have = content_token_set(summary.substr(range.begin, range.size()));
      std::size_t hits = 0;
      for (const auto& w : wanted) {
        for (const auto& h : have) {
          if (w == h) {
            ++hits;
            break;
          }
        }
      }
      if (hits > best.hits) {
        best.hits = hits;
        best.range = range;
      }
    }
  }
  return best;
}

std::optional<std::string> partition_violation(const NuggetBank& bank, const ComparisonReport& report) {
  std::map<std::string, int> seen;
  for (const auto* set : {&report.matched, &report.unique_a, &report.unique_b, &report.missing}) {
    for (const auto& id : *set) ++seen[id];
  }
  for (const auto& [id, count] : seen) {
    if (bank.find(id) == nullptr) return "id " + id + " is not in the bank";
    if (count != 1) return "id " + id + " appears in " + std::to_string(count) + " sets";
  }
  for (const auto& n : bank.nuggets) {
    if (!seen.count(n.id)) return "id " + n.id + " is in no set";
  }
  auto in = [](const std::vector<std::string>& v, const std::string& id) {
    return std::find(v.begin(), v.end(), id) != v.end();
  };
  for (const auto& n : bank.nuggets) {
    const bool a = report.alignments_a.at(n.id).score >= 1;
    const bool b = report.alignments_b.at(n.id).score >= 1;
    const auto& expected = a && b ? report.matched
                           : a    ? report.unique_a
                           : b    ? report.unique_b
                                  : report.missing;
    if (!in(expected, n.id)) return "id " + n.id + " is in the wrong set";
  }
  if (seen.size() != bank.nuggets.size()) return "set sizes do not add up to the bank";
  return std::nullopt;
}

std::string canonical_ref_oracle(int sp, int sl, int ep, int el) {
  char buf[64];
  if (sp == ep && sl == el) {
    std::snprintf(buf, sizeof buf, "%d:%02d", sp, sl);
  } else {
    std::snprintf(buf, sizeof buf, "%d:%02d-%d:%02d", sp, sl, ep, el);
  }
  return buf;
}

struct StubEndpoint::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

StubEndpoint::StubEndpoint(Handler handler) : impl_(std::make_unique<Impl>()) {
  impl_->server.Post(".*", [this, handler](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    Json request = Json::parse(req.body, nullptr, false);
    std::string task = "unknown";
    int attempt = 0;
    if (request.is_object()) {
      task = request["response_format"]["json_schema"].value("name", std::string("unknown"));
      attempt = static_cast<int>(request["messages"].size() - 2) / 2;
    }
    StubReply reply = handler(task, request, attempt);
    res.status = reply.status;
    if (reply.status != 200) {
      res.set_content(R"({"error":"stub failure"})", "application/json");
      return;
    }
    Json envelope = {{"choices", Json::array({{{"index", 0},
                                               {"message", {{"role", "assistant"}, {"content", reply.content}}}}})}};
    res.set_content(envelope.dump(), "application/json");
  });
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw std::runtime_error("stub endpoint could not bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

StubEndpoint::~StubEndpoint() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubEndpoint::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1"; }

StubReply valid_stub_reply(const std::string& task, const Json& request) {
  const std::string prompt = request["messages"][1]["content"].get<std::string>();
  std::smatch m;
  if (task == "extract") {
    const auto at = prompt.find("Excerpt:");
    const std::string excerpt = prompt.substr(at == std::string::npos ? 0 : at);
    Json nuggets = Json::array();
    if (std::regex_search(excerpt, m, std::regex(R"((\d+):(\d+)  )"))) {
      const std::string ref = m[1].str() + ":" + m[2].str();
      nuggets.push_back({{"text", "The testimony at " + ref + " states a fact."}, {"citations", {ref}}});
    }
    return {200, Json{{"nuggets", nuggets}}.dump()};
  }
  if (task == "align") {
    if (!std::regex_search(prompt, m, std::regex(R"(1\. \[(\d+), (\d+)\))"))) {
      return {200, R"({"score":0,"segment_start":null,"segment_end":null,"explanation":"no sentences","absent_parts":[]})"};
    }
    Json reply = {{"score", 1},
                  {"segment_start", std::stoi(m[1].str())},
                  {"segment_end", std::stoi(m[2].str())},
                  {"explanation", "the first sentence touches on the fact"},
                  {"absent_parts", {"detail"}}};
    return {200, reply.dump()};
  }
  return {200, R"({"accurate":true,"covered":true,"sufficient":true,"rationale":"supported"})"};
}

JudgeConfig stub_judge_config(const std::string& url) {
  JudgeConfig cfg;
  cfg.kind = JudgeKind::Remote;
  cfg.endpoint_url = url;
  cfg.model_name = "stub-model";
  cfg.backoff_ms = 2;
  cfg.timeout_seconds = 5;
  return cfg;
}

namespace {

void cli(std::vector<std::string> args) {
  args.insert(args.begin(), "depocheck");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw std::runtime_error("depocheck " + args[1] + " exited " + std::to_string(code) + ": " + err.str());
}

}  // namespace

std::vector<std::string> golden_names() {
  return {"holloway.tsv", "bank.json",         "align-a.json", "align-b.json",
          "compare.json", "align-refine.json", "refine.json"};
}

std::vector<std::pair<std::string, std::string>> run_cli_pipeline(const TempDir& dir) {
  const auto s = [](const char* name) { return (samples_dir() / name).string(); };
  const auto o = [&](const char* name) { return (dir / name).string(); };
  cli({"--judge", "heuristic", "parse", s("holloway-deposition.txt"), "--format", "pagemarked", "-o", o("holloway.tsv")});
  cli({"--judge", "heuristic", "extract", o("holloway.tsv"), "-o", o("bank.json")});
  cli({"--judge", "heuristic", "align", o("bank.json"), s("summary-a.txt"), "-o", o("align-a.json")});
  cli({"--judge", "heuristic", "align", o("bank.json"), s("summary-b.txt"), "-o", o("align-b.json")});
  cli({"compare", o("bank.json"), o("align-a.json"), o("align-b.json"), "-o", o("compare.json")});
  cli({"--judge", "heuristic", "align", o("bank.json"), s("summary-refine.txt"), "-o", o("align-refine.json")});
  cli({"--judge", "heuristic", "refine", o("bank.json"), s("summary-refine.txt"), o("align-refine.json"),
       "--transcript", o("holloway.tsv"), "-o", o("refine.json")});
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& name : golden_names()) out.emplace_back(name, read_file(dir / name));
  return out;
}

namespace {

Json call(Service& service, const std::string& method, const std::string& path, const Json& body,
          int expected_status) {
  ApiRequest req{method, path, {}, body.is_null() ? std::string() : body.dump()};
  auto res = service.handle(req);
  if (res.status != expected_status) {
    throw std::runtime_error(method + " " + path + " answered " + std::to_string(res.status) + ": " + res.body);
  }
  return Json::parse(res.body);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> run_service_pipeline(const TempDir& dir) {
  Service service({dir / "data", JudgeConfig{}});
  const auto raw = read_file(samples_dir() / "holloway-deposition.txt");
  const auto tid = call(service, "POST", "/api/transcripts", {{"text", raw}, {"format", "pagemarked"}}, 201)
                       .at("transcript_id")
                       .get<std::string>();
  const auto a = read_file(samples_dir() / "summary-a.txt");
  const auto b = read_file(samples_dir() / "summary-b.txt");
  const auto r = read_file(samples_dir() / "summary-refine.txt");
  const auto cmp_id = call(service, "POST", "/api/sessions",
                           {{"kind", "comparison"}, {"transcript_id", tid}, {"summaries", {a, b}}}, 201)
                          .at("session_id")
                          .get<std::string>();
  const auto ref_id = call(service, "POST", "/api/sessions",
                           {{"kind", "refinement"}, {"transcript_id", tid}, {"summaries", {r}}}, 201)
                          .at("session_id")
                          .get<std::string>();
  service.wait_idle();

  auto cmp = call(service, "GET", "/api/sessions/" + cmp_id, nullptr, 200);
  auto ref = call(service, "GET", "/api/sessions/" + ref_id, nullptr, 200);
  for (const auto* s : {&cmp, &ref}) {
    if ((*s)["status"]["state"] != "ready") throw std::runtime_error("session not ready: " + s->dump());
  }
  auto alignment_doc = [&](const Json& session, std::size_t i) {
    return dump_document({{"transcript_id", tid},
                          {"summary_id", session["summaries"][i]["id"]},
                          {"alignments", session["alignments"][i]}});
  };
  ApiRequest bank_req{"GET", "/api/transcripts/" + tid + "/nuggets", {}, {}};
  return {{"bank.json", service.handle(bank_req).body},
          {"align-a.json", alignment_doc(cmp, 0)},
          {"align-b.json", alignment_doc(cmp, 1)},
          {"compare.json", dump_document(cmp["report"])},
          {"align-refine.json", alignment_doc(ref, 0)},
          {"refine.json", dump_document(ref["report"])}};
}

}  // namespace depocheck::testing
