// One line per acceptance criterion; exits nonzero if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "depocheck/analysis.hpp"
#include "depocheck/heuristic_judge.hpp"
#include "depocheck/io.hpp"
#include "depocheck/kernels.hpp"
#include "depocheck/service.hpp"
#include "support.hpp"

using namespace depocheck;
namespace dt = depocheck::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && seconds >= limit_seconds) {
    out.ok = false;
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("over time limit");
  }
  if (!out.ok) ++failures;
  std::printf("%s  %-28s %7.3fs  %s\n", out.ok ? "PASS" : "FAIL", name, seconds, out.detail.c_str());
  std::fflush(stdout);
}

AlignmentMap score_map(const NuggetBank& bank, std::mt19937& rng) {
  AlignmentMap map;
  for (const auto& n : bank.nuggets) {
    AlignmentResult r;
    r.nugget_id = n.id;
    r.score = std::uniform_int_distribution<int>(0, 2)(rng);
    if (r.score > 0) r.matched_segment = TextRange{0, 1};
    map[n.id] = r;
  }
  return map;
}

Outcome partition() {
  std::mt19937 rng(20240601);
  int violations = 0;
  std::string first;
  for (int run = 0; run < 1000; ++run) {
    NuggetBank bank;
    bank.transcript_id = "tpartition";
    const int size = std::uniform_int_distribution<int>(1, 50)(rng);
    for (int i = 0; i < size; ++i) {
      Nugget n;
      n.id = nugget_id_for(static_cast<std::size_t>(i + 1));
      n.text = "Fact " + std::to_string(i);
      n.citations = {CitationSpan{1 + i / 25, 1 + i % 25, 1 + i / 25, 1 + i % 25}};
      n.importance = static_cast<Importance>(std::uniform_int_distribution<int>(0, 3)(rng));
      bank.nuggets.push_back(std::move(n));
    }
    std::shuffle(bank.nuggets.begin(), bank.nuggets.end(), rng);
    const auto a = score_map(bank, rng);
    const auto b = score_map(bank, rng);
    if (auto v = dt::partition_violation(bank, compare_summaries(bank, a, b))) {
      if (violations++ == 0) first = *v;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in 1000 runs" +
                               (first.empty() ? "" : " (" + first + ")")};
}

Outcome span_oracle() {
  long checked = 0, mismatches = 0;
  for (int pages = 1; pages <= 5; ++pages) {
    for (int lines = 1; lines <= 25; ++lines) {
      const auto t = parse_transcript(dt::generate_deposition(pages, lines, 7u * pages + lines),
                                      TranscriptFormat::PageMarked);
      std::vector<LineAddress> all;
      for (const auto& p : t.pages)
        for (const auto& l : p.lines) all.push_back({p.number, l.number});
      for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i; j < all.size(); ++j) {
          const CitationSpan s{all[i].page, all[i].line, all[j].page, all[j].line};
          auto oracle = dt::brute_force_span(t, s);
          ++checked;
          if (!oracle || resolve_span(t, s) != *oracle) ++mismatches;
        }
      }
      // One step past the last line on each page must not resolve.
      for (const auto& p : t.pages) {
        const CitationSpan past{p.number, lines + 1, p.number, lines + 1};
        ++checked;
        if (span_resolves(t, past) || dt::brute_force_span(t, past)) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(checked) + " spans, " + std::to_string(mismatches) + " mismatches"};
}

std::string random_summary(std::mt19937& rng, int sentences) {
  std::string s;
  for (int i = 0; i < sentences; ++i) {
    if (i) s += ' ';
    s += dt::random_sentence(rng, std::uniform_int_distribution<int>(4, 14)(rng));
  }
  return s;
}

Outcome determinism_monotonicity() {
  std::mt19937 rng(77);
  HeuristicJudge judge{JudgeConfig{}};
  int nondeterministic = 0, lowered = 0, raised = 0;
  for (int i = 0; i < 100; ++i) {
    Nugget n;
    n.id = "n1";
    n.text = dt::random_sentence(rng, std::uniform_int_distribution<int>(4, 12)(rng));
    n.citations = {CitationSpan{1, 1, 1, 1}};
    const auto summary = random_summary(rng, std::uniform_int_distribution<int>(1, 10)(rng));
    if (!(judge.align_nugget(n, summary) == judge.align_nugget(n, summary))) ++nondeterministic;
  }
  for (int i = 0; i < 100; ++i) {
    Nugget n;
    n.id = "n1";
    n.text = dt::random_sentence(rng, std::uniform_int_distribution<int>(4, 12)(rng));
    n.citations = {CitationSpan{1, 1, 1, 1}};
    const auto summary = random_summary(rng, std::uniform_int_distribution<int>(1, 10)(rng));
    const int before = judge.align_nugget(n, summary).score;
    const int after = judge.align_nugget(n, summary + " " + n.text).score;
    if (after < before) ++lowered;
    if (after > before) ++raised;
  }
  std::ostringstream d;
  d << nondeterministic << " nondeterministic, " << lowered << " lowered, " << raised << " raised";
  return {nondeterministic == 0 && lowered == 0, d.str()};
}

Outcome life_insurance_fixture() {
  const auto fixture = parse_document(read_file(dt::samples_dir() / "life-insurance-citation.json"));
  const auto t = parse_transcript(read_file(dt::samples_dir() / fixture["transcript"].get<std::string>()),
                                  TranscriptFormat::PageMarked);
  const auto cited = resolve_span(t, parse_span_ref(fixture["ref"].get<std::string>()));
  HeuristicJudge judge{JudgeConfig{}};
  const auto v = judge.verify_citation(fixture["claim"].get<std::string>(), cited);
  const bool ok = v.accurate && v.covered && !v.sufficient;
  std::ostringstream d;
  d << "accurate=" << v.accurate << " covered=" << v.covered << " sufficient=" << v.sufficient;
  return {ok, d.str()};
}

Outcome golden_pipeline() {
  dt::TempDir cli_dir, service_dir;
  const auto files = dt::run_cli_pipeline(cli_dir);
  int differing = 0;
  std::string names;
  for (const auto& [name, content] : files) {
    if (content != read_file(dt::golden_dir() / name)) {
      ++differing;
      names += " " + name;
    }
  }
  const std::map<std::string, std::string> by_name(files.begin(), files.end());
  int disagreeing = 0;
  for (const auto& [name, content] : dt::run_service_pipeline(service_dir)) {
    if (content != by_name.at(name)) {
      ++disagreeing;
      names += " service:" + name;
    }
  }
  return {differing == 0 && disagreeing == 0,
          std::to_string(files.size()) + " files, " + std::to_string(differing) + " differ from golden, " +
              std::to_string(disagreeing) + " differ between CLI and service" + names};
}

Outcome scale() {
  const auto raw = dt::generate_deposition(150, 25, 150);
  const auto t = parse_transcript(raw, TranscriptFormat::PageMarked);
  auto judge = dt::heuristic_judge();
  const auto bank = judge->extract_nuggets(t).bank;
  std::mt19937 rng(50);
  const auto summary = random_summary(rng, 50);
  const auto aligned = kernels::align_bank(*judge, bank, summary);
  const bool ok = t.total_lines() == 3750 && !bank.nuggets.empty() && aligned.size() == bank.nuggets.size();
  return {ok, std::to_string(t.total_lines()) + " lines, " + std::to_string(bank.nuggets.size()) +
                  " nuggets, 50 sentences"};
}

// Everything a ready session exposes must satisfy the object invariants.
std::string session_invariant_problem(const Json& session, const Transcript& t) {
  const auto bank = bank_from_json(session["bank"]);
  if (!validate_bank(bank, t).empty()) return "invalid bank";
  for (std::size_t i = 0; i < session["summaries"].size(); ++i) {
    const auto size = session["summaries"][i]["text"].get<std::string>().size();
    const auto map = alignment_map_from_json(session["alignments"][i]);
    if (map.size() != bank.nuggets.size()) return "incomplete alignments";
    for (const auto& [id, a] : map) check_alignment_invariants(a, size);
  }
  const auto report = comparison_from_json(session["report"]);
  if (auto v = dt::partition_violation(bank, report)) return *v;
  return {};
}

Outcome remote_robustness() {
  const auto raw = read_file(dt::samples_dir() / "holloway-deposition.txt");
  const auto t = parse_transcript(raw, TranscriptFormat::PageMarked);
  const auto summary_a = read_file(dt::samples_dir() / "summary-a.txt");
  const auto summary_b = read_file(dt::samples_dir() / "summary-b.txt");

  struct Scenario {
    const char* name;
    dt::StubEndpoint::Handler handler;
    const char* expected;
  };
  const std::vector<Scenario> scenarios = {
      {"valid", [](const std::string& task, const Json& req, int) { return dt::valid_stub_reply(task, req); },
       "ready"},
      {"malformed-once",
       [](const std::string& task, const Json& req, int attempt) {
         if (attempt == 0) return dt::StubReply{200, "{\"nuggets\": \"not a list\"}"};
         return dt::valid_stub_reply(task, req);
       },
       "ready"},
      {"persistent-failure", [](const std::string&, const Json&, int) { return dt::StubReply{500, ""}; },
       "failed"},
  };

  std::string detail;
  bool ok = true;
  for (const auto& sc : scenarios) {
    dt::StubEndpoint stub(sc.handler);
    dt::TempDir dir;
    Service svc({dir.path(), dt::stub_judge_config(stub.url())});
    auto up = svc.handle({"POST", "/api/transcripts", {}, Json{{"text", raw}, {"format", "pagemarked"}}.dump()});
    const auto tid = Json::parse(up.body)["transcript_id"].get<std::string>();
    auto created = svc.handle({"POST", "/api/sessions", {},
                               Json{{"kind", "comparison"}, {"transcript_id", tid},
                                    {"summaries", {summary_a, summary_b}}}
                                   .dump()});
    const auto sid = Json::parse(created.body)["session_id"].get<std::string>();
    svc.wait_idle();
    const auto session = Json::parse(svc.handle({"GET", "/api/sessions/" + sid, {}, ""}).body);
    const auto state = session["status"]["state"].get<std::string>();
    std::string problem;
    if (state != sc.expected) {
      problem = "state " + state;
    } else if (state == "ready") {
      problem = session_invariant_problem(session, t);
    } else if (!session["report"].is_null() || session["status"]["message"].get<std::string>().empty()) {
      problem = "failed session leaked a report or lacks a message";
    }
    if (!problem.empty()) ok = false;
    detail += std::string(detail.empty() ? "" : ", ") + sc.name + "=" + state +
              (problem.empty() ? "" : " (" + problem + ")");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  report("partition", 5.0, partition);
  report("span-oracle", 10.0, span_oracle);
  report("determinism-monotonicity", 0, determinism_monotonicity);
  report("life-insurance-citation", 0, life_insurance_fixture);
  report("golden-pipeline", 30.0, golden_pipeline);
  report("scale-150-pages", 60.0, scale);
  report("remote-robustness", 0, remote_robustness);
  return failures == 0 ? 0 : 1;
}
