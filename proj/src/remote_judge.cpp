#include "depocheck/remote_judge.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "depocheck/error.hpp"
#include "depocheck/json_schema.hpp"
#include "depocheck/kernels.hpp"
#include "depocheck/resources.hpp"
#include "httplib.h"
#include "text_util.hpp"

namespace depocheck {

using nlohmann::json;

namespace {

constexpr std::string_view kChatPath = "/chat/completions";

std::string fill(std::string_view tmpl, std::string_view key, std::string_view value) {
  std::string out(tmpl);
  const std::string marker = "{{" + std::string(key) + "}}";
  for (auto pos = out.find(marker); pos != std::string::npos;
       pos = out.find(marker, pos + value.size())) {
    out.replace(pos, marker.size(), value);
  }
  return out;
}

const json& schema_for(std::string_view task) {
  static const json kExtract = json::parse(resource("schemas/extract-v1.json"));
  static const json kAlign = json::parse(resource("schemas/align-v1.json"));
  static const json kVerify = json::parse(resource("schemas/verify-v1.json"));
  if (task == "extract") return kExtract;
  if (task == "align") return kAlign;
  return kVerify;
}

// Models sometimes wrap JSON in a markdown fence despite instructions.
std::string_view strip_fence(std::string_view content) {
  auto s = detail::trim(content);
  if (s.substr(0, 3) != "```") return s;
  auto nl = s.find('\n');
  if (nl == std::string_view::npos) return s;
  s.remove_prefix(nl + 1);
  s = detail::trim(s);
  if (s.size() >= 3 && s.substr(s.size() - 3) == "```") s.remove_suffix(3);
  return detail::trim(s);
}

struct Reply {
  std::string raw;
  json value;
  std::optional<std::string> error;
};

Reply interpret(const std::string& body, const json& schema) {
  Reply reply;
  json envelope = json::parse(body, nullptr, false);
  if (envelope.is_discarded()) {
    reply.error = "response body is not JSON";
    return reply;
  }
  const json content = envelope.contains("choices") && envelope["choices"].is_array() &&
                               !envelope["choices"].empty() && envelope["choices"][0].is_object()
                           ? envelope["choices"][0].value("message", json::object()).value("content", json())
                           : json();
  if (!content.is_string()) {
    reply.error = "response has no choices[0].message.content string";
    return reply;
  }
  reply.raw = content.get<std::string>();
  reply.value = json::parse(strip_fence(reply.raw), nullptr, false);
  if (reply.value.is_discarded()) {
    reply.error = "message content is not a JSON document";
    return reply;
  }
  reply.error = validate_json_schema(schema, reply.value);
  return reply;
}

std::string format_excerpt(const Transcript& t, const TranscriptChunk& chunk) {
  std::string out;
  for (const auto& a : chunk.lines) {
    const Line* line = t.find_line(a);
    out += format_span_ref({a.page, a.line, a.page, a.line});
    out += "  ";
    out += line->text;
    out += '\n';
  }
  return out;
}

std::string format_sentences(std::string_view summary) {
  std::string out;
  auto sentences = segment_sentences(summary);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& r = sentences[i];
    out += std::to_string(i + 1) + ". [" + std::to_string(r.begin) + ", " + std::to_string(r.end) +
           ") " + std::string(summary.substr(r.begin, r.size())) + "\n";
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : detail::trim(s)) {
    if (detail::is_space(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::vector<TranscriptChunk> chunk_transcript(const Transcript& t, int pages_per_chunk,
                                              int overlap_lines) {
  std::vector<TranscriptChunk> chunks;
  std::vector<LineAddress> previous;
  const auto group = static_cast<std::size_t>(std::max(pages_per_chunk, 1));
  for (std::size_t first = 0; first < t.pages.size(); first += group) {
    TranscriptChunk chunk;
    const auto overlap = std::min(previous.size(), static_cast<std::size_t>(std::max(overlap_lines, 0)));
    chunk.lines.assign(previous.end() - static_cast<std::ptrdiff_t>(overlap), previous.end());
    previous.clear();
    for (std::size_t p = first; p < std::min(first + group, t.pages.size()); ++p) {
      for (const auto& line : t.pages[p].lines) {
        chunk.lines.push_back({t.pages[p].number, line.number});
        previous.push_back({t.pages[p].number, line.number});
      }
    }
    chunks.push_back(std::move(chunk));
  }
  return chunks;
}

RemoteJudge::RemoteJudge(JudgeConfig config)
    : config_(std::move(config)), limiter_(std::make_unique<InflightLimiter>(config_.max_inflight)) {
  config_.validate();
  std::string url = *config_.endpoint_url;
  auto scheme = url.find("://");
  auto slash = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  base_url_ = url.substr(0, slash);
  path_ = slash == std::string::npos ? "" : url.substr(slash);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  if (path_.size() < kChatPath.size() ||
      path_.compare(path_.size() - kChatPath.size(), kChatPath.size(), kChatPath) != 0) {
    path_ += kChatPath;
  }
}

std::string RemoteJudge::post_with_retries(const json& request) const {
  const std::string body = request.dump();
  httplib::Headers headers;
  if (config_.api_key) headers.emplace("Authorization", "Bearer " + *config_.api_key);
  std::string last_error;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          static_cast<long long>(config_.backoff_ms) << (attempt - 1)));
    }
    httplib::Result result{nullptr, httplib::Error::Unknown};
    limiter_->acquire();
    try {
      httplib::Client client(base_url_);
      client.set_connection_timeout(10);
      client.set_read_timeout(config_.timeout_seconds);
      client.set_write_timeout(config_.timeout_seconds);
      result = client.Post(path_, headers, body, "application/json");
    } catch (...) {
      limiter_->release();
      throw;
    }
    limiter_->release();

    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status == 429 || result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200) {
      throw Error(ErrorCode::JudgeUnavailable,
                  "judge endpoint answered HTTP " + std::to_string(result->status) + ": " +
                      result->body.substr(0, 200));
    }
    return result->body;
  }
  throw Error(ErrorCode::JudgeUnavailable, "judge endpoint unavailable after " +
                                               std::to_string(config_.retries + 1) +
                                               " attempts (" + last_error + ")");
}

json RemoteJudge::complete(std::string_view task, const std::string& prompt,
                           const ReplyCheck& check) const {
  const json& schema = schema_for(task);
  json messages = json::array({
      {{"role", "system"}, {"content", std::string(resource("prompts/system-v1.txt"))}},
      {{"role", "user"}, {"content", prompt}},
  });
  std::string error;
  for (int round = 0; round < 2; ++round) {
    json request = {
        {"model", config_.model_name.value_or("default")},
        {"temperature", 0},
        {"messages", messages},
        {"response_format",
         {{"type", "json_schema"},
          {"json_schema", {{"name", std::string(task)}, {"strict", true}, {"schema", schema}}}}},
    };
    Reply reply = interpret(post_with_retries(request), schema);
    if (!reply.error) reply.error = check(reply.value);
    if (!reply.error) return reply.value;
    error = *reply.error;
    messages.push_back({{"role", "assistant"}, {"content", reply.raw}});
    messages.push_back(
        {{"role", "user"},
         {"content", "Your previous reply was rejected (" + error +
                         "). Reply again with only a JSON object that matches the schema."}});
  }
  throw Error(ErrorCode::MalformedJudgeResponse,
              std::string(task) + " reply still invalid after one repair attempt: " + error);
}

ExtractionResult RemoteJudge::extract_nuggets(const Transcript& t) const {
  const auto chunks = chunk_transcript(t);
  std::vector<std::vector<Nugget>> found(chunks.size());
  std::vector<std::vector<std::string>> warnings(chunks.size());
  const std::string tmpl(resource("prompts/extract-v1.txt"));

  kernels::parallel_for(
      chunks.size(),
      [&](std::size_t c) {
        json reply = complete("extract", fill(tmpl, "excerpt", format_excerpt(t, chunks[c])),
                              [](const json&) { return std::nullopt; });
        for (const auto& item : reply["nuggets"]) {
          Nugget n;
          n.text = collapse_whitespace(item["text"].get<std::string>());
          if (n.text.empty()) {
            warnings[c].push_back("chunk " + std::to_string(c + 1) + ": dropped nugget with empty text");
            continue;
          }
          for (const auto& ref : item["citations"]) {
            const auto raw = ref.get<std::string>();
            try {
              auto span = parse_span_ref(raw);
              if (!span_resolves(t, span)) {
                throw Error(ErrorCode::SpanOutOfRange, "span does not exist in the transcript");
              }
              n.citations.push_back(span);
            } catch (const Error& e) {
              warnings[c].push_back("chunk " + std::to_string(c + 1) + ": dropped citation '" +
                                    raw + "' of \"" + n.text + "\": " + e.what());
            }
          }
          if (n.citations.empty()) {
            warnings[c].push_back("chunk " + std::to_string(c + 1) + ": dropped \"" + n.text +
                                  "\": no resolvable citation");
            continue;
          }
          found[c].push_back(std::move(n));
        }
      },
      config_.max_inflight);

  ExtractionResult out;
  out.bank.transcript_id = t.id;
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    for (auto& n : found[c]) {
      n.id = nugget_id_for(out.bank.nuggets.size() + 1);
      out.bank.nuggets.push_back(std::move(n));
    }
    for (auto& w : warnings[c]) out.warnings.push_back(std::move(w));
  }
  sort_by_position(out.bank);
  out.bank = dedupe_bank(out.bank);
  sort_by_position(out.bank);
  for (std::size_t i = 0; i < out.bank.nuggets.size(); ++i) {
    out.bank.nuggets[i].id = nugget_id_for(i + 1);
  }
  return out;
}

AlignmentResult RemoteJudge::align_nugget(const Nugget& nugget, std::string_view summary) const {
  const auto size = static_cast<long long>(summary.size());
  auto clamp = [&](const json& v) { return std::clamp(v.get<long long>(), 0LL, size); };
  auto check = [&](const json& reply) -> std::optional<std::string> {
    if (reply["score"].get<int>() == 0) return std::nullopt;
    if (reply["segment_start"].is_null() || reply["segment_end"].is_null()) {
      return "score >= 1 requires segment_start and segment_end";
    }
    if (clamp(reply["segment_start"]) >= clamp(reply["segment_end"])) {
      return "segment must be a non-empty range within the summary (0.." + std::to_string(size) + ")";
    }
    return std::nullopt;
  };

  std::string prompt = fill(resource("prompts/align-v1.txt"), "nugget", nugget.text);
  prompt = fill(prompt, "sentences", format_sentences(summary));
  json reply = complete("align", prompt, check);

  AlignmentResult result;
  result.nugget_id = nugget.id;
  result.score = reply["score"].get<int>();
  result.explanation = reply["explanation"].get<std::string>();
  for (const auto& part : reply["absent_parts"]) result.absent.push_back(part.get<std::string>());
  if (result.score >= 1) {
    result.matched_segment = TextRange{static_cast<std::size_t>(clamp(reply["segment_start"])),
                                       static_cast<std::size_t>(clamp(reply["segment_end"]))};
  }
  check_alignment_invariants(result, summary.size());
  return result;
}

CitationVerdict RemoteJudge::verify_citation(std::string_view claim,
                                             std::string_view cited_span) const {
  std::string prompt = fill(resource("prompts/verify-v1.txt"), "claim", claim);
  prompt = fill(prompt, "span", cited_span);
  json reply = complete("verify", prompt, [](const json&) { return std::nullopt; });
  CitationVerdict v;
  v.accurate = reply["accurate"].get<bool>();
  v.covered = reply["covered"].get<bool>();
  v.sufficient = reply["sufficient"].get<bool>();
  v.rationale = reply["rationale"].get<std::string>();
  return v;
}

}  // namespace depocheck
