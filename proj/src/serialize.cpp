#include "depocheck/serialize.hpp"

#include "depocheck/error.hpp"

namespace depocheck {

namespace {

template <class F>
auto guarded(std::string_view what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, "invalid " + std::string(what) + ": " + e.what());
  }
}

Json range_json(const TextRange& r) { return Json::array({r.begin, r.end}); }

TextRange range_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::MalformedInput, "range must be [begin, end]");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

Importance importance_from(const Json& j) {
  auto parsed = importance_from_name(j.get<std::string>());
  if (!parsed) throw Error(ErrorCode::MalformedInput, "unknown importance " + j.dump());
  return *parsed;
}

SuggestionKind suggestion_from(const Json& j) {
  const auto name = j.get<std::string>();
  for (auto k : {SuggestionKind::AddCitation, SuggestionKind::FixCitation, SuggestionKind::ExpandClaim}) {
    if (suggestion_kind_name(k) == name) return k;
  }
  throw Error(ErrorCode::MalformedInput, "unknown suggestion kind " + j.dump());
}

std::vector<std::string> strings_from(const Json& j) { return j.get<std::vector<std::string>>(); }

}  // namespace

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse_document(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedInput, "document is not valid JSON");
  return doc;
}

Json to_json(const NuggetBank& bank) {
  Json nuggets = Json::array();
  for (const auto& n : bank.nuggets) {
    Json citations = Json::array();
    for (const auto& c : n.citations) citations.push_back(format_span_ref(c));
    nuggets.push_back({{"id", n.id},
                       {"text", n.text},
                       {"citations", citations},
                       {"importance", importance_name(n.importance)}});
  }
  return {{"transcript_id", bank.transcript_id}, {"nuggets", nuggets}};
}

NuggetBank bank_from_json(const Json& doc) {
  return guarded("nugget bank", [&] {
    NuggetBank bank;
    bank.transcript_id = doc.at("transcript_id").get<std::string>();
    for (const auto& item : doc.at("nuggets")) {
      Nugget n;
      n.id = item.at("id").get<std::string>();
      n.text = item.at("text").get<std::string>();
      for (const auto& ref : item.at("citations")) {
        try {
          n.citations.push_back(parse_span_ref(ref.get<std::string>()));
        } catch (const Error& e) {
          throw Error(ErrorCode::MalformedInput, "nugget " + n.id + ": " + e.what());
        }
      }
      n.importance = item.contains("importance") ? importance_from(item["importance"])
                                                 : Importance::Unlabeled;
      bank.nuggets.push_back(std::move(n));
    }
    return bank;
  });
}

Json to_json(const AlignmentResult& r) {
  return {{"nugget_id", r.nugget_id},
          {"score", r.score},
          {"segment", r.matched_segment ? range_json(*r.matched_segment) : Json(nullptr)},
          {"explanation", r.explanation},
          {"absent", r.absent}};
}

AlignmentResult alignment_from_json(const Json& doc) {
  return guarded("alignment", [&] {
    AlignmentResult r;
    r.nugget_id = doc.at("nugget_id").get<std::string>();
    r.score = doc.at("score").get<int>();
    if (r.score < 0 || r.score > 2) throw Error(ErrorCode::MalformedInput, "score out of range");
    if (!doc.at("segment").is_null()) r.matched_segment = range_from(doc["segment"]);
    r.explanation = doc.at("explanation").get<std::string>();
    r.absent = strings_from(doc.at("absent"));
    return r;
  });
}

Json to_json(const AlignmentMap& map) {
  Json out = Json::object();
  for (const auto& [id, r] : map) out[id] = to_json(r);
  return out;
}

AlignmentMap alignment_map_from_json(const Json& doc) {
  return guarded("alignment map", [&] {
    AlignmentMap out;
    for (const auto& [id, item] : doc.items()) {
      auto r = alignment_from_json(item);
      if (r.nugget_id != id) throw Error(ErrorCode::MalformedInput, "alignment key " + id + " mismatches its nugget_id");
      out.emplace(id, std::move(r));
    }
    return out;
  });
}

Json to_json(const CitationVerdict& v) {
  return {{"accurate", v.accurate},
          {"covered", v.covered},
          {"sufficient", v.sufficient},
          {"rationale", v.rationale}};
}

CitationVerdict verdict_from_json(const Json& doc) {
  return guarded("citation verdict", [&] {
    return CitationVerdict{doc.at("accurate").get<bool>(), doc.at("covered").get<bool>(),
                           doc.at("sufficient").get<bool>(), doc.at("rationale").get<std::string>()};
  });
}

Json to_json(const VerdictMap& verdicts) {
  Json out = Json::object();
  for (const auto& [segment, list] : verdicts) {
    Json items = Json::array();
    for (const auto& v : list) items.push_back(to_json(v));
    out[std::to_string(segment)] = items;
  }
  return out;
}

VerdictMap verdict_map_from_json(const Json& doc) {
  return guarded("verdict map", [&] {
    VerdictMap out;
    for (const auto& [key, items] : doc.items()) {
      std::size_t index = std::stoul(key);
      for (const auto& v : items) out[index].push_back(verdict_from_json(v));
    }
    return out;
  });
}

Json to_json(const ComparisonReport& r) {
  const auto& s = r.stats;
  return {{"matched", r.matched},
          {"unique_a", r.unique_a},
          {"unique_b", r.unique_b},
          {"missing", r.missing},
          {"alignments_a", to_json(r.alignments_a)},
          {"alignments_b", to_json(r.alignments_b)},
          {"stats",
           {{"total", s.total},
            {"matched", s.matched},
            {"unique_a", s.unique_a},
            {"unique_b", s.unique_b},
            {"missing", s.missing},
            {"coverage_a", s.coverage_a},
            {"coverage_b", s.coverage_b},
            {"coverage_formula", kCoverageFormula}}}};
}

ComparisonReport comparison_from_json(const Json& doc) {
  return guarded("comparison report", [&] {
    ComparisonReport r;
    r.matched = strings_from(doc.at("matched"));
    r.unique_a = strings_from(doc.at("unique_a"));
    r.unique_b = strings_from(doc.at("unique_b"));
    r.missing = strings_from(doc.at("missing"));
    r.alignments_a = alignment_map_from_json(doc.at("alignments_a"));
    r.alignments_b = alignment_map_from_json(doc.at("alignments_b"));
    const auto& s = doc.at("stats");
    r.stats.total = s.at("total").get<std::size_t>();
    r.stats.matched = s.at("matched").get<std::size_t>();
    r.stats.unique_a = s.at("unique_a").get<std::size_t>();
    r.stats.unique_b = s.at("unique_b").get<std::size_t>();
    r.stats.missing = s.at("missing").get<std::size_t>();
    r.stats.coverage_a = s.at("coverage_a").get<double>();
    r.stats.coverage_b = s.at("coverage_b").get<double>();
    return r;
  });
}

Json to_json(const RefinementReport& r) {
  Json omissions = Json::array();
  for (const auto& o : r.omissions) {
    omissions.push_back({{"nugget_id", o.nugget_id},
                         {"score", o.score},
                         {"importance", importance_name(o.importance)},
                         {"explanation", o.explanation}});
  }
  Json flagged = Json::array();
  for (const auto& f : r.flagged_segments) {
    flagged.push_back({{"segment_index", f.segment_index},
                       {"range", range_json(f.range)},
                       {"ref", f.ref},
                       {"bad_ref", f.bad_ref},
                       {"verdict", to_json(f.verdict)},
                       {"suggestion_kind", suggestion_kind_name(f.kind)},
                       {"suggestion", f.suggestion}});
  }
  Json discrepancies = Json::array();
  for (const auto& d : r.discrepancies) {
    discrepancies.push_back({{"segment_index", d.segment_index},
                             {"range", range_json(d.range)},
                             {"nugget_id", d.nugget_id},
                             {"note", d.note}});
  }
  return {{"summary_id", r.summary_id},
          {"omissions", omissions},
          {"flagged_segments", flagged},
          {"discrepancies", discrepancies}};
}

RefinementReport refinement_from_json(const Json& doc) {
  return guarded("refinement report", [&] {
    RefinementReport r;
    r.summary_id = doc.at("summary_id").get<std::string>();
    for (const auto& o : doc.at("omissions")) {
      r.omissions.push_back({o.at("nugget_id").get<std::string>(), o.at("score").get<int>(),
                             importance_from(o.at("importance")), o.at("explanation").get<std::string>()});
    }
    for (const auto& f : doc.at("flagged_segments")) {
      FlaggedSegment flag;
      flag.segment_index = f.at("segment_index").get<std::size_t>();
      flag.range = range_from(f.at("range"));
      flag.ref = f.at("ref").get<std::string>();
      flag.bad_ref = f.at("bad_ref").get<bool>();
      flag.verdict = verdict_from_json(f.at("verdict"));
      flag.kind = suggestion_from(f.at("suggestion_kind"));
      flag.suggestion = f.at("suggestion").get<std::string>();
      r.flagged_segments.push_back(std::move(flag));
    }
    for (const auto& d : doc.at("discrepancies")) {
      r.discrepancies.push_back({d.at("segment_index").get<std::size_t>(), range_from(d.at("range")),
                                 d.at("nugget_id").get<std::string>(), d.at("note").get<std::string>()});
    }
    return r;
  });
}

Json to_json(const ValidationIssue& issue) {
  Json out = {{"kind", issue_kind_name(issue.kind)}, {"nugget_id", issue.nugget_id}};
  if (issue.span) out["span"] = format_span_ref(*issue.span);
  return out;
}

Json to_json(const Transcript& t) {
  Json pages = Json::array();
  for (const auto& p : t.pages) {
    Json lines = Json::array();
    for (const auto& l : p.lines) {
      lines.push_back({{"number", l.number}, {"turn", turn_name(l.turn)}, {"text", l.text}});
    }
    pages.push_back({{"number", p.number}, {"lines", lines}});
  }
  Json out = {{"id", t.id}, {"total_lines", t.total_lines()}, {"pages", pages}};
  out["title"] = t.title ? Json(*t.title) : Json(nullptr);
  out["deponent"] = t.deponent ? Json(*t.deponent) : Json(nullptr);
  return out;
}

Json alignment_file(const std::string& transcript_id, const std::string& summary_id,
                    const AlignmentMap& alignments) {
  return {{"transcript_id", transcript_id},
          {"summary_id", summary_id},
          {"alignments", to_json(alignments)}};
}

AlignmentMap alignments_from_file(const Json& doc) {
  return guarded("alignment file", [&] { return alignment_map_from_json(doc.at("alignments")); });
}

}  // namespace depocheck
