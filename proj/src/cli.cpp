#include "depocheck/cli.hpp"

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "depocheck/analysis.hpp"
#include "depocheck/error.hpp"
#include "depocheck/io.hpp"
#include "depocheck/kernels.hpp"
#include "depocheck/pipeline.hpp"
#include "depocheck/serialize.hpp"
#include "depocheck/service.hpp"

namespace depocheck {

namespace {

struct Options {
  std::string judge;
  std::optional<double> full_threshold;
  std::optional<double> partial_threshold;
  std::optional<double> coverage_threshold;
  std::optional<double> sufficiency_threshold;
  std::string output;

  std::string input;
  std::string parse_format = "pagemarked";
  std::string format = "normalized";
  bool allow_page_gaps = false;
  std::string bank;
  std::string summary;
  std::string align_a;
  std::string align_b;
  std::string alignments;
  std::string transcript;
  std::string ref;
  std::string claim;

  std::string addr = "127.0.0.1:8080";
  std::string data_dir = "depocheck-data";
  std::string static_dir;
};

JudgeConfig judge_config(const Options& o) {
  JudgeConfig cfg = JudgeConfig::from_env();
  if (!o.judge.empty()) {
    auto kind = judge_kind_from_name(o.judge);
    if (!kind) throw Error(ErrorCode::InvalidConfig, "--judge must be heuristic or remote");
    cfg.kind = *kind;
  }
  if (o.full_threshold) cfg.thresholds.full = *o.full_threshold;
  if (o.partial_threshold) cfg.thresholds.partial = *o.partial_threshold;
  if (o.coverage_threshold) cfg.thresholds.coverage = *o.coverage_threshold;
  if (o.sufficiency_threshold) cfg.thresholds.sufficiency = *o.sufficiency_threshold;
  cfg.validate();
  return cfg;
}

Transcript load_transcript(const std::string& path, const std::string& format_name,
                           bool allow_gaps = false) {
  auto format = transcript_format_from_name(format_name);
  if (!format) throw Error(ErrorCode::MalformedInput, "--format must be pagemarked or normalized");
  ParseOptions options;
  options.allow_page_gaps = allow_gaps;
  return parse_transcript(read_file(path), *format, options);
}

NuggetBank load_bank(const std::string& path) { return bank_from_json(parse_document(read_file(path))); }

void emit(const Options& o, std::ostream& out, const std::string& content) {
  if (o.output.empty() || o.output == "-") {
    out << content;
  } else {
    atomic_write_file(o.output, content);
  }
}

int serve(const Options& o, std::ostream& out) {
  auto colon = o.addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--addr must be host:port");
  const std::string host = o.addr.substr(0, colon);
  const int port = std::stoi(o.addr.substr(colon + 1));
  Service service({o.data_dir, judge_config(o)});
  std::optional<std::filesystem::path> static_dir;
  if (!o.static_dir.empty()) static_dir = o.static_dir;
  HttpServer server(service, static_dir);
  const int bound = server.bind(host, port);
  if (bound < 0) throw Error(ErrorCode::StoreUnavailable, "cannot bind " + o.addr);
  out << "depocheck serving on http://" << host << ":" << bound << "\n" << std::flush;
  return server.listen() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Nugget-based verification of transcript summaries", "depocheck"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--judge", o.judge, "heuristic or remote (default: NB_JUDGE or heuristic)");
  app.add_option("--full-threshold", o.full_threshold, "coverage for score 2 (default 0.8)");
  app.add_option("--partial-threshold", o.partial_threshold, "coverage for score 1 (default 0.4)");
  app.add_option("--coverage-threshold", o.coverage_threshold, "citation coverage for covered (default 0.5)");
  app.add_option("--sufficiency-threshold", o.sufficiency_threshold,
                 "citation coverage for sufficient (default 0.9)");
  app.add_option("-o,--output", o.output, "output file (default: standard output)");

  auto* parse = app.add_subcommand("parse", "Parse a transcript into the normalized format");
  parse->add_option("input", o.input)->required()->check(CLI::ExistingFile);
  parse->add_option("--format", o.parse_format, "pagemarked or normalized")->capture_default_str();
  parse->add_flag("--allow-page-gaps", o.allow_page_gaps, "accept skipped page numbers");

  auto* extract = app.add_subcommand("extract", "Extract a nugget bank from a transcript");
  extract->add_option("transcript", o.transcript)->required()->check(CLI::ExistingFile);
  extract->add_option("--format", o.format, "pagemarked or normalized")->capture_default_str();

  auto* align = app.add_subcommand("align", "Align every nugget of a bank against a summary");
  align->add_option("bank", o.bank)->required()->check(CLI::ExistingFile);
  align->add_option("summary", o.summary)->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Judge whether a transcript span supports a claim");
  verify->add_option("transcript", o.transcript)->required()->check(CLI::ExistingFile);
  verify->add_option("ref", o.ref, "span ref, P:L-P:L")->required();
  verify->add_option("claim", o.claim)->required();
  verify->add_option("--format", o.format, "pagemarked or normalized")->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Compare two summaries' alignments");
  compare->add_option("bank", o.bank)->required()->check(CLI::ExistingFile);
  compare->add_option("alignments_a", o.align_a)->required()->check(CLI::ExistingFile);
  compare->add_option("alignments_b", o.align_b)->required()->check(CLI::ExistingFile);

  auto* refine = app.add_subcommand("refine", "Build the refinement report for one summary");
  refine->add_option("bank", o.bank)->required()->check(CLI::ExistingFile);
  refine->add_option("summary", o.summary)->required()->check(CLI::ExistingFile);
  refine->add_option("alignments", o.alignments)->required()->check(CLI::ExistingFile);
  refine->add_option("-t,--transcript", o.transcript, "normalized transcript the citations refer to")
      ->required()
      ->check(CLI::ExistingFile);

  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--addr", o.addr, "host:port")->capture_default_str();
  serve_cmd->add_option("--data-dir", o.data_dir, "session store directory")->capture_default_str();
  serve_cmd->add_option("--static-dir", o.static_dir, "UI bundle served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "depocheck: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*parse) {
      emit(o, out, serialize_normalized(load_transcript(o.input, o.parse_format, o.allow_page_gaps)));
    } else if (*extract) {
      auto judge = make_judge(judge_config(o));
      auto result = judge->extract_nuggets(load_transcript(o.transcript, o.format));
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      emit(o, out, dump_document(to_json(result.bank)));
    } else if (*align) {
      auto judge = make_judge(judge_config(o));
      const auto bank = load_bank(o.bank);
      const auto text = read_file(o.summary);
      auto map = kernels::align_bank(*judge, bank, text);
      emit(o, out, dump_document(alignment_file(bank.transcript_id, summary_id_for(text), map)));
    } else if (*verify) {
      auto judge = make_judge(judge_config(o));
      const auto t = load_transcript(o.transcript, o.format);
      const auto span_text = resolve_span(t, parse_span_ref(o.ref));
      emit(o, out, dump_document(to_json(judge->verify_citation(o.claim, span_text))));
    } else if (*compare) {
      const auto bank = load_bank(o.bank);
      auto a = alignments_from_file(parse_document(read_file(o.align_a)));
      auto b = alignments_from_file(parse_document(read_file(o.align_b)));
      emit(o, out, dump_document(to_json(compare_summaries(bank, a, b))));
    } else if (*refine) {
      auto judge = make_judge(judge_config(o));
      const auto bank = load_bank(o.bank);
      const auto t = load_transcript(o.transcript, "normalized");
      if (bank.transcript_id != t.id) {
        throw Error(ErrorCode::TranscriptMismatch,
                    "bank is for transcript " + bank.transcript_id + ", not " + t.id);
      }
      const auto doc = segment_summary(read_file(o.summary));
      auto alignments = alignments_from_file(parse_document(read_file(o.alignments)));
      auto verdicts = verify_summary_citations(*judge, t, doc);
      emit(o, out, dump_document(to_json(build_refinement_report(doc, bank, alignments, verdicts))));
    } else if (*serve_cmd) {
      return serve(o, out);
    }
  } catch (const Error& e) {
    err << "depocheck: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::JudgeUnavailable ? 2 : 1;
  } catch (const std::exception& e) {
    err << "depocheck: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace depocheck
