// Copyright 2026 The Harmonkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// harmonkit command-line interface.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "harmonkit/assessment.hpp"
#include "harmonkit/io.hpp"
#include "harmonkit/json_codec.hpp"
#include "harmonkit/schema_matching.hpp"
#include "harmonkit/server/http.hpp"
#include "harmonkit/server/mcp.hpp"
#include "harmonkit/server/remote.hpp"
#include "harmonkit/spec.hpp"
#include "harmonkit/value_matching.hpp"
#include "harmonkit/version.hpp"

namespace hk = harmonkit;
using hk::Json;

namespace {

struct Options {
  std::string source;
  std::string target;
  std::string matcher = std::string(hk::matchers::kEnsemble);
  std::string method = "auto";
  std::size_t k = 5;
  std::uint64_t seed = 42;
  std::string output;
  std::string format = "table";
  bool legacy_spec = false;

  std::string attribute;
  std::string target_attribute;
  std::vector<std::string> sets;
  std::string null_like_to;
  double threshold = 0.15;
  double floor = 0.05;
  std::string matches_file;
  std::vector<std::string> value_files;
  bool auto_values = false;
  std::string spec_file;
  std::string unmapped = "keep_original";
  double fraction = 0.3;
  std::string base_out;
  std::string holdout_out;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string persist;
  std::string reasoner_url;
};

class Table {
 public:
  explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string render() const {
    std::vector<std::size_t> width(rows_.front().size(), 0);
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      for (std::size_t c = 0; c < rows_[r].size(); ++c) {
        out << (c ? "  " : "");
        if (c + 1 < rows_[r].size()) {
          out << std::left << std::setw(static_cast<int>(width[c])) << rows_[r][c];
        } else {
          out << rows_[r][c];
        }
      }
      out << "\n";
      if (r == 0) {
        for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "  " : "") << std::string(width[c], '-');
        out << "\n";
      }
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

std::string score_text(double score) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << score;
  return out.str();
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opt.output, std::ios::binary | std::ios::trunc);
  if (!file) throw hk::Error(hk::ErrorCode::kIoError, "cannot write '" + opt.output + "'");
  file << text;
}

// Writes canonical JSON in json mode, the table otherwise.
void emit(const Options& opt, const Json& json, const std::string& table) {
  emit(opt, opt.format == "json" ? hk::dump_canonical(json) : table);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hk::Error(hk::ErrorCode::kIoError, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw hk::Error(hk::ErrorCode::kParseError, path + ": " + e.what());
  }
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw hk::Error(hk::ErrorCode::kInvalidArgument, std::string(flag) + " is required");
}

hk::Dataset load_source(const Options& opt) {
  require(opt.source, "--source");
  return hk::read_csv(opt.source);
}

hk::MatchTarget load_target(const Options& opt) {
  require(opt.target, "--target");
  if (opt.target.rfind("model:", 0) == 0) return hk::load_target_model(opt.target.substr(6));
  const std::filesystem::path path(opt.target);
  if (path.extension() == ".json") return hk::parse_target_model(read_text(opt.target));
  return hk::read_csv(path);
}

hk::SchemaMatchSet load_or_match(const Options& opt, const hk::Dataset& source, const hk::MatchTarget& target) {
  if (!opt.matches_file.empty()) return read_json(opt.matches_file).get<hk::SchemaMatchSet>();
  return hk::match_schema(source, target, opt.matcher, hk::SchemaMatchOptions{opt.floor});
}

std::string matches_table(const hk::SchemaMatchSet& matches, bool with_reason) {
  std::vector<std::string> header = {"source", "target", "score", "matcher", "status"};
  if (with_reason) header.push_back("reason");
  Table t(header);
  for (const auto& e : matches.entries()) {
    std::vector<std::string> row = {e.candidate.source_attribute, e.candidate.target_attribute,
                                    score_text(e.candidate.score), e.candidate.matcher_id,
                                    std::string(hk::match_status_name(e.status))};
    if (with_reason) row.push_back(e.reason.value_or(""));
    t.add(std::move(row));
  }
  return t.render();
}

std::string values_table(const hk::ValueMatchSet& set) {
  std::ostringstream out;
  out << set.source_attribute << " -> " << set.target_attribute << "\n";
  if (set.transform) {
    out << "transform: y = " << hk::format_number(set.transform->a) << " * x + "
        << hk::format_number(set.transform->b) << " (r2 " << score_text(set.transform->r2) << ")\n";
  }
  Table t({"source value", "target value", "score", "origin"});
  for (const auto& m : set.matches) {
    t.add({m.source_value, m.target_value, score_text(m.score), std::string(hk::value_origin_name(m.origin))});
  }
  out << t.render();
  const auto unmatched = set.unmatched();
  if (!unmatched.empty()) {
    out << "unmatched:";
    for (const auto& v : unmatched) out << " \"" << v << "\"";
    out << "\n";
  }
  return out.str();
}

void cmd_match_schema(const Options& opt) {
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  const auto matches = hk::match_schema(source, target, opt.matcher, hk::SchemaMatchOptions{opt.floor});
  emit(opt, Json(matches), matches_table(matches, false));
}

void cmd_rank(const Options& opt) {
  require(opt.attribute, "--attribute");
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  const auto ranked = hk::rank_schema_matches(source, target, opt.attribute, opt.k, opt.matcher);
  Table t({"rank", "target", "score"});
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    t.add({std::to_string(i + 1), ranked[i].target_attribute, score_text(ranked[i].score)});
  }
  emit(opt, Json(ranked), t.render());
}

void cmd_preview_domain(const Options& opt) {
  require(opt.attribute, "--attribute");
  const hk::DomainPreview p = hk::preview_domain(load_target(opt), opt.attribute);
  std::ostringstream out;
  out << "attribute:   " << p.attribute << "\n";
  out << "kind:        " << hk::column_kind_name(p.kind) << "\n";
  if (p.description) out << "description: " << *p.description << "\n";
  if (p.permissible_values) {
    out << "permissible values:\n";
    for (const auto& v : *p.permissible_values) out << "  " << v << "\n";
  }
  if (!p.sample_values.empty()) {
    out << "sample values:\n";
    for (const auto& v : p.sample_values) out << "  " << v << "\n";
  }
  emit(opt, Json(p), out.str());
}

void cmd_match_values(const Options& opt) {
  require(opt.attribute, "--attribute");
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  std::string target_attribute = opt.target_attribute;
  if (target_attribute.empty()) {
    const hk::SchemaMatchSet matches = load_or_match(opt, source, target);
    const hk::SchemaMatchEntry* entry = matches.find(opt.attribute);
    if (entry == nullptr || entry->status == hk::MatchStatus::kRejected) {
      throw hk::Error(hk::ErrorCode::kUnknownAttribute,
                      "no schema match for '" + opt.attribute + "'; pass --target-attribute");
    }
    target_attribute = entry->candidate.target_attribute;
  }
  hk::ValueMatchOptions options;
  options.threshold = opt.threshold;
  hk::ValueMatchSet set = hk::match_values(source.column(opt.attribute), hk::target_view(target, target_attribute),
                                           hk::parse_value_method(opt.method), options);
  for (const std::string& edit : opt.sets) {
    const auto eq = edit.find('=');
    if (eq == std::string::npos) {
      throw hk::Error(hk::ErrorCode::kInvalidArgument, "--set expects SOURCE=TARGET, got '" + edit + "'");
    }
    set = hk::set_value_match(set, edit.substr(0, eq), edit.substr(eq + 1));
  }
  if (!opt.null_like_to.empty()) {
    set = hk::apply_constraint(set, hk::Constraint{hk::NullLikeSelector{}, opt.null_like_to});
  }
  emit(opt, Json(set), values_table(set));
}

std::unique_ptr<hk::Reasoner> assessment_reasoner(const Options& opt) {
  if (opt.reasoner_url.empty()) return std::make_unique<hk::DefaultReasoner>();
  return std::make_unique<hk::server::HttpReasoner>(opt.reasoner_url);
}

void cmd_assess(const Options& opt) {
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  const hk::SchemaMatchSet matches = load_or_match(opt, source, target);
  const auto reasoner = assessment_reasoner(opt);
  const hk::AssessAllResult result = hk::assess_all(matches, source, target, *reasoner);
  Json json = Json::object();
  json["matches"] = result.matches;
  Json assessments = Json::object();
  for (const auto& [attr, a] : result.assessments) assessments[attr] = a;
  json["assessments"] = std::move(assessments);
  emit(opt, json, matches_table(result.matches, true));
}

void cmd_explain(const Options& opt) {
  require(opt.attribute, "--attribute");
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  const hk::SchemaMatchSet matches = load_or_match(opt, source, target);
  const hk::SchemaMatchEntry* entry = matches.find(opt.attribute);
  if (entry == nullptr) throw hk::Error(hk::ErrorCode::kUnknownAttribute, "no schema match for '" + opt.attribute + "'");
  const auto reasoner = assessment_reasoner(opt);
  const hk::Assessment a = hk::assess_match(entry->candidate, source, target, *reasoner);
  const std::string text = hk::explain_match(entry->candidate, a);
  emit(opt, Json{{"assessment", a}, {"text", text}}, text);
}

void cmd_build_spec(const Options& opt) {
  const hk::Dataset source = load_source(opt);
  const hk::MatchTarget target = load_target(opt);
  const hk::SchemaMatchSet matches = load_or_match(opt, source, target);
  std::vector<hk::ValueMatchSet> sets;
  std::set<std::string> covered;
  for (const std::string& file : opt.value_files) {
    sets.push_back(read_json(file).get<hk::ValueMatchSet>());
    covered.insert(sets.back().source_attribute);
  }
  if (opt.auto_values) {
    for (const auto& e : matches.entries()) {
      if (e.status == hk::MatchStatus::kRejected || covered.count(e.candidate.source_attribute)) continue;
      try {
        sets.push_back(hk::match_values(source.column(e.candidate.source_attribute),
                                        hk::target_view(target, e.candidate.target_attribute),
                                        hk::ValueMethod::kAuto));
      } catch (const hk::Error& err) {
        // Pairs without alignable domains keep an identity mapper.
        if (err.code() != hk::ErrorCode::kEmptyDomain && err.code() != hk::ErrorCode::kDegenerateInput &&
            err.code() != hk::ErrorCode::kIncompatibleKinds) {
          throw;
        }
      }
    }
  }
  const hk::HarmonizationSpec spec = hk::build_spec(matches, sets, hk::make_metadata(hk::target_model_name(target)));
  hk::SpecFormat format = hk::SpecFormat::kExtended;
  if (opt.legacy_spec) {
    if (hk::is_legacy_compatible(spec)) {
      format = hk::SpecFormat::kLegacy;
    } else {
      std::cerr << "warning: spec has affine or identity mappers; writing the extended format\n";
    }
  }
  emit(opt, hk::serialize_spec(spec, format));
}

void cmd_apply(const Options& opt) {
  require(opt.spec_file, "--spec");
  const hk::HarmonizationSpec spec = hk::parse_spec(read_text(opt.spec_file));
  const hk::Dataset out = hk::materialize(spec, load_source(opt), hk::parse_unmapped_policy(opt.unmapped));
  emit(opt, hk::format_csv(out));
}

void cmd_split(const Options& opt) {
  require(opt.base_out, "--base-out");
  require(opt.holdout_out, "--holdout-out");
  const hk::Dataset data = load_source(opt);
  const auto [base, holdout] = hk::split_dataset(data, opt.fraction, opt.seed);
  hk::write_csv(base, opt.base_out);
  hk::write_csv(holdout, opt.holdout_out);
  Json json = Json::object();
  json["seed"] = opt.seed;
  json["fraction"] = opt.fraction;
  json["base_rows"] = base.num_rows();
  json["holdout_rows"] = holdout.num_rows();
  json["holdout_indices"] = hk::holdout_rows(data.num_rows(), opt.fraction, opt.seed);
  std::ostringstream table;
  table << "base:    " << base.num_rows() << " rows -> " << opt.base_out << "\n";
  table << "holdout: " << holdout.num_rows() << " rows -> " << opt.holdout_out << "\n";
  emit(opt, json, table.str());
}

void cmd_list_matchers(const Options& opt) {
  Table t({"matcher", "uses values", "kinds"});
  for (const auto& d : hk::list_matchers()) {
    std::string kinds;
    for (const auto k : d.applicable_kinds) kinds += (kinds.empty() ? "" : ",") + std::string(hk::column_kind_name(k));
    t.add({d.matcher_id, d.uses_values ? "yes" : "no", kinds});
  }
  emit(opt, Json(hk::list_matchers()), t.render());
}

std::unique_ptr<hk::Reasoner> make_reasoner(const Options& opt) {
  if (opt.reasoner_url.empty()) return nullptr;
  return std::make_unique<hk::server::HttpReasoner>(opt.reasoner_url);
}

std::optional<std::filesystem::path> persist_dir(const Options& opt) {
  if (opt.persist.empty()) return std::nullopt;
  return std::filesystem::path(opt.persist);
}

void cmd_serve(const Options& opt) {
  hk::server::SessionStore store(persist_dir(opt));
  const auto reasoner = make_reasoner(opt);
  hk::server::Toolbox toolbox(store, reasoner.get());
  if (!hk::server::serve_http(toolbox, opt.host, opt.port)) {
    throw hk::Error(hk::ErrorCode::kIoError,
                    "cannot listen on " + opt.host + ":" + std::to_string(opt.port));
  }
}

void cmd_mcp(const Options& opt) {
  hk::server::SessionStore store(persist_dir(opt));
  const auto reasoner = make_reasoner(opt);
  hk::server::Toolbox toolbox(store, reasoner.get());
  hk::server::McpServer server(toolbox);
  server.serve(std::cin, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schema and value harmonization for tabular data", "harmonkit"};
  app.set_version_flag("--version", std::string(hk::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--source", opt.source, "Source CSV file");
  app.add_option("--target", opt.target, "Target CSV, target model JSON, or model:NAME");
  app.add_option("--matcher", opt.matcher, "Schema matcher id");
  app.add_option("--method", opt.method, "Value matching method")
      ->check(CLI::IsMember({"exact", "levenshtein", "token_jaccard", "embedding", "numeric_affine", "auto"}));
  app.add_option("--k", opt.k, "Number of ranked candidates")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Random seed for split");
  app.add_option("--output,-o", opt.output, "Write output to this file");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_flag("--legacy-spec", opt.legacy_spec, "Write specs as a bare entry list when possible");
  app.add_option("--matches", opt.matches_file, "Schema matches JSON (as printed by match-schema --format json)");
  app.add_option("--reasoner-url", opt.reasoner_url, "External reasoner endpoint");

  auto* match_schema = app.add_subcommand("match-schema", "One-to-one attribute matches");
  match_schema->add_option("--floor", opt.floor, "Minimum score for a match");

  auto* rank = app.add_subcommand("rank", "Top-k target attributes for one source attribute");
  rank->add_option("--attribute", opt.attribute, "Source attribute")->required();

  auto* preview = app.add_subcommand("preview-domain", "Show a target attribute's domain");
  preview->add_option("--attribute", opt.attribute, "Target attribute")->required();

  auto* match_values = app.add_subcommand("match-values", "Align the values of one attribute pair");
  match_values->add_option("--attribute", opt.attribute, "Source attribute")->required();
  match_values->add_option("--target-attribute", opt.target_attribute,
                           "Target attribute (default: the attribute's schema match)");
  match_values->add_option("--threshold", opt.threshold, "Minimum similarity for a match");
  match_values->add_option("--set", opt.sets, "Correct one mapping, SOURCE=TARGET (repeatable)");
  match_values->add_option("--null-like-to", opt.null_like_to, "Map every null-like source value to this value");

  auto* assess = app.add_subcommand("assess", "Validate or correct schema matches");
  auto* explain = app.add_subcommand("explain", "Explain the assessment of one match");
  explain->add_option("--attribute", opt.attribute, "Source attribute")->required();

  auto* build = app.add_subcommand("build-spec", "Write a harmonization specification");
  build->add_option("--values", opt.value_files, "Value matches JSON (repeatable)");
  build->add_flag("--auto-values", opt.auto_values, "Match values automatically for pairs without --values");

  auto* apply = app.add_subcommand("apply", "Apply a specification to a CSV file");
  apply->add_option("--spec", opt.spec_file, "Specification file")->required();
  apply->add_option("--unmapped", opt.unmapped, "Policy for unmapped values")
      ->check(CLI::IsMember({"keep_original", "set_null", "fail"}));

  auto* split = app.add_subcommand("split", "Seeded base/holdout split of a CSV file");
  split->add_option("--fraction", opt.fraction, "Holdout fraction");
  split->add_option("--base-out", opt.base_out, "Base part output CSV")->required();
  split->add_option("--holdout-out", opt.holdout_out, "Holdout part output CSV")->required();

  auto* matchers = app.add_subcommand("matchers", "List schema matchers");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", opt.host, "Bind address");
  serve->add_option("--port", opt.port, "Port");
  serve->add_option("--persist", opt.persist, "Snapshot sessions to this directory");

  auto* mcp = app.add_subcommand("mcp", "Serve the tool protocol on stdin/stdout");
  mcp->add_option("--persist", opt.persist, "Snapshot sessions to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*match_schema) cmd_match_schema(opt);
    else if (*rank) cmd_rank(opt);
    else if (*preview) cmd_preview_domain(opt);
    else if (*match_values) cmd_match_values(opt);
    else if (*assess) cmd_assess(opt);
    else if (*explain) cmd_explain(opt);
    else if (*build) cmd_build_spec(opt);
    else if (*apply) cmd_apply(opt);
    else if (*split) cmd_split(opt);
    else if (*matchers) cmd_list_matchers(opt);
    else if (*serve) cmd_serve(opt);
    else if (*mcp) cmd_mcp(opt);
  } catch (const hk::Error& e) {
    std::cerr << "error: " << hk::error_code_name(e.code()) << ": " << e.what() << "\n";
    return hk::is_validation_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
