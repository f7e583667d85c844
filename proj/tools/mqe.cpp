// Command-line front end: classify, analyze, catalogue validate.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <regex>

#include "mqe/catalogue.hpp"
#include "mqe/pipeline.hpp"

#ifndef MQE_DEFAULT_CATALOGUE
#define MQE_DEFAULT_CATALOGUE "data/catalogue.json"
#endif

namespace {

constexpr int kValidationFailure = 2;
constexpr int kCatalogueFailure = 3;

std::pair<int, int> parse_range(const std::string& s) {
  static const std::regex re(R"(^\s*(-?\d+)\s*(?:\.\.\s*(-?\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) mqe::fail(mqe::ErrorCode::ParseError, "expected INT or INT..INT, got '" + s + "'");
  int lo = std::stoi(m[1]);
  int hi = m[2].matched ? std::stoi(m[2]) : lo;
  return {lo, hi};
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) mqe::fail(mqe::ErrorCode::IOError, "cannot write " + path);
  f << text;
}

mqe::Catalogue load(const std::string& path) {
  try {
    return mqe::load_catalogue(path);
  } catch (const mqe::Error& e) {
    mqe::fail(mqe::ErrorCode::CatalogueError, e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classification of mixed quasi-etale surfaces"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "search all families with the given invariants");
  int pg = 0, q = 0;
  std::string k2 = "1", cat_path = MQE_DEFAULT_CATALOGUE, out_path, format = "tsv", skip_path;
  std::size_t max_order = mqe::kDefaultOrderCap, g0_order = 0;
  unsigned jobs = 1;
  bool oracle = false;
  classify->add_option("--pg", pg, "geometric genus")->required();
  classify->add_option("--q", q, "irregularity")->required();
  classify->add_option("--k2", k2, "K^2 value or range lo..hi")->required();
  classify->add_option("--catalogue", cat_path, "group catalogue JSON");
  classify->add_option("--max-order", max_order, "skip branches with |G| above this");
  classify->add_option("--g0-order", g0_order, "only branches with this |G0|");
  classify->add_option("--jobs", jobs, "worker threads");
  classify->add_flag("--oracle-check", oracle, "cross-check every candidate with the brute-force oracle");
  classify->add_option("--out", out_path, "output file (default stdout)");
  classify->add_option("--format", format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  classify->add_option("--skip-report", skip_path, "write the skip report (TSV) here");

  auto* analyze = app.add_subcommand("analyze", "analyze one explicit candidate");
  std::string input, an_format = "tsv", an_cat;
  bool an_oracle = false;
  analyze->add_option("--input", input, "candidate JSON")->required();
  analyze->add_option("--format", an_format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  analyze->add_option("--catalogue", an_cat, "catalogue used to label G0 and G");
  analyze->add_flag("--oracle-check", an_oracle, "cross-check with the brute-force oracle");

  auto* cat_cmd = app.add_subcommand("catalogue", "catalogue maintenance");
  cat_cmd->require_subcommand(1);
  auto* validate = cat_cmd->add_subcommand("validate", "load and validate a catalogue");
  std::string val_path;
  validate->add_option("path", val_path, "catalogue JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify) {
      mqe::SearchConfig cfg;
      cfg.pg = pg;
      cfg.q = q;
      std::tie(cfg.k2_min, cfg.k2_max) = parse_range(k2);
      cfg.max_order = max_order;
      cfg.jobs = jobs;
      cfg.oracle_check = oracle;
      if (g0_order) cfg.g0_order = g0_order;
      mqe::Catalogue cat = load(cat_path);
      auto res = mqe::run_search(cfg, cat);
      if (format == "json") {
        write_out(out_path, mqe::to_json(res.records, res.skips).dump(2) + "\n");
      } else {
        write_out(out_path, mqe::to_tsv(res.records));
      }
      if (!skip_path.empty()) write_out(skip_path, mqe::skips_to_tsv(res.skips));
      std::cerr << res.records.size() << " families, " << res.skips.size() << " skipped branches, "
                << res.stats.candidates << " candidates";
      if (oracle) std::cerr << ", " << res.stats.oracle_checks << " oracle checks";
      std::cerr << "\n";
    } else if (*analyze) {
      std::ifstream f(input);
      if (!f) mqe::fail(mqe::ErrorCode::IOError, "cannot read " + input);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(f);
      } catch (const nlohmann::json::exception& e) {
        mqe::fail(mqe::ErrorCode::ParseError, e.what());
      }
      std::optional<mqe::Catalogue> cat;
      if (!an_cat.empty()) cat = load(an_cat);
      auto res = mqe::analyze(doc, cat ? &*cat : nullptr, an_oracle);
      if (an_format == "json") {
        std::cout << mqe::to_json(res.record).dump(2) << "\n";
      } else {
        std::cout << mqe::to_tsv({res.record});
      }
    } else if (*validate) {
      mqe::Catalogue cat = load(val_path);
      std::size_t n = 0;
      for (const auto& [order, list] : cat.entries()) n += list.size();
      std::cout << "ok: " << n << " groups, " << cat.complete_orders().size() << " complete orders\n";
    }
  } catch (const mqe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == mqe::ErrorCode::CatalogueError ? kCatalogueFailure : kValidationFailure;
  }
  return 0;
}
