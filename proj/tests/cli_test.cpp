#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "cli.hpp"
#include "qutrit/report.hpp"

namespace qutrit {
namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "qutrit_tp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> csv_pairs(const std::string& csv) {
  std::map<std::string, std::string> m;
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    m[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return m;
}

TEST(Json, RunReportRoundTrips) {
  for (const auto& r : {run_monte_carlo(UnknownQutrit(0.6, Complex(0, 0.8), 0.0), ChannelKind::NU, CorrectionMode::kraus_probabilistic, 500, 3),
                        run_monte_carlo(HaarRandom{}, ChannelKind::U, CorrectionMode::unitary_paper, 100, 4)}) {
    const json j = json::parse(to_json(r).dump());
    EXPECT_EQ(run_report_from_json(j), r);
    EXPECT_EQ(j["schema_version"], report_schema_version);
  }
}

TEST(Json, AuditTableVerifyRoundTrip) {
  for (const auto kind : all_channels) {
    const AuditReport a = make_audit_report(kind);
    EXPECT_EQ(audit_report_from_json(json::parse(to_json(a).dump())), a);
  }
  const auto rows = table1();
  EXPECT_EQ(table_from_json(json::parse(table_to_json(rows).dump())), rows);
  const VerifyReport v = run_verification();
  EXPECT_EQ(verify_report_from_json(json::parse(to_json(v).dump())), v);
}

TEST(Csv, MatchesJsonToFullPrecision) {
  const auto r = run_monte_carlo(UnknownQutrit(1.0, 0.0, 0.0), ChannelKind::NU, CorrectionMode::kraus_probabilistic, 777, 9);
  const json j = to_json(r);
  const auto m = csv_pairs(to_csv(r));
  for (std::size_t k = 0; k < 9; ++k) {
    EXPECT_EQ(std::stod(m.at("frequencies[" + std::to_string(k) + "]")), j["frequencies"][k].get<double>());
    EXPECT_EQ(std::stod(m.at("closed_form[" + std::to_string(k) + "]")), j["closed_form"][k].get<double>());
  }
  EXPECT_EQ(std::stod(m.at("mean_fidelity")), j["mean_fidelity"].get<double>());
  EXPECT_EQ(std::stod(m.at("success_rate")), j["success_rate"].get<double>());
  EXPECT_EQ(std::stod(m.at("post_selected_fidelity")), j["post_selected_fidelity"].get<double>());
}

TEST(ParseComplex, Forms) {
  EXPECT_EQ(cli::parse_complex("0.5"), Complex(0.5, 0.0));
  EXPECT_EQ(cli::parse_complex("0.8i"), Complex(0.0, 0.8));
  EXPECT_EQ(cli::parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(cli::parse_complex("0.5+0.5i"), Complex(0.5, 0.5));
  EXPECT_EQ(cli::parse_complex("1e-1-2e-1i"), Complex(0.1, -0.2));
  EXPECT_EQ(cli::parse_complex(" 0.3 - 0.4i "), Complex(0.3, -0.4));
  EXPECT_THROW(cli::parse_complex("abc"), cli::usage_error);
  EXPECT_THROW(cli::parse_complex("1+2"), cli::usage_error);
  EXPECT_THROW(cli::parse_complex(""), cli::usage_error);
}

TEST(Cli, VerifyPassesByDefault) {
  const auto r = run_cli({"verify"});
  EXPECT_EQ(r.status, cli::exit_ok) << r.err;
  EXPECT_NE(r.out.find("all 50 checks passed"), std::string::npos);
  const auto j = json::parse(run_cli({"verify", "--format", "json"}).out);
  int leslie = 0;
  for (const auto& c : j["checks"])
    if (c["name"].get<std::string>().rfind("leslie.orthonormal", 0) == 0 && c["passed"].get<bool>()) ++leslie;
  EXPECT_EQ(leslie, 9);
}

TEST(Cli, VerifyUnitaryRetrievalBlock) {
  const auto j = json::parse(run_cli({"verify", "--channel", "u", "--format", "json"}).out);
  int retrieval = 0;
  for (const auto& c : j["checks"]) {
    const auto name = c["name"].get<std::string>();
    EXPECT_EQ(name.find(".nu."), std::string::npos);
    if (name.rfind("retrieval.u.printed", 0) == 0 && c["passed"].get<bool>()) ++retrieval;
  }
  EXPECT_EQ(retrieval, 9);
}

TEST(Cli, CorruptedOperatorFailsVerification) {
  const auto r = run_cli({"verify", "--corrupt", "4"});
  EXPECT_EQ(r.status, cli::exit_failed);
  EXPECT_NE(r.err.find("retrieval.u.printed[4]"), std::string::npos);
}

TEST(Cli, AuditReportsFindingsWithExitZero) {
  const auto u = run_cli({"audit", "--channel", "u", "--format", "json"});
  EXPECT_EQ(u.status, cli::exit_ok);
  for (const auto& e : json::parse(u.out)["entries"]) EXPECT_TRUE(e["holds_exactly"].get<bool>());

  const auto nu = run_cli({"audit", "--channel", "nu", "--format", "json"});
  EXPECT_EQ(nu.status, cli::exit_ok);
  const json j = json::parse(nu.out);
  EXPECT_TRUE(j["entries"][0]["holds_exactly"].get<bool>());
  EXPECT_FALSE(j["entries"][1]["holds_proportionally"].get<bool>());
  EXPECT_GT(j["entries"][1]["proportional_residual"].get<double>(), 0.1);
}

TEST(Cli, AuditJsonFollowsSchema) {
  const json j = json::parse(run_cli({"audit", "--channel", "nu", "--format", "json"}).out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["report"], "audit");
  EXPECT_EQ(j["probe_set"], probe_set_version);
  for (const char* key : {"prefactor_projected", "prefactor_printed_decomposition", "prefactor_printed_retrieval"}) EXPECT_TRUE(j[key].is_number());
  ASSERT_EQ(j["entries"].size(), 9u);
  for (const auto& e : j["entries"]) {
    for (const char* key : {"holds_exactly", "holds_proportionally"}) EXPECT_TRUE(e[key].is_boolean());
    for (const char* key : {"exact_residual", "proportional_residual", "c_spread", "state_diff", "operator_diff", "operator_diff_aligned"})
      EXPECT_TRUE(e[key].is_number()) << key;
    EXPECT_TRUE(e["best_fit_c"].is_array() && e["best_fit_c"].size() == 2);
    EXPECT_TRUE(e["synthesized"].is_object());
    EXPECT_TRUE(e["against_printed_state"].is_object());
  }
  ASSERT_EQ(j["printed_operators"].size(), 9u);
  ASSERT_EQ(j["synthesized_operators"].size(), 9u);
  EXPECT_EQ(j["printed_operators"][0].size(), 3u);
  EXPECT_EQ(j["reexpressions"].size(), 9u);
}

TEST(Cli, RunUnitaryExample) {
  const auto r = run_cli({"run", "--channel", "u", "--mode", "unitary-paper", "--trials", "90000", "--seed", "7", "--state", "1,0,0", "--format", "json"});
  ASSERT_EQ(r.status, cli::exit_ok) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["mean_fidelity"].get<double>(), 1.0, 1e-12);
  for (const auto& f : j["frequencies"]) EXPECT_NEAR(f.get<double>(), 1.0 / 9.0, 0.01);
  EXPECT_TRUE(j["post_selected_fidelity"].is_null());
  for (const char* key : {"channel", "mode", "trials", "seed", "frequencies", "closed_form", "mean_fidelity", "post_selected_fidelity", "success_rate"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, RunKrausExample) {
  const auto r = run_cli({"run", "--channel", "nu", "--mode", "kraus", "--trials", "90000", "--seed", "7", "--state", "0.577,0.577,0.577", "--format", "json"});
  ASSERT_EQ(r.status, cli::exit_ok) << r.err;
  EXPECT_NE(r.err.find("normalizing"), std::string::npos);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["post_selected_fidelity"].get<double>(), 1.0, 1e-12);
  const double expected = j["closed_form_success_rate"].get<double>();
  EXPECT_NEAR(expected, 0.5, 1e-10);
  EXPECT_NEAR(j["success_rate"].get<double>(), expected, 0.01);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({"run", "--channel", "nu", "--mode", "unitary-paper", "--state", "1,0,0"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "bogus", "--state", "1,0,0"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "rescale"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "rescale", "--state", "0,0,0"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "rescale", "--state", "1,0"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "rescale", "--state", "1,0,0", "--random"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"run", "--channel", "u", "--mode", "rescale", "--random", "--trials", "0"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"dump", "everything"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"table", "--format", "xml"}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({}).status, cli::exit_usage);
  EXPECT_EQ(run_cli({"--help"}).status, cli::exit_ok);
}

TEST(Cli, RunIsByteIdenticalAcrossInvocationsAndThreads) {
  const auto dir = std::filesystem::temp_directory_path() / "qutrit_tp_cli_test";
  std::filesystem::create_directories(dir);
  for (const std::string format : {"json", "csv", "text"}) {
    const auto a = dir / ("a." + format), b = dir / ("b." + format), c = dir / ("c." + format);
    const std::vector<std::string> base{"run", "--channel", "nu", "--mode", "kraus", "--random", "--trials", "3000", "--seed", "11", "--format", format};
    auto with = [&](std::vector<std::string> extra) {
      auto args = base;
      args.insert(args.end(), extra.begin(), extra.end());
      return args;
    };
    ASSERT_EQ(run_cli(with({"--out", a.string()})).status, 0);
    ASSERT_EQ(run_cli(with({"--out", b.string()})).status, 0);
    ASSERT_EQ(run_cli(with({"--out", c.string(), "--threads", "4"})).status, 0);
    EXPECT_FALSE(slurp(a).empty());
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(a), slurp(c));
  }
  std::filesystem::remove_all(dir);
}

TEST(Cli, TableOutputs) {
  const auto text = run_cli({"table"});
  EXPECT_EQ(text.status, 0);
  EXPECT_NE(text.out.find("1.5849625"), std::string::npos);
  EXPECT_NE(text.out.find("1.2516291"), std::string::npos);
  EXPECT_EQ(text.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(text.out.find("\033["), std::string::npos);  // not a terminal: no color
  const json j = json::parse(run_cli({"table", "--format", "json"}).out);
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_TRUE(j["rows"][1]["entropy_pass"].get<bool>());
  EXPECT_TRUE(j["rows"][1]["fidelity_pass"].get<bool>());
  EXPECT_NEAR(j["rows"][1]["fidelity_from_negativity"].get<double>(), 11.0 / 12.0, 1e-9);
}

TEST(Cli, DumpSelectors) {
  const json basis = json::parse(run_cli({"dump", "basis", "--format", "json"}).out);
  ASSERT_EQ(basis["items"].size(), 9u);
  for (const auto& it : basis["items"]) EXPECT_EQ(it["amplitudes"].size(), 9u);

  const json channels = json::parse(run_cli({"dump", "channels", "--format", "json"}).out);
  ASSERT_EQ(channels["items"].size(), 2u);
  EXPECT_NEAR(channels["items"][1]["amplitudes"][0][0].get<double>(), -2.0 / std::sqrt(6.0), 1e-15);

  const json ops = json::parse(run_cli({"dump", "operators", "--channel", "nu", "--provenance", "synthesized", "--format", "json"}).out);
  ASSERT_EQ(ops["items"].size(), 9u);
  EXPECT_EQ(ops["provenance"], "synthesized");
  for (const auto& it : ops["items"]) {
    Operator o(3);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) o(r, c) = complex_from_json(it["matrix"][r][c]);
    EXPECT_TRUE(is_monomial(o));
  }
  const auto csv = run_cli({"dump", "basis", "--format", "csv"});
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 1 + 81);
}

}  // namespace
}  // namespace qutrit
