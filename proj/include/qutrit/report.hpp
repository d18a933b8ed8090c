// JSON and CSV encodings of the report types. Complex numbers are [re, im]
// pairs; every JSON report carries "schema_version". See docs/schemas.md.
#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qutrit/audit.hpp"
#include "qutrit/metrics.hpp"
#include "qutrit/protocol.hpp"
#include "qutrit/verify.hpp"

namespace qutrit {

using nlohmann::json;

/// %.17g: enough digits for any double to round-trip through text.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json ket_to_json(const Ket& k) {
  json a = json::array();
  for (const auto& z : k.amplitudes()) a.push_back(complex_to_json(z));
  return a;
}

inline json operator_to_json(const Operator& o) {
  json rows = json::array();
  for (std::size_t r = 0; r < o.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < o.dim(); ++c) row.push_back(complex_to_json(o(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Operator operator_from_json(const json& j) {
  const std::size_t n = j.size();
  Operator o(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (j[r].size() != n) throw std::invalid_argument("operator rows must be square");
    for (std::size_t c = 0; c < n; ++c) o(r, c) = complex_from_json(j[r][c]);
  }
  return o;
}

template <std::size_t N>
json reals_to_json(const std::array<double, N>& a) {
  return json(std::vector<double>(a.begin(), a.end()));
}

template <std::size_t N>
std::array<double, N> reals_from_json(const json& j) {
  if (j.size() != N) throw std::invalid_argument("array has the wrong length");
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = j[i].get<double>();
  return a;
}

inline json null_or(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
inline std::optional<double> optional_double(const json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

// ---- RunReport ----

inline json to_json(const RunReport& r) {
  json state = nullptr;
  if (r.state) state = json::array({complex_to_json((*r.state)[0]), complex_to_json((*r.state)[1]), complex_to_json((*r.state)[2])});
  return {
      {"schema_version", report_schema_version},
      {"report", "run"},
      {"channel", to_string(r.channel)},
      {"mode", to_string(r.mode)},
      {"trials", r.trials},
      {"seed", r.seed},
      {"state", state},
      {"frequencies", reals_to_json(r.frequencies)},
      {"closed_form", r.closed_form ? reals_to_json(*r.closed_form) : json(nullptr)},
      {"mean_fidelity", r.mean_fidelity},
      {"post_selected_fidelity", null_or(r.post_selected_fidelity)},
      {"success_rate", r.success_rate},
      {"closed_form_success_rate", null_or(r.closed_form_success_rate)},
      {"note", r.mode == CorrectionMode::unitary_paper ? "printed unitary corrections"
                                                        : "non-unitary correction model is an implementation choice"},
  };
}

inline RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.channel = parse_channel(j.at("channel").get<std::string>());
  r.mode = parse_mode(j.at("mode").get<std::string>());
  r.trials = j.at("trials").get<std::uint64_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("state").is_null()) {
    const auto& s = j["state"];
    r.state = std::array<Complex, 3>{complex_from_json(s[0]), complex_from_json(s[1]), complex_from_json(s[2])};
  }
  r.frequencies = reals_from_json<9>(j.at("frequencies"));
  if (!j.at("closed_form").is_null()) r.closed_form = reals_from_json<9>(j["closed_form"]);
  r.mean_fidelity = j.at("mean_fidelity").get<double>();
  r.post_selected_fidelity = optional_double(j.at("post_selected_fidelity"));
  r.success_rate = j.at("success_rate").get<double>();
  r.closed_form_success_rate = optional_double(j.at("closed_form_success_rate"));
  return r;
}

/// Two-column key,value CSV; arrays expand to key[i].
inline std::string to_csv(const RunReport& r) {
  std::ostringstream os;
  os << "key,value\n";
  os << "schema_version," << report_schema_version << '\n';
  os << "channel," << to_string(r.channel) << '\n';
  os << "mode," << to_string(r.mode) << '\n';
  os << "trials," << r.trials << '\n';
  os << "seed," << r.seed << '\n';
  for (std::size_t k = 0; k < 9; ++k) os << "frequencies[" << k << "]," << format_double(r.frequencies[k]) << '\n';
  if (r.closed_form)
    for (std::size_t k = 0; k < 9; ++k) os << "closed_form[" << k << "]," << format_double((*r.closed_form)[k]) << '\n';
  os << "mean_fidelity," << format_double(r.mean_fidelity) << '\n';
  if (r.post_selected_fidelity) os << "post_selected_fidelity," << format_double(*r.post_selected_fidelity) << '\n';
  os << "success_rate," << format_double(r.success_rate) << '\n';
  if (r.closed_form_success_rate) os << "closed_form_success_rate," << format_double(*r.closed_form_success_rate) << '\n';
  return os.str();
}

// ---- AuditReport ----

inline json to_json(const RetrievalCheck& c) {
  return {{"holds_exactly", c.holds_exactly},
          {"holds_proportionally", c.holds_proportionally},
          {"exact_residual", c.exact_residual},
          {"proportional_residual", c.proportional_residual},
          {"best_fit_c", complex_to_json(c.best_fit_c)},
          {"c_spread", c.c_spread}};
}

inline RetrievalCheck retrieval_check_from_json(const json& j) {
  RetrievalCheck c;
  c.holds_exactly = j.at("holds_exactly").get<bool>();
  c.holds_proportionally = j.at("holds_proportionally").get<bool>();
  c.exact_residual = j.at("exact_residual").get<double>();
  c.proportional_residual = j.at("proportional_residual").get<double>();
  c.best_fit_c = complex_from_json(j.at("best_fit_c"));
  c.c_spread = j.at("c_spread").get<double>();
  return c;
}

inline json to_json(const AuditEntry& e) {
  return {{"outcome", e.outcome},
          {"holds_exactly", e.holds_exactly},
          {"holds_proportionally", e.holds_proportionally},
          {"exact_residual", e.exact_residual},
          {"proportional_residual", e.proportional_residual},
          {"best_fit_c", complex_to_json(e.best_fit_c)},
          {"c_spread", e.c_spread},
          {"against_printed_state", to_json(e.against_printed_state)},
          {"synthesized", to_json(e.synthesized)},
          {"state_diff", e.state_diff},
          {"operator_diff", e.operator_diff},
          {"operator_diff_aligned", e.operator_diff_aligned}};
}

inline AuditEntry audit_entry_from_json(const json& j) {
  AuditEntry e;
  e.outcome = j.at("outcome").get<int>();
  e.holds_exactly = j.at("holds_exactly").get<bool>();
  e.holds_proportionally = j.at("holds_proportionally").get<bool>();
  e.exact_residual = j.at("exact_residual").get<double>();
  e.proportional_residual = j.at("proportional_residual").get<double>();
  e.best_fit_c = complex_from_json(j.at("best_fit_c"));
  e.c_spread = j.at("c_spread").get<double>();
  e.against_printed_state = retrieval_check_from_json(j.at("against_printed_state"));
  e.synthesized = retrieval_check_from_json(j.at("synthesized"));
  e.state_diff = j.at("state_diff").get<double>();
  e.operator_diff = j.at("operator_diff").get<double>();
  e.operator_diff_aligned = j.at("operator_diff_aligned").get<double>();
  return e;
}

inline json to_json(const AuditReport& r) {
  json entries = json::array(), printed = json::array(), synth = json::array(), reex = json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  for (const auto& o : r.printed_operators) printed.push_back(operator_to_json(o));
  for (const auto& o : r.synthesized_operators) synth.push_back(operator_to_json(o));
  for (const auto& x : r.reexpressions) reex.push_back({{"b", x.b}, {"c", x.c}, {"matches", x.matches}, {"max_diff", x.max_diff}});
  return {{"schema_version", report_schema_version},
          {"report", "audit"},
          {"channel", to_string(r.channel)},
          {"probe_set", r.probe_set},
          {"prefactor_projected", r.prefactor_projected},
          {"prefactor_printed_decomposition", r.prefactor_printed_decomposition},
          {"prefactor_printed_retrieval", r.prefactor_printed_retrieval},
          {"entries", entries},
          {"printed_operators", printed},
          {"synthesized_operators", synth},
          {"reexpressions", reex}};
}

inline AuditReport audit_report_from_json(const json& j) {
  AuditReport r;
  r.channel = parse_channel(j.at("channel").get<std::string>());
  r.probe_set = j.at("probe_set").get<std::string>();
  r.prefactor_projected = j.at("prefactor_projected").get<double>();
  r.prefactor_printed_decomposition = j.at("prefactor_printed_decomposition").get<double>();
  r.prefactor_printed_retrieval = j.at("prefactor_printed_retrieval").get<double>();
  for (const auto& e : j.at("entries")) r.entries.push_back(audit_entry_from_json(e));
  for (const auto& o : j.at("printed_operators")) r.printed_operators.push_back(operator_from_json(o));
  for (const auto& o : j.at("synthesized_operators")) r.synthesized_operators.push_back(operator_from_json(o));
  for (const auto& x : j.at("reexpressions"))
    r.reexpressions.push_back({x.at("b").get<int>(), x.at("c").get<int>(), x.at("matches").get<bool>(), x.at("max_diff").get<double>()});
  return r;
}

inline std::string to_csv(const AuditReport& r) {
  std::ostringstream os;
  os << "outcome,holds_exactly,holds_proportionally,exact_residual,proportional_residual,best_fit_c_re,best_fit_c_im,"
        "c_spread,printed_state_holds_exactly,printed_state_holds_proportionally,synthesized_holds_proportionally,"
        "synthesized_residual,state_diff,operator_diff,operator_diff_aligned\n";
  for (const auto& e : r.entries)
    os << e.outcome << ',' << e.holds_exactly << ',' << e.holds_proportionally << ',' << format_double(e.exact_residual) << ','
       << format_double(e.proportional_residual) << ',' << format_double(e.best_fit_c.real()) << ','
       << format_double(e.best_fit_c.imag()) << ',' << format_double(e.c_spread) << ',' << e.against_printed_state.holds_exactly
       << ',' << e.against_printed_state.holds_proportionally << ',' << e.synthesized.holds_proportionally << ','
       << format_double(e.synthesized.proportional_residual) << ',' << format_double(e.state_diff) << ','
       << format_double(e.operator_diff) << ',' << format_double(e.operator_diff_aligned) << '\n';
  return os.str();
}

// ---- Table ----

inline json to_json(const ChannelReport& c) {
  return {{"channel", to_string(c.kind)},
          {"entropy_bits", c.entropy_bits},
          {"negativity", c.negativity},
          {"fidelity_from_negativity", c.fidelity_from_negativity},
          {"schmidt_coefficients", reals_to_json(c.schmidt_coefficients)},
          {"printed_entropy", c.printed_entropy},
          {"printed_fidelity", c.printed_fidelity},
          {"entropy_pass", std::abs(c.entropy_bits - c.printed_entropy) <= table_tolerance::entropy},
          {"fidelity_pass", std::abs(c.fidelity_from_negativity - c.printed_fidelity) <= table_tolerance::fidelity_printed}};
}

inline ChannelReport channel_report_from_json(const json& j) {
  ChannelReport c;
  c.kind = parse_channel(j.at("channel").get<std::string>());
  c.entropy_bits = j.at("entropy_bits").get<double>();
  c.negativity = j.at("negativity").get<double>();
  c.fidelity_from_negativity = j.at("fidelity_from_negativity").get<double>();
  c.schmidt_coefficients = reals_from_json<3>(j.at("schmidt_coefficients"));
  c.printed_entropy = j.at("printed_entropy").get<double>();
  c.printed_fidelity = j.at("printed_fidelity").get<double>();
  return c;
}

inline json table_to_json(const std::vector<ChannelReport>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return {{"schema_version", report_schema_version},
          {"report", "table"},
          {"fidelity_label", "negativity-based benchmark (1+N)/2"},
          {"entropy_tolerance", table_tolerance::entropy},
          {"printed_fidelity_tolerance", table_tolerance::fidelity_printed},
          {"rows", a}};
}

inline std::vector<ChannelReport> table_from_json(const json& j) {
  std::vector<ChannelReport> rows;
  for (const auto& r : j.at("rows")) rows.push_back(channel_report_from_json(r));
  return rows;
}

inline std::string table_to_csv(const std::vector<ChannelReport>& rows) {
  std::ostringstream os;
  os << "channel,entropy_bits,printed_entropy,negativity,fidelity_from_negativity,printed_fidelity,schmidt_0,schmidt_1,schmidt_2\n";
  for (const auto& c : rows)
    os << to_string(c.kind) << ',' << format_double(c.entropy_bits) << ',' << format_double(c.printed_entropy) << ','
       << format_double(c.negativity) << ',' << format_double(c.fidelity_from_negativity) << ','
       << format_double(c.printed_fidelity) << ',' << format_double(c.schmidt_coefficients[0]) << ','
       << format_double(c.schmidt_coefficients[1]) << ',' << format_double(c.schmidt_coefficients[2]) << '\n';
  return os.str();
}

// ---- VerifyReport ----

inline json to_json(const VerifyReport& v) {
  json checks = json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"tolerance", c.tolerance}});
  return {{"schema_version", report_schema_version}, {"report", "verify"}, {"passed", v.passed()}, {"checks", checks}};
}

inline VerifyReport verify_report_from_json(const json& j) {
  VerifyReport v;
  for (const auto& c : j.at("checks"))
    v.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("residual").get<double>(),
                        c.at("tolerance").get<double>()});
  return v;
}

inline std::string to_csv(const VerifyReport& v) {
  std::ostringstream os;
  os << "name,passed,residual,tolerance\n";
  for (const auto& c : v.checks) os << c.name << ',' << c.passed << ',' << format_double(c.residual) << ',' << format_double(c.tolerance) << '\n';
  return os.str();
}

}  // namespace qutrit
