// Command-line front end for the qutrit teleportation simulator.
//
// Exit status: 0 success, 1 verification failure, 2 usage error.
#pragma once

#include <iomanip>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "qutrit/report.hpp"

namespace qutrit::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;

struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Parses `re`, `imi`, `re+imi` or `re-imi`; a bare `i` means 1i.
inline Complex parse_complex(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char ch) { return std::isspace(ch); }), text.end());
  auto number = [&](const std::string& s, double unit_default) {
    if (s.empty() || s == "+") return unit_default;
    if (s == "-") return -unit_default;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw usage_error("cannot parse complex number '" + text + "'");
    return v;
  };
  if (text.empty()) throw usage_error("empty complex number");
  if (text.back() != 'i') return {number(text, 0.0), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // The imaginary part starts at the last sign that is not leading and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  if (split == std::string::npos) return {0.0, number(body, 1.0)};
  return {number(body.substr(0, split), 0.0), number(body.substr(split), 1.0)};
}

/// Comma-separated triple; normalized on the way in. Deviations from unit
/// norm beyond 1e-6 are reported on `err`.
inline UnknownQutrit parse_state(const std::string& text, std::ostream& err) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) throw usage_error("--state expects three comma-separated amplitudes");
  const std::array<Complex, 3> c{parse_complex(parts[0]), parse_complex(parts[1]), parse_complex(parts[2])};
  const double n = std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]));
  if (n == 0.0) throw usage_error("--state must not be the zero vector");
  if (std::abs(n - 1.0) > 1e-6) err << "note: --state norm is " << format_double(n) << ", normalizing\n";
  return UnknownQutrit(c, UnknownQutrit::Normalization::automatic);
}

struct Style {
  bool color = false;
  std::string pass() const { return color ? "\033[32mPASS\033[0m" : "PASS"; }
  std::string fail() const { return color ? "\033[31mFAIL\033[0m" : "FAIL"; }
  std::string flag(bool ok) const { return ok ? pass() : fail(); }
};

inline std::string complex_text(Complex z) {
  std::ostringstream os;
  os << format_double(z.real()) << (z.imag() < 0 ? "-" : "+") << format_double(std::abs(z.imag())) << "i";
  return os.str();
}

inline void write_verify_text(std::ostream& os, const VerifyReport& v, const Style& st) {
  for (const auto& c : v.checks)
    os << st.flag(c.passed) << "  " << c.name << "  residual=" << format_double(c.residual) << "  tol=" << format_double(c.tolerance) << '\n';
  os << (v.passed() ? "all " + std::to_string(v.checks.size()) + " checks passed"
                    : std::to_string(v.failures()) + " of " + std::to_string(v.checks.size()) + " checks failed")
     << '\n';
}

inline void write_audit_text(std::ostream& os, const AuditReport& r) {
  os << "audit channel=" << to_string(r.channel) << " probes=" << r.probe_set << '\n';
  os << "prefactor projected=" << format_double(r.prefactor_projected)
     << " printed(decomposition)=" << format_double(r.prefactor_printed_decomposition)
     << " printed(retrieval)=" << format_double(r.prefactor_printed_retrieval) << '\n';
  os << std::left << std::setw(3) << "k" << std::setw(7) << "exact" << std::setw(14) << "proportional" << std::setw(25) << "residual"
     << std::setw(25) << "state_diff" << "synthesized\n";
  for (const auto& e : r.entries)
    os << std::setw(3) << e.outcome << std::setw(7) << (e.holds_exactly ? "yes" : "no") << std::setw(14)
       << (e.holds_proportionally ? "yes" : "no") << std::setw(25) << format_double(e.proportional_residual) << std::setw(25)
       << format_double(e.state_diff) << (e.synthesized.holds_proportionally ? "holds" : "FAILS") << '\n';
  for (const auto& x : r.reexpressions)
    if (!x.matches) os << "re-expression |" << x.b << x.c << "> differs from tabulated form by " << format_double(x.max_diff) << '\n';
}

inline void write_run_text(std::ostream& os, const RunReport& r) {
  os << "channel=" << to_string(r.channel) << " mode=" << to_string(r.mode) << " trials=" << r.trials << " seed=" << r.seed << '\n';
  const int w = r.closed_form ? 25 : 0;
  os << std::left << std::setw(3) << "k" << std::setw(w) << "frequency" << (r.closed_form ? "closed_form" : "") << '\n';
  for (std::size_t k = 0; k < 9; ++k) {
    os << std::setw(3) << k << std::setw(w) << format_double(r.frequencies[k]);
    if (r.closed_form) os << format_double((*r.closed_form)[k]);
    os << '\n';
  }
  os << "mean_fidelity " << format_double(r.mean_fidelity) << '\n';
  if (r.post_selected_fidelity) os << "post_selected_fidelity " << format_double(*r.post_selected_fidelity) << '\n';
  os << "success_rate " << format_double(r.success_rate) << '\n';
  if (r.closed_form_success_rate) os << "closed_form_success_rate " << format_double(*r.closed_form_success_rate) << '\n';
}

inline void write_table_text(std::ostream& os, const std::vector<ChannelReport>& rows, const Style& st) {
  os << std::left << std::setw(9) << "channel" << std::setw(21) << "EoE (bits)" << std::setw(14) << "printed" << std::setw(21)
     << "negativity" << std::setw(21) << "TP (1+N)/2" << "printed\n";
  for (const auto& c : rows) {
    const bool e_ok = std::abs(c.entropy_bits - c.printed_entropy) <= table_tolerance::entropy;
    const bool f_ok = std::abs(c.fidelity_from_negativity - c.printed_fidelity) <= table_tolerance::fidelity_printed;
    os << std::setw(9) << to_string(c.kind) << std::setw(21) << format_double(c.entropy_bits) << std::setw(6) << c.printed_entropy
       << st.flag(e_ok) << "    " << std::setw(21) << format_double(c.negativity) << std::setw(21)
       << format_double(c.fidelity_from_negativity) << std::setw(6) << c.printed_fidelity << st.flag(f_ok) << '\n';
  }
  os << "TP is the negativity-based benchmark; the tabulated 0.9 is 11/12 truncated (tolerance "
     << table_tolerance::fidelity_printed << ")\n";
}

struct DumpItem {
  std::string name;
  std::vector<Complex> values;  // row-major for operators
  std::size_t rows;
};

inline std::vector<DumpItem> dump_items(const std::string& what, ChannelKind kind, Provenance prov) {
  std::vector<DumpItem> items;
  auto ket_item = [](std::string name, const Ket& k) {
    return DumpItem{std::move(name), {k.amplitudes().begin(), k.amplitudes().end()}, 1};
  };
  if (what == "basis") {
    for (int k = 0; k < 9; ++k) items.push_back(ket_item("Psi" + std::to_string(k), leslie_state(k)));
  } else if (what == "channels") {
    for (auto c : all_channels) items.push_back(ket_item("chi_" + to_string(c), channel(c)));
  } else if (what == "operators") {
    for (const auto& c : correction_set(kind, prov)) {
      const std::string prefix = kind == ChannelKind::U ? "U" : "NU";
      items.push_back({prefix + std::to_string(c.outcome), {c.op.entries().begin(), c.op.entries().end()}, 3});
    }
  } else {
    throw usage_error("unknown dump selector '" + what + "' (expected basis, channels or operators)");
  }
  return items;
}

inline json dump_to_json(const std::string& what, const std::vector<DumpItem>& items, std::optional<ChannelKind> kind,
                         std::optional<Provenance> prov) {
  json arr = json::array();
  for (const auto& it : items) {
    json v;
    if (it.rows == 1) {
      v = json::array();
      for (const auto& z : it.values) v.push_back(complex_to_json(z));
      arr.push_back({{"name", it.name}, {"amplitudes", v}});
    } else {
      v = json::array();
      for (std::size_t r = 0; r < it.rows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < it.rows; ++c) row.push_back(complex_to_json(it.values[r * it.rows + c]));
        v.push_back(row);
      }
      arr.push_back({{"name", it.name}, {"matrix", v}});
    }
  }
  json out = {{"schema_version", report_schema_version}, {"report", "dump"}, {"what", what}, {"items", arr}};
  if (kind) out["channel"] = to_string(*kind);
  if (prov) out["provenance"] = to_string(*prov);
  return out;
}

inline bool color_enabled(std::ostream& out) {
  if (std::getenv("NO_COLOR") != nullptr) return false;
  return &out == &std::cout && ::isatty(STDOUT_FILENO);
}

/// Runs the CLI; `out` receives reports unless --out is given, `err` diagnostics.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-qutrit teleportation simulator and verifier", "qutrit_tp"};
  app.require_subcommand(1);

  std::string channel_s = "u", mode_s, format = "text", out_path, state_s, what, provenance_s = "printed";
  std::uint64_t trials = 1, seed = 0;
  unsigned threads = 1;
  bool random_state = false;
  int corrupt = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--out", out_path, "write the report to PATH instead of standard output");
  };
  auto add_channel = [&](CLI::App* sub) {
    return sub->add_option("--channel", channel_s, "u or nu")->check(CLI::IsMember({"u", "nu"}));
  };

  auto* verify = app.add_subcommand("verify", "run the invariant suites; exit 1 on any failure");
  auto* verify_channel = add_channel(verify);
  verify->add_option("--corrupt", corrupt, "test hook: corrupt printed U_k for this outcome")->check(CLI::Range(0, 8))->group("");
  add_common(verify);

  auto* audit = app.add_subcommand("audit", "audit printed correction operators against projections");
  add_channel(audit);
  add_common(audit);

  auto* runc = app.add_subcommand("run", "Monte Carlo teleportation");
  add_channel(runc);
  runc->add_option("--mode", mode_s, "unitary-paper, rescale or kraus")->required();
  runc->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
  runc->add_option("--seed", seed, "64-bit master seed (default 0)");
  runc->add_option("--threads", threads, "worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
  auto* state_opt = runc->add_option("--state", state_s, "a,b,c with each amplitude in re[+imi] form");
  auto* random_opt = runc->add_flag("--random", random_state, "draw a fresh random qutrit per trial");
  state_opt->excludes(random_opt);
  add_common(runc);

  auto* table = app.add_subcommand("table", "entanglement and fidelity of both channels");
  add_common(table);

  auto* dump = app.add_subcommand("dump", "print basis states, channels or correction operators");
  dump->add_option("what", what, "basis, channels or operators")->required();
  add_channel(dump);
  dump->add_option("--provenance", provenance_s, "printed or synthesized")->check(CLI::IsMember({"printed", "synthesized"}));
  add_common(dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return exit_usage;
  }

  std::ostringstream buf;
  const Style style{out_path.empty() && color_enabled(out)};
  int status = exit_ok;
  try {
    const ChannelKind kind = parse_channel(channel_s);
    if (*verify) {
      VerifyOptions opts;
      if (verify_channel->count() > 0) opts.channel = kind;
      if (corrupt >= 0) opts.corrupt_outcome = corrupt;
      const VerifyReport v = run_verification(opts);
      if (format == "json") buf << to_json(v).dump(2) << '\n';
      else if (format == "csv") buf << to_csv(v);
      else write_verify_text(buf, v, style);
      if (!v.passed()) {
        status = exit_failed;
        for (const auto& c : v.checks)
          if (!c.passed) err << "failed: " << c.name << '\n';
      }
    } else if (*audit) {
      const AuditReport r = make_audit_report(kind);
      if (format == "json") buf << to_json(r).dump(2) << '\n';
      else if (format == "csv") buf << to_csv(r);
      else write_audit_text(buf, r);
    } else if (*runc) {
      CorrectionMode mode;
      try {
        mode = parse_mode(mode_s);
        check_compatible(kind, mode);
      } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
      }
      if (!random_state && state_s.empty()) throw usage_error("run needs --state a,b,c or --random");
      const StateSpec spec = random_state ? StateSpec{HaarRandom{}} : StateSpec{parse_state(state_s, err)};
      const RunReport r = run_monte_carlo(spec, kind, mode, trials, seed, threads);
      if (format == "json") buf << to_json(r).dump(2) << '\n';
      else if (format == "csv") buf << to_csv(r);
      else write_run_text(buf, r);
    } else if (*table) {
      const auto rows = table1();
      if (format == "json") buf << table_to_json(rows).dump(2) << '\n';
      else if (format == "csv") buf << table_to_csv(rows);
      else write_table_text(buf, rows, style);
    } else if (*dump) {
      const Provenance prov = provenance_s == "synthesized" ? Provenance::synthesized : Provenance::paper_printed;
      const auto items = dump_items(what, kind, prov);
      const bool ops = what == "operators";
      if (format == "json") {
        buf << dump_to_json(what, items, ops ? std::optional(kind) : std::nullopt, ops ? std::optional(prov) : std::nullopt).dump(2) << '\n';
      } else if (format == "csv") {
        buf << "name,row,col,re,im\n";
        for (const auto& it : items)
          for (std::size_t i = 0; i < it.values.size(); ++i)
            buf << it.name << ',' << (it.rows == 1 ? 0 : i / it.rows) << ',' << (it.rows == 1 ? i : i % it.rows) << ','
                << format_double(it.values[i].real()) << ',' << format_double(it.values[i].imag()) << '\n';
      } else {
        for (const auto& it : items) {
          buf << it.name << ":\n";
          const std::size_t cols = it.rows == 1 ? it.values.size() : it.rows;
          for (std::size_t i = 0; i < it.values.size(); ++i)
            buf << "  " << complex_text(it.values[i]) << ((i + 1) % cols == 0 ? "\n" : "");
        }
      }
    }
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  if (out_path.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << out_path << " for writing\n";
      return exit_usage;
    }
    f << buf.str();
  }
  return status;
}

}  // namespace qutrit::cli
