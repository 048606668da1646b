// Command dispatch and report emission. Exit code 0 when every asserted
// property passes, 1 on a property failure (with a record written), 2 on
// usage or config errors (mapped by the caller).
#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "dbarlab/config.hpp"
#include "dbarlab/jsonout.hpp"

namespace dbarlab {

inline constexpr const char* kVersion = "1.0.0";

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
}

inline std::string float17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline JValue index_json(const MultiIndex& m) {
  JValue arr = JValue::array();
  for (Coordinate j : m) arr.push(JValue::integer(j));
  return arr;
}

inline JValue form_json(const Form& f) {
  JValue obj = JValue::object();
  obj.set("s", f.s()).set("t", f.t()).set("n", f.n());
  JValue terms = JValue::array();
  for (const auto& [key, poly] : f.terms()) {
    JValue term = JValue::object();
    term.set("I", index_json(key.first));
    term.set("J", index_json(key.second));
    term.set("poly", format_poly(poly));
    terms.push(std::move(term));
  }
  obj.set("terms", std::move(terms));
  return obj;
}

inline JValue solve_report_json(const SolveReport& rep) {
  JValue obj = JValue::object();
  obj.set("u", form_json(rep.u));
  obj.set("residual_norm_sq", rep.residual_norm_sq);
  obj.set("norm_u_sq", rep.norm_u_sq);
  obj.set("norm_f_sq", rep.norm_f_sq);
  obj.set("ortho_defect", rep.ortho_defect);
  obj.set("bound_satisfied", rep.bound_satisfied);
  const double nf = to_double(rep.norm_f_sq);
  obj.set("ratio", nf == 0.0 ? 0.0 : std::sqrt(to_double(rep.norm_u_sq) / nf));
  return obj;
}

inline JValue verify_report_json(const VerifyReport& rep) {
  JValue obj = JValue::object();
  JValue props = JValue::array();
  for (const PropertyResult& p : rep.properties) {
    JValue e = JValue::object();
    e.set("name", p.name);
    e.set("cases", p.cases);
    e.set("failures", p.failures);
    e.set("pass", p.pass());
    if (!p.pass()) e.set("counterexample", p.counterexample);
    props.push(std::move(e));
  }
  obj.set("properties", std::move(props));
  obj.set("pass", rep.all_pass());
  return obj;
}

inline JValue sweep_rows_json(const std::vector<SweepRow>& rows, bool builtin) {
  JValue arr = JValue::array();
  for (const SweepRow& r : rows) {
    JValue e = JValue::object();
    e.set("n", r.n);
    e.set("norm_f_sq", r.norm_f_sq);
    e.set("norm_u_sq", r.norm_u_sq);
    e.set("ratio", r.ratio);
    e.set("ratio_le_1", r.ratio_le_1);
    if (builtin) {
      e.set("ratio_sq_is_half", r.exact_half);
    } else {
      e.set("truncation_closed", r.mn_closed);
    }
    arr.push(std::move(e));
  }
  return arr;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "n,norm_f_sq_num,norm_f_sq_den,norm_u_sq_num,norm_u_sq_den,ratio_float\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n) + ",";
    out += boost::multiprecision::numerator(r.norm_f_sq).str() + ",";
    out += boost::multiprecision::denominator(r.norm_f_sq).str() + ",";
    out += boost::multiprecision::numerator(r.norm_u_sq).str() + ",";
    out += boost::multiprecision::denominator(r.norm_u_sq).str() + ",";
    out += float17(r.ratio) + "\n";
  }
  return out;
}

inline JValue lempert_report_json(const LempertReport& rep) {
  JValue obj = JValue::object();
  obj.set("p", rep.p);
  obj.set("hermite_cap", rep.cap);
  obj.set("n", rep.n);
  JValue coords = JValue::array();
  for (const LempertCoordinateReport& c : rep.coords) {
    JValue e = JValue::object();
    e.set("coordinate", static_cast<std::size_t>(c.k));
    JValue modes = JValue::array();
    for (const LempertMode& m : c.modes) {
      JValue mv = JValue::object();
      mv.set("p", m.p);
      mv.set("q", m.q);
      mv.set("re", m.c.real());
      mv.set("im", m.c.imag());
      modes.push(std::move(mv));
    }
    e.set("modes", std::move(modes));
    e.set("two_grid_error", c.two_grid_error);
    e.set("psi_norm_sq_quad", c.psi_norm_sq_quad);
    e.set("captured_mass", c.captured_mass);
    e.set("tail_mass", c.tail_mass());
    e.set("diagonal_ok", c.diagonal_ok);
    coords.push(std::move(e));
  }
  obj.set("coordinates", std::move(coords));
  obj.set("structure_ok", rep.structure_ok);
  obj.set("psi_bound_ok", rep.psi_bound_ok);
  obj.set("rel_residual_sq", rep.rel_residual_sq);
  obj.set("residual_ok", rep.residual_ok);
  obj.set("norm_u_sq", rep.norm_u_sq);
  obj.set("norm_f_sq", rep.norm_f_sq);
  obj.set("ratio", rep.ratio);
  obj.set("ratio_le_1", rep.ratio_le_1);
  obj.set("pass", rep.pass());
  return obj;
}

inline JValue mc_report_json(const McReport& rep) {
  JValue obj = JValue::object();
  obj.set("exact", rep.exact);
  obj.set("empirical", rep.empirical);
  obj.set("stderr", rep.stderr_);
  obj.set("sigmas", rep.sigmas);
  obj.set("pass", rep.pass);
  return obj;
}

inline Form load_form(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io.input: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_form(text);
}

}  // namespace detail

inline int run_command(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.command.empty()) throw ParseError("no command given");
  const fs::path out_dir(cfg.io.output);
  fs::create_directories(out_dir);
  detail::write_file(out_dir / "config.txt", render_config(cfg));
  {
    JValue manifest = JValue::object();
    manifest.set("command", cfg.command);
    manifest.set("config_hash", config_hash(cfg));
    manifest.set("seed", cfg.experiment.seed);
    manifest.set("versions", JValue::object().set("dbarlab", kVersion));
    detail::write_file(out_dir / "manifest.json", manifest.dump());
  }
  // JSON verdicts are always written; the format knob selects sweep tables.
  const bool want_json = cfg.io.format != "csv";
  const bool want_csv = cfg.io.format != "json";

  if (cfg.command == "verify") {
    const VerifyReport rep = verify_suite(cfg.experiment);
    detail::write_file(out_dir / "verify.json", detail::verify_report_json(rep).dump());
    return rep.all_pass() ? 0 : 1;
  }

  if (cfg.command == "sweep") {
    const SweepReport rep = dimension_sweep(cfg.experiment);
    if (want_json) {
      JValue obj = JValue::object();
      obj.set("builtin_family", detail::sweep_rows_json(rep.builtin, true));
      obj.set("truncated_family", detail::sweep_rows_json(rep.truncated, false));
      obj.set("pass", rep.all_pass());
      detail::write_file(out_dir / "sweep.json", obj.dump());
    }
    if (want_csv) {
      detail::write_file(out_dir / "sweep.csv", detail::sweep_csv(rep.builtin));
      detail::write_file(out_dir / "sweep_truncated.csv", detail::sweep_csv(rep.truncated));
    }
    return rep.all_pass() ? 0 : 1;
  }

  if (cfg.command == "lempert") {
    const LempertReport rep = lempert_example(cfg.experiment, cfg.lempert_p);
    detail::write_file(out_dir / "lempert.json", detail::lempert_report_json(rep).dump());
    return rep.pass() ? 0 : 1;
  }

  if (cfg.command == "solve") {
    if (cfg.io.input.empty()) throw ValidationError("solve needs io.input (a form literal path)");
    const Form f = detail::load_form(cfg.io.input);
    const WeightSequence w = cfg.experiment.weights.extended(std::max<std::size_t>(f.n(), 1));
    try {
      const SolveReport rep = solve_minimal(f, w);
      detail::write_file(out_dir / "solve.json", detail::solve_report_json(rep).dump());
      return 0;
    } catch (const NotClosed& e) {
      JValue err = JValue::object();
      err.set("error", "NotClosed");
      err.set("message", std::string(e.what()));
      err.set("form", detail::form_json(f));
      detail::write_file(out_dir / "error.json", err.dump());
      return 1;
    }
  }

  if (cfg.command == "mc") {
    if (cfg.io.input.empty()) throw ValidationError("mc needs io.input (a form literal path)");
    const Form f = detail::load_form(cfg.io.input);
    const McReport rep = mc_norm_check(cfg.experiment, f);
    detail::write_file(out_dir / "mc.json", detail::mc_report_json(rep).dump());
    return rep.pass ? 0 : 1;
  }

  throw ParseError("unknown command '" + cfg.command + "'");
}

}  // namespace dbarlab
