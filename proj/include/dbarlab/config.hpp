// Flat key=value run configuration: parsing with precise per-line errors,
// canonical rendering (the round-trip parse(render(cfg)) == cfg holds), and
// a stable hash for manifests.
#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dbarlab/experiments.hpp"

namespace dbarlab {

struct IoConfig {
  std::string input;           // form literal path (solve, mc)
  std::string output = "out";  // report directory
  std::string format = "both";  // json | csv | both
};

struct RunConfig {
  std::string command;  // verify | solve | sweep | lempert | mc
  ExperimentConfig experiment;
  unsigned lempert_p = 2;
  IoConfig io;
};

namespace detail {

struct RawEntry {
  std::string value;
  std::size_t line;
};

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

inline std::vector<std::size_t> parse_n_range(const std::string& s) {
  const auto dots = s.find("..");
  std::vector<std::size_t> out;
  if (dots != std::string::npos) {
    const std::size_t lo = std::stoul(trim(s.substr(0, dots)));
    const std::size_t hi = std::stoul(trim(s.substr(dots + 2)));
    if (lo == 0 || hi < lo) throw ParseError("bad range '" + s + "'");
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  for (const std::string& tok : split_list(s)) {
    if (tok.empty()) throw ParseError("bad list '" + s + "'");
    out.push_back(std::stoul(tok));
  }
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  std::map<std::string, detail::RawEntry> raw;
  std::vector<std::string> errors;
  {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string body = detail::trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
        continue;
      }
      const std::string key = detail::trim(body.substr(0, eq));
      const std::string value = detail::trim(body.substr(eq + 1));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      if (raw.count(key)) {
        errors.push_back("key '" + key + "' (line " + std::to_string(lineno) + "): duplicate");
        continue;
      }
      raw[key] = {value, lineno};
    }
  }

  RunConfig cfg;
  std::string weights_kind = "geometric";
  Rational wc(1, 4), wr(1, 2);
  std::size_t wcount = 16;
  std::vector<Rational> wlist;

  auto take = [&](const std::string& key) -> const detail::RawEntry* {
    auto it = raw.find(key);
    if (it == raw.end()) return nullptr;
    return &it->second;
  };
  auto fail = [&](const std::string& key, const detail::RawEntry* e, const std::string& why) {
    errors.push_back("key '" + key + "' (line " + std::to_string(e->line) + "): " + why);
  };
  auto get_unsigned = [&](const std::string& key, auto& dst) {
    if (const auto* e = take(key)) {
      try {
        dst = static_cast<std::remove_reference_t<decltype(dst)>>(std::stoull(e->value));
      } catch (const std::exception&) {
        fail(key, e, "expected a nonnegative integer, got '" + e->value + "'");
      }
    }
  };
  auto get_rational = [&](const std::string& key, Rational& dst) {
    if (const auto* e = take(key)) {
      try {
        dst = parse_rational(e->value);
      } catch (const ParseError& err) {
        fail(key, e, err.what());
      }
    }
  };
  auto get_double = [&](const std::string& key, double& dst) {
    if (const auto* e = take(key)) {
      try {
        std::size_t used = 0;
        dst = std::stod(e->value, &used);
        if (used != e->value.size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        fail(key, e, "expected a floating value, got '" + e->value + "'");
      }
    }
  };
  auto get_string = [&](const std::string& key, std::string& dst) {
    if (const auto* e = take(key)) dst = e->value;
  };

  get_string("command", cfg.command);
  get_string("weights.kind", weights_kind);
  get_rational("weights.c", wc);
  get_rational("weights.r", wr);
  get_unsigned("weights.count", wcount);
  if (const auto* e = take("weights.list")) {
    try {
      for (const std::string& tok : detail::split_list(e->value)) {
        wlist.push_back(parse_rational(tok));
      }
    } catch (const ParseError& err) {
      fail("weights.list", e, err.what());
    }
  }
  if (const auto* e = take("experiment.n_range")) {
    try {
      cfg.experiment.n_range = detail::parse_n_range(e->value);
    } catch (const std::exception& err) {
      fail("experiment.n_range", e, err.what());
    }
  }
  get_unsigned("experiment.s", cfg.experiment.s);
  get_unsigned("experiment.t", cfg.experiment.t);
  get_unsigned("experiment.degree_cap", cfg.experiment.degree_cap);
  get_unsigned("experiment.seed", cfg.experiment.seed);
  get_unsigned("experiment.case_count", cfg.experiment.case_count);
  get_unsigned("experiment.sample_count", cfg.experiment.sample_count);
  get_unsigned("experiment.jobs", cfg.experiment.jobs);
  get_unsigned("quadrature.radial_nodes", cfg.experiment.quadrature.radial_nodes);
  get_unsigned("quadrature.angular_nodes", cfg.experiment.quadrature.angular_nodes);
  get_rational("quadrature.cutoff_radius", cfg.experiment.quadrature.cutoff_radius);
  get_double("tolerances.mc_sigma", cfg.experiment.tolerances.mc_sigma);
  get_double("tolerances.lempert_rel_residual", cfg.experiment.tolerances.lempert_rel_residual);
  get_unsigned("lempert.p", cfg.lempert_p);
  get_string("io.input", cfg.io.input);
  get_string("io.output", cfg.io.output);
  get_string("io.format", cfg.io.format);

  static const char* known[] = {
      "command",
      "weights.kind", "weights.c", "weights.r", "weights.count", "weights.list",
      "experiment.n_range", "experiment.s", "experiment.t", "experiment.degree_cap",
      "experiment.seed", "experiment.case_count", "experiment.sample_count", "experiment.jobs",
      "quadrature.radial_nodes", "quadrature.angular_nodes", "quadrature.cutoff_radius",
      "tolerances.mc_sigma", "tolerances.lempert_rel_residual", "lempert.p",
      "io.input", "io.output", "io.format"};
  for (const auto& [key, entry] : raw) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) ok = true;
    }
    if (!ok) {
      errors.push_back("key '" + key + "' (line " + std::to_string(entry.line) +
                       "): unknown key");
    }
  }

  if (!cfg.command.empty() && cfg.command != "verify" && cfg.command != "solve" &&
      cfg.command != "sweep" && cfg.command != "lempert" && cfg.command != "mc") {
    errors.push_back("key 'command': unknown command '" + cfg.command + "'");
  }
  if (cfg.io.format != "json" && cfg.io.format != "csv" && cfg.io.format != "both") {
    errors.push_back("key 'io.format': expected json, csv or both");
  }

  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw ParseError(msg);
  }

  // weight materialization; the sum certificate is checked by the constructor
  const std::size_t need = cfg.experiment.n_range.empty()
                               ? wcount
                               : std::max(wcount, cfg.experiment.n_range.back());
  if (weights_kind == "geometric") {
    cfg.experiment.weights = WeightSequence::geometric(wc, wr, need);
  } else if (weights_kind == "list") {
    cfg.experiment.weights = WeightSequence::from_list(wlist);
  } else {
    throw ParseError("key 'weights.kind': expected geometric or list, got '" + weights_kind +
                     "'");
  }
  cfg.experiment.validate();
  cfg.experiment.weights.extended(cfg.experiment.max_n());  // list length check
  return cfg;
}

inline std::string render_config(const RunConfig& cfg) {
  std::string out;
  out += "command = " + cfg.command + "\n";
  const WeightSequence& w = cfg.experiment.weights;
  if (w.is_geometric()) {
    out += "weights.kind = geometric\n";
    out += "weights.c = " + format_rational(w.geometric_scale()) + "\n";
    out += "weights.r = " + format_rational(w.geometric_ratio()) + "\n";
    out += "weights.count = " + std::to_string(w.size()) + "\n";
  } else {
    out += "weights.kind = list\n";
    out += "weights.list = ";
    for (std::size_t j = 1; j <= w.size(); ++j) {
      if (j > 1) out += ",";
      out += format_rational(w.a(j));
    }
    out += "\n";
  }
  const auto& nr = cfg.experiment.n_range;
  bool contiguous = true;
  for (std::size_t k = 1; k < nr.size(); ++k) {
    if (nr[k] != nr[k - 1] + 1) contiguous = false;
  }
  out += "experiment.n_range = ";
  if (contiguous && nr.size() > 1) {
    out += std::to_string(nr.front()) + ".." + std::to_string(nr.back());
  } else {
    for (std::size_t k = 0; k < nr.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(nr[k]);
    }
  }
  out += "\n";
  out += "experiment.s = " + std::to_string(cfg.experiment.s) + "\n";
  out += "experiment.t = " + std::to_string(cfg.experiment.t) + "\n";
  out += "experiment.degree_cap = " + std::to_string(cfg.experiment.degree_cap) + "\n";
  out += "experiment.seed = " + std::to_string(cfg.experiment.seed) + "\n";
  out += "experiment.case_count = " + std::to_string(cfg.experiment.case_count) + "\n";
  out += "experiment.sample_count = " + std::to_string(cfg.experiment.sample_count) + "\n";
  out += "experiment.jobs = " + std::to_string(cfg.experiment.jobs) + "\n";
  out += "quadrature.radial_nodes = " + std::to_string(cfg.experiment.quadrature.radial_nodes) +
         "\n";
  out += "quadrature.angular_nodes = " +
         std::to_string(cfg.experiment.quadrature.angular_nodes) + "\n";
  out += "quadrature.cutoff_radius = " +
         format_rational(cfg.experiment.quadrature.cutoff_radius) + "\n";
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", cfg.experiment.tolerances.mc_sigma);
    out += std::string("tolerances.mc_sigma = ") + buf + "\n";
    std::snprintf(buf, sizeof buf, "%.17g", cfg.experiment.tolerances.lempert_rel_residual);
    out += std::string("tolerances.lempert_rel_residual = ") + buf + "\n";
  }
  out += "lempert.p = " + std::to_string(cfg.lempert_p) + "\n";
  out += "io.input = " + cfg.io.input + "\n";
  out += "io.output = " + cfg.io.output + "\n";
  out += "io.format = " + cfg.io.format + "\n";
  return out;
}

inline bool operator==(const RunConfig& a, const RunConfig& b) {
  return render_config(a) == render_config(b);
}

/// FNV-1a over the canonical rendering; hex string for manifests.
inline std::string config_hash(const RunConfig& cfg) {
  const std::string text = render_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dbarlab
