// agpk — batch runner for adiabatic-gauge-potential computations.
//
// Subcommands:
//   lanczos            Lanczos coefficients b_n of one model.
//   agp                norm table for one model at its given parameters.
//   sweep              norm table over a linear parameter axis.
//   scaling            norm-vs-size study for an autocorrelation family.
//   truncation-report  per-model JSON summary of truncation convergence.
//
// Configuration is a single JSON document (--config FILE); command-line flags
// override config keys; --print-config emits the fully resolved document and
// exits.  Every float in CSV output is printed with 17 significant digits so
// a rerun with the same config byte-reproduces the file.
//
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 resource cap.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "agpk/agp_solver.hpp"
#include "agpk/autocorr.hpp"
#include "agpk/errors.hpp"
#include "agpk/exact_oracle.hpp"
#include "agpk/krylov.hpp"
#include "agpk/model.hpp"
#include "agpk/spectral.hpp"

namespace {

using nlohmann::json;

// ------------------------------------------------------------------ helpers

std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_long(long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    throw agpk::config_error(what + ": '" + s + "' is not a finite number");
  return v;
}

long parse_long(const std::string& s, const std::string& what) {
  long v = 0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw agpk::config_error(what + ": '" + s + "' is not an integer");
  return v;
}

/// FNV-1a over "model;key=value;..." with 17-digit values, so the hash is a
/// stable fingerprint of the exact numbers a row was computed from.
std::string params_hash(const std::string& model,
                        const std::map<std::string, double>& params) {
  std::string text = model;
  for (const auto& [k, v] : params) {
    text += ';';
    text += k;
    text += '=';
    text += fmt_g17(v);
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// ------------------------------------------------------------- configuration

struct SweepAxis {
  std::string param;
  double from = 0.0;
  double to = 0.0;
  long steps = 0;
};

struct ModelEntry {
  std::string model;
  std::map<std::string, double> params;
};

struct Config {
  std::string subcommand;
  std::string model;
  std::map<std::string, double> params;
  bool mu_auto = true;
  double mu_value = 0.0;
  std::vector<std::string> truncate{"full"};  // "full" or decimal orders
  std::vector<std::string> methods{"krylov"};
  bool has_sweep = false;
  SweepAxis sweep;
  std::vector<long> sizes{10, 12, 14, 16};
  std::vector<ModelEntry> models;
  std::string out = "-";
  std::string format;  // resolved per subcommand when left empty
  long threads = 1;
  long seed = 0;      // reserved; every algorithm is deterministic
  long max_steps = -1;  // lanczos chain cap; < 0 runs to closure
  bool print_config = false;
};

/// Raw command-line values; presence is tracked by CLI11 option counts.
struct RawFlags {
  std::string config_path;
  std::string model;
  std::vector<std::string> params;
  std::string mu;
  std::string truncate;
  std::string methods;
  std::string out;
  std::string format;
  long threads = 1;
  long seed = 0;
  long max_steps = -1;
  std::string sweep_param;
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  long sweep_steps = 0;
  std::string sizes;
  bool print_config = false;
};

void set_mu(Config& c, const std::string& text) {
  if (text == "auto") {
    c.mu_auto = true;
    return;
  }
  c.mu_auto = false;
  c.mu_value = parse_double(text, "mu");
}

std::vector<std::string> normalize_truncate(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const std::string& tok : in) {
    std::string norm;
    if (tok == "full") {
      norm = "full";
    } else {
      const long n = parse_long(tok, "truncate");
      if (n < 0)
        throw agpk::config_error("truncate: orders must be >= 0, got '" + tok +
                                 "'");
      norm = fmt_long(n);
    }
    if (std::find(out.begin(), out.end(), norm) == out.end())
      out.push_back(norm);
  }
  if (out.empty()) throw agpk::config_error("truncate: empty list");
  return out;
}

std::vector<std::string> normalize_methods(const std::vector<std::string>& in) {
  static const std::vector<std::string> known = {"krylov", "exact", "autocorr"};
  std::vector<std::string> out;
  for (const std::string& m : in) {
    if (std::find(known.begin(), known.end(), m) == known.end())
      throw agpk::config_error(
          "method: '" + m + "' is not one of krylov, exact, autocorr");
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw agpk::config_error("method: empty list");
  return out;
}

std::map<std::string, double> params_from_json(const json& j,
                                               const std::string& where) {
  if (!j.is_object())
    throw agpk::config_error(where + ": expected an object of numbers");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number())
      throw agpk::config_error(where + ": key '" + k + "' is not a number");
    out[k] = v.get<double>();
  }
  return out;
}

void apply_config_file(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw agpk::config_error("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw agpk::config_error(std::string("config file '") + path +
                             "': " + e.what());
  }
  if (!j.is_object())
    throw agpk::config_error("config file '" + path +
                             "': top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "subcommand") {
      const std::string sub = value.get<std::string>();
      if (sub != c.subcommand)
        throw agpk::config_error("config key 'subcommand' is '" + sub +
                                 "' but the invoked subcommand is '" +
                                 c.subcommand + "'");
    } else if (key == "model") {
      c.model = value.get<std::string>();
    } else if (key == "params") {
      c.params = params_from_json(value, "config key 'params'");
    } else if (key == "mu") {
      if (value.is_string())
        set_mu(c, value.get<std::string>());
      else if (value.is_number()) {
        c.mu_auto = false;
        c.mu_value = value.get<double>();
      } else
        throw agpk::config_error("config key 'mu': expected \"auto\" or a number");
    } else if (key == "truncate") {
      std::vector<std::string> toks;
      if (value.is_string()) {
        toks = split(value.get<std::string>(), ',');
      } else if (value.is_array()) {
        for (const auto& t : value) {
          if (t.is_string())
            toks.push_back(t.get<std::string>());
          else if (t.is_number_integer())
            toks.push_back(fmt_long(t.get<long>()));
          else
            throw agpk::config_error(
                "config key 'truncate': entries must be integers or \"full\"");
        }
      } else if (value.is_number_integer()) {
        toks.push_back(fmt_long(value.get<long>()));
      } else {
        throw agpk::config_error(
            "config key 'truncate': expected \"full\", an integer, or a list");
      }
      c.truncate = normalize_truncate(toks);
    } else if (key == "methods") {
      std::vector<std::string> toks;
      if (value.is_string()) {
        toks = split(value.get<std::string>(), ',');
      } else if (value.is_array()) {
        for (const auto& t : value) toks.push_back(t.get<std::string>());
      } else {
        throw agpk::config_error(
            "config key 'methods': expected a list of method names");
      }
      c.methods = normalize_methods(toks);
    } else if (key == "sweep") {
      if (!value.is_object())
        throw agpk::config_error("config key 'sweep': expected an object");
      for (const auto& [sk, sv] : value.items()) {
        if (sk == "param")
          c.sweep.param = sv.get<std::string>();
        else if (sk == "from")
          c.sweep.from = sv.get<double>();
        else if (sk == "to")
          c.sweep.to = sv.get<double>();
        else if (sk == "steps")
          c.sweep.steps = sv.get<long>();
        else
          throw agpk::config_error("config key 'sweep': unknown field '" + sk +
                                   "'");
      }
      c.has_sweep = true;
    } else if (key == "sizes") {
      if (!value.is_array())
        throw agpk::config_error("config key 'sizes': expected a list");
      c.sizes.clear();
      for (const auto& t : value) c.sizes.push_back(t.get<long>());
    } else if (key == "models") {
      if (!value.is_array())
        throw agpk::config_error("config key 'models': expected a list");
      c.models.clear();
      for (const auto& entry : value) {
        if (!entry.is_object() || !entry.contains("model"))
          throw agpk::config_error(
              "config key 'models': each entry needs a 'model' name");
        ModelEntry me;
        me.model = entry.at("model").get<std::string>();
        if (entry.contains("params"))
          me.params = params_from_json(entry.at("params"), "models[].params");
        for (const auto& [ek, ev] : entry.items()) {
          (void)ev;
          if (ek != "model" && ek != "params")
            throw agpk::config_error("config key 'models': unknown field '" +
                                     ek + "'");
        }
        c.models.push_back(std::move(me));
      }
    } else if (key == "out") {
      c.out = value.get<std::string>();
    } else if (key == "format") {
      c.format = value.get<std::string>();
    } else if (key == "threads") {
      c.threads = value.get<long>();
    } else if (key == "seed") {
      c.seed = value.get<long>();
    } else if (key == "max_steps") {
      c.max_steps = value.get<long>();
    } else {
      throw agpk::config_error("unknown config key '" + key + "'");
    }
  }
}

/// Option count that tolerates flags not registered on this subcommand.
std::size_t opt_count(const CLI::App& sub, const std::string& name) {
  const CLI::Option* opt = sub.get_option_no_throw(name);
  return opt ? opt->count() : 0;
}

Config resolve_config(const std::string& subcommand, const CLI::App& sub,
                      const RawFlags& raw) {
  Config c;
  c.subcommand = subcommand;
  if (opt_count(sub, "--config") > 0) apply_config_file(c, raw.config_path);

  if (opt_count(sub, "--model") > 0) c.model = raw.model;
  for (const std::string& kv : raw.params) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw agpk::config_error("malformed --param '" + kv +
                               "' (expected key=value)");
    c.params[kv.substr(0, eq)] =
        parse_double(kv.substr(eq + 1), "--param " + kv.substr(0, eq));
  }
  if (opt_count(sub, "--mu") > 0) set_mu(c, raw.mu);
  if (opt_count(sub, "--truncate") > 0)
    c.truncate = normalize_truncate(split(raw.truncate, ','));
  if (opt_count(sub, "--method") > 0)
    c.methods = normalize_methods(split(raw.methods, ','));
  if (opt_count(sub, "--out") > 0) c.out = raw.out;
  if (opt_count(sub, "--format") > 0) c.format = raw.format;
  if (opt_count(sub, "--threads") > 0) c.threads = raw.threads;
  if (opt_count(sub, "--seed") > 0) c.seed = raw.seed;
  if (opt_count(sub, "--max-steps") > 0) c.max_steps = raw.max_steps;
  if (opt_count(sub, "--sweep-param") > 0) {
    c.sweep.param = raw.sweep_param;
    c.has_sweep = true;
  }
  if (opt_count(sub, "--from") > 0) {
    c.sweep.from = raw.sweep_from;
    c.has_sweep = true;
  }
  if (opt_count(sub, "--to") > 0) {
    c.sweep.to = raw.sweep_to;
    c.has_sweep = true;
  }
  if (opt_count(sub, "--steps") > 0) {
    c.sweep.steps = raw.sweep_steps;
    c.has_sweep = true;
  }
  if (opt_count(sub, "--sizes") > 0) {
    c.sizes.clear();
    for (const std::string& tok : split(raw.sizes, ','))
      c.sizes.push_back(parse_long(tok, "--sizes"));
  }
  c.print_config = raw.print_config;

  // ---- validation ---------------------------------------------------------
  if (c.format.empty())
    c.format = (subcommand == "truncation-report") ? "json" : "csv";
  if (c.format != "csv" && c.format != "json")
    throw agpk::config_error("format: expected csv or json, got '" + c.format +
                             "'");
  if (c.threads < 1) throw agpk::config_error("threads: must be >= 1");

  if (subcommand == "lanczos" || subcommand == "agp" || subcommand == "sweep") {
    if (c.model.empty())
      throw agpk::config_error("missing model name (--model or config key)");
  }
  if (subcommand == "agp" || subcommand == "sweep") {
    const bool anchored =
        std::find(c.methods.begin(), c.methods.end(), "krylov") !=
            c.methods.end() ||
        std::find(c.methods.begin(), c.methods.end(), "exact") !=
            c.methods.end();
    if (!anchored)
      throw agpk::config_error(
          "methods: at least one of krylov or exact is required");
  }
  if (subcommand == "sweep") {
    if (!c.has_sweep || c.sweep.param.empty())
      throw agpk::config_error(
          "sweep: missing axis (--sweep-param/--from/--to/--steps or config "
          "key 'sweep')");
    if (c.sweep.steps < 1) throw agpk::config_error("sweep: steps must be >= 1");
    if (!std::isfinite(c.sweep.from) || !std::isfinite(c.sweep.to))
      throw agpk::config_error("sweep: from/to must be finite");
  }
  if (subcommand == "scaling") {
    if (c.model.empty())
      throw agpk::config_error(
          "missing autocorrelation family name (--model or config key)");
    if (!c.mu_auto)
      throw agpk::config_error(
          "scaling uses the size-dependent regulator mu = L 2^-L; only "
          "--mu auto is accepted");
    if (c.sizes.empty()) throw agpk::config_error("sizes: empty list");
    for (long s : c.sizes)
      if (s < 1) throw agpk::config_error("sizes: entries must be >= 1");
  }
  if (subcommand == "truncation-report") {
    if (!c.model.empty())
      throw agpk::config_error(
          "truncation-report takes its model list from the config key "
          "'models', not --model");
    if (c.models.size() < 2)
      throw agpk::config_error(
          "truncation-report requires at least two entries in the config key "
          "'models'");
    if (c.format != "json")
      throw agpk::config_error("truncation-report emits JSON; use --format json");
  }
  return c;
}

json resolved_config_json(const Config& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["out"] = c.out;
  j["format"] = c.format;
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  if (c.mu_auto)
    j["mu"] = "auto";
  else
    j["mu"] = c.mu_value;
  if (c.subcommand != "truncation-report" && c.subcommand != "scaling") {
    j["model"] = c.model;
    j["params"] = c.params;
  }
  if (c.subcommand == "agp" || c.subcommand == "sweep" ||
      c.subcommand == "truncation-report") {
    json trunc = json::array();
    for (const std::string& t : c.truncate) {
      if (t == "full")
        trunc.push_back(t);
      else
        trunc.push_back(parse_long(t, "truncate"));
    }
    j["truncate"] = trunc;
    if (c.subcommand != "truncation-report") j["methods"] = c.methods;
  }
  if (c.subcommand == "sweep") {
    j["sweep"] = {{"param", c.sweep.param},
                  {"from", c.sweep.from},
                  {"to", c.sweep.to},
                  {"steps", c.sweep.steps}};
  }
  if (c.subcommand == "scaling") {
    j["model"] = c.model;
    j["params"] = c.params;
    j["sizes"] = c.sizes;
  }
  if (c.subcommand == "truncation-report") {
    json models = json::array();
    for (const ModelEntry& me : c.models)
      models.push_back({{"model", me.model}, {"params", me.params}});
    j["models"] = models;
  }
  if (c.subcommand == "lanczos") j["max_steps"] = c.max_steps;
  return j;
}

// ------------------------------------------------------------------- output

void write_output(const Config& c, const std::string& text) {
  if (c.out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out)
    throw agpk::config_error("cannot open output file '" + c.out + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw agpk::config_error("failed writing output file '" + c.out + "'");
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

// ------------------------------------------------------------ chain running

/// Stored-vector budget for one spectral chain (full reorthogonalization
/// keeps every Lanczos vector): steps * n_nodes doubles, ~160 MB.
constexpr double kChainStorageCap = 2.0e7;

void require_chain_storage(double steps, double n_nodes, const char* what) {
  if (steps * n_nodes > kChainStorageCap) {
    char msg[200];
    std::snprintf(msg, sizeof(msg),
                  "%s needs %.3g stored doubles (%.0f chain steps on %.0f "
                  "frequency nodes), above the %.3g cap; cap the chain "
                  "(--max-steps) or drop 'full' from --truncate",
                  what, steps * n_nodes, steps, n_nodes, kChainStorageCap);
    throw agpk::resource_error(msg);
  }
}

struct ChainOutcome {
  agpk::SpectralLanczosResult lan;
  bool closed = false;
};

/// Runs the node-space chain either to closure (want_full) or far enough to
/// solve every requested finite truncation order (2N+2 coefficients for
/// order N).
ChainOutcome run_chain(const agpk::FrequencyNodes& nodes, bool want_full,
                       long max_finite_order, bool keep_vectors) {
  const double n = static_cast<double>(nodes.omega.size());
  agpk::SpectralLanczosOptions opts;
  opts.keep_vectors = keep_vectors;
  if (want_full) {
    require_chain_storage(n + 6.0, n, "full Krylov closure");
    opts.max_steps = -1;
  } else {
    opts.max_steps = 2 * std::max(max_finite_order, 0L) + 2;
    require_chain_storage(static_cast<double>(opts.max_steps) + 1.0, n,
                          "truncated Krylov chain");
  }
  ChainOutcome out;
  out.lan = agpk::spectral_lanczos(nodes, opts);
  out.closed =
      out.lan.krylov.terminated == agpk::LanczosTermination::b_below_tolerance;
  return out;
}

// --------------------------------------------------------------- subcommands

int run_lanczos(const Config& c) {
  const agpk::ModelInstance m = agpk::build_model(c.model, c.params);
  const agpk::NormalizedDeformation nd = agpk::normalized_deformation(m);
  const agpk::FrequencyNodes nodes =
      agpk::frequency_nodes(m.hamiltonian, nd.o0);
  const double n = static_cast<double>(nodes.omega.size());
  agpk::SpectralLanczosOptions opts;
  if (c.max_steps < 0) {
    require_chain_storage(n + 6.0, n, "full Krylov closure");
    opts.max_steps = -1;
  } else {
    require_chain_storage(static_cast<double>(c.max_steps) + 1.0, n,
                          "Lanczos chain");
    opts.max_steps = c.max_steps;
  }
  const agpk::SpectralLanczosResult lan = agpk::spectral_lanczos(nodes, opts);
  const std::string hash = params_hash(m.name, m.parameters);

  std::string text;
  if (c.format == "csv") {
    text += "n,b_n,model,params_hash\n";
    for (std::size_t i = 0; i < lan.krylov.b.size(); ++i)
      text += csv_join({fmt_long(static_cast<long>(i) + 1),
                        fmt_g17(lan.krylov.b[i]), m.name, hash});
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < lan.krylov.b.size(); ++i)
      rows.push_back({{"n", static_cast<long>(i) + 1},
                      {"b_n", lan.krylov.b[i]},
                      {"model", m.name},
                      {"params_hash", hash}});
    text = json{{"rows", rows}}.dump(2) + "\n";
  }
  write_output(c, text);
  return 0;
}

struct NormRow {
  bool has_sweep_value = false;
  double sweep_value = 0.0;
  double mu = 0.0;
  std::string method;
  std::string truncation;  // "full", "exact", or a decimal order
  double norm = 0.0;
  double norm_over_size = 0.0;
  bool has_residual = false;
  double residual = 0.0;
};

/// One table point: every configured method and truncation at fixed model
/// parameters.  Also enforces the norm ceiling M/mu^2 * ||dH||^2 on each row
/// (M = kept-coefficient count for Krylov rows; the exact and transform rows
/// obey the M = 1 ceiling because omega^2/(omega^2+mu^2)^2 <= 1/(4 mu^2)).
std::vector<NormRow> compute_point(const Config& c,
                                   std::optional<double> sweep_value) {
  std::map<std::string, double> params = c.params;
  if (sweep_value) params[c.sweep.param] = *sweep_value;
  const agpk::ModelInstance m = agpk::build_model(c.model, params);
  const agpk::NormalizedDeformation nd = agpk::normalized_deformation(m);
  const double mu = c.mu_auto ? m.default_mu : c.mu_value;
  const double def2 = nd.norm_sq();

  const bool want_full = std::find(c.truncate.begin(), c.truncate.end(),
                                   "full") != c.truncate.end();
  long max_finite_order = -1;
  for (const std::string& tok : c.truncate)
    if (tok != "full")
      max_finite_order = std::max(max_finite_order, parse_long(tok, "truncate"));

  std::optional<agpk::FrequencyNodes> nodes;
  const auto ensure_nodes = [&]() -> const agpk::FrequencyNodes& {
    if (!nodes) nodes = agpk::frequency_nodes(m.hamiltonian, nd.o0);
    return *nodes;
  };

  std::vector<NormRow> rows;
  const auto push_row = [&](const std::string& method,
                            const std::string& truncation, double norm,
                            long kept_coeffs, std::optional<double> residual) {
    if (!std::isfinite(norm)) {
      throw agpk::numerical_error("non-finite norm for model '" + m.name +
                                  "', method " + method + ", truncation " +
                                  truncation);
    }
    if (mu > 0.0) {
      const double ceiling =
          agpk::agp_norm_bound(std::max(kept_coeffs, 1L), mu, def2);
      if (norm > ceiling * (1.0 + 1e-9)) {
        std::string msg = "norm bound violated for model '" + m.name +
                          "': method " + method + ", truncation " + truncation;
        if (sweep_value)
          msg += ", " + c.sweep.param + "=" + fmt_g17(*sweep_value);
        msg += ": norm " + fmt_g17(norm) + " > ceiling " + fmt_g17(ceiling) +
               " (M=" + fmt_long(std::max(kept_coeffs, 1L)) +
               ", mu=" + fmt_g17(mu) + ")";
        throw agpk::numerical_error(msg);
      }
    }
    NormRow row;
    row.has_sweep_value = sweep_value.has_value();
    row.sweep_value = sweep_value.value_or(0.0);
    row.mu = mu;
    row.method = method;
    row.truncation = truncation;
    row.norm = norm;
    row.norm_over_size = norm / m.size_scale;
    row.has_residual = residual.has_value();
    row.residual = residual.value_or(0.0);
    rows.push_back(std::move(row));
  };

  for (const std::string& method : c.methods) {
    if (method == "exact") {
      const double norm =
          agpk::agp_norm_exact(m.hamiltonian, m.deformation, mu, false);
      push_row("exact", "exact", norm, 1, std::nullopt);
    } else if (method == "krylov") {
      const agpk::FrequencyNodes& nd_nodes = ensure_nodes();
      const ChainOutcome chain =
          run_chain(nd_nodes, want_full, max_finite_order, true);
      const std::vector<double>& b = chain.lan.krylov.b;
      const long m_max = agpk::max_truncation_order(b.size());
      for (const std::string& tok : c.truncate) {
        // Orders past closure saturate: the variational space stops growing,
        // so the row reports the full solution under the requested label.
        const long order =
            (tok == "full") ? m_max
                            : std::min(parse_long(tok, "truncate"), m_max);
        const agpk::AgpSolution sol = agpk::solve_alpha(b, mu, order);
        const double norm = agpk::agp_norm_from_alpha(sol, def2);
        const Eigen::VectorXd s = agpk::node_solution(chain.lan, sol.a);
        const double residual =
            nd.norm * agpk::node_gauge_residual(nd_nodes, s, mu);
        push_row("krylov", tok, norm, static_cast<long>(sol.a.size()),
                 residual);
      }
    } else {  // autocorr: per-line analytic integral transform
      const agpk::FrequencyNodes& nd_nodes = ensure_nodes();
      double acc = 0.0;
      for (std::size_t i = 0; i < nd_nodes.omega.size(); ++i) {
        const double omega = nd_nodes.omega[i];
        const double den = omega * omega + mu * mu;
        if (den > 0.0) acc += nd_nodes.weight[i] * omega * omega / (den * den);
      }
      push_row("autocorr", "full", def2 * acc, 1, std::nullopt);
    }
  }
  return rows;
}

std::string render_norm_table(const Config& c,
                              const std::vector<NormRow>& rows) {
  if (c.format == "csv") {
    std::string text =
        "sweep_value,mu,method,truncation,norm,norm_over_L,gauge_residual\n";
    for (const NormRow& r : rows) {
      text += csv_join({r.has_sweep_value ? fmt_g17(r.sweep_value) : "",
                        fmt_g17(r.mu), r.method, r.truncation, fmt_g17(r.norm),
                        fmt_g17(r.norm_over_size),
                        r.has_residual ? fmt_g17(r.residual) : ""});
    }
    return text;
  }
  json jrows = json::array();
  for (const NormRow& r : rows) {
    json row;
    row["sweep_value"] =
        r.has_sweep_value ? json(r.sweep_value) : json(nullptr);
    row["mu"] = r.mu;
    row["method"] = r.method;
    row["truncation"] = r.truncation;
    row["norm"] = r.norm;
    row["norm_over_L"] = r.norm_over_size;
    row["gauge_residual"] = r.has_residual ? json(r.residual) : json(nullptr);
    jrows.push_back(std::move(row));
  }
  return json{{"rows", jrows}}.dump(2) + "\n";
}

int run_agp(const Config& c) {
  const std::vector<NormRow> rows = compute_point(c, std::nullopt);
  write_output(c, render_norm_table(c, rows));
  return 0;
}

int run_sweep(const Config& c) {
  const long steps = c.sweep.steps;
  std::vector<double> values(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) {
    values[static_cast<std::size_t>(i)] =
        (steps == 1)
            ? c.sweep.from
            : (i == steps - 1
                   ? c.sweep.to
                   : c.sweep.from + (c.sweep.to - c.sweep.from) *
                                        static_cast<double>(i) /
                                        static_cast<double>(steps - 1));
  }

  // Worker pool over sweep points; rows are buffered per point and emitted
  // in axis order, so thread count never changes the output bytes.
  std::vector<std::vector<NormRow>> results(values.size());
  std::vector<std::exception_ptr> failures(values.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= values.size()) return;
      try {
        results[i] = compute_point(c, values[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const long n_workers =
      std::min(c.threads, static_cast<long>(values.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (long t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : failures)
    if (e) std::rethrow_exception(e);  // earliest axis point wins

  std::vector<NormRow> rows;
  for (const std::vector<NormRow>& r : results)
    rows.insert(rows.end(), r.begin(), r.end());
  write_output(c, render_norm_table(c, rows));
  return 0;
}

agpk::AutocorrSpec family_spec(const std::string& name,
                               const std::map<std::string, double>& params) {
  for (const auto& [k, v] : params) {
    (void)v;
    if (k != "alpha" && k != "eta" && k != "length")
      throw agpk::config_error("scaling family parameter '" + k +
                               "' is not one of alpha, eta, length");
  }
  const auto get = [&](const char* key, double fallback) {
    const auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  };
  const double alpha = get("alpha", 1.0);
  const double eta = get("eta", 1.0);
  const long length = std::lround(get("length", 2.0));
  if (name == "gaussian") return agpk::AutocorrSpec::gaussian();
  if (name == "sech") return agpk::AutocorrSpec::sech(alpha, eta);
  if (name == "su2_cos") return agpk::AutocorrSpec::su2_cos(length, alpha);
  if (name == "bessel_const") return agpk::AutocorrSpec::bessel_const(alpha);
  if (name == "bessel_j0sq") return agpk::AutocorrSpec::bessel_j0sq(alpha);
  if (name == "xy_chain") return agpk::AutocorrSpec::xy_chain();
  if (name == "ising_critical")
    return agpk::AutocorrSpec::ising_critical(length);
  throw agpk::config_error(
      "unknown autocorrelation family '" + name +
      "'; known: gaussian, sech, su2_cos, bessel_const, bessel_j0sq, "
      "xy_chain, ising_critical");
}

int run_scaling(const Config& c) {
  const agpk::AutocorrSpec spec = family_spec(c.model, c.params);
  const agpk::ScalingStudy study = agpk::scaling_study(spec, c.sizes);

  std::string text;
  if (c.format == "csv") {
    text = "size,mu,norm,norm_over_size,slope\n";
    for (const agpk::ScalingRow& r : study.rows)
      text += csv_join({fmt_long(r.size), fmt_g17(r.mu), fmt_g17(r.norm),
                        fmt_g17(r.norm_over_size), fmt_g17(study.slope)});
  } else {
    json rows = json::array();
    for (const agpk::ScalingRow& r : study.rows)
      rows.push_back({{"size", r.size},
                      {"mu", r.mu},
                      {"norm", r.norm},
                      {"norm_over_size", r.norm_over_size}});
    text = json{{"rows", rows}, {"slope", study.slope}}.dump(2) + "\n";
  }
  write_output(c, text);
  return 0;
}

int run_truncation_report(const Config& c) {
  // Truncation orders scanned for the 5%-agreement threshold.
  std::vector<long> orders;
  for (const std::string& tok : c.truncate)
    if (tok != "full") orders.push_back(parse_long(tok, "truncate"));
  if (orders.empty())
    for (long n = 0; n <= 8; ++n) orders.push_back(n);
  std::sort(orders.begin(), orders.end());
  const long max_order = orders.back();

  json entries = json::array();
  for (const ModelEntry& me : c.models) {
    std::map<std::string, double> params = me.params;
    if (c.has_sweep && !c.sweep.param.empty())
      params[c.sweep.param] = 0.5 * (c.sweep.from + c.sweep.to);
    const agpk::ModelInstance m = agpk::build_model(me.model, params);
    const agpk::NormalizedDeformation nd = agpk::normalized_deformation(m);
    const double mu = c.mu_auto ? m.default_mu : c.mu_value;
    const double def2 = nd.norm_sq();
    const double exact =
        agpk::agp_norm_exact(m.hamiltonian, m.deformation, mu, false);

    const agpk::FrequencyNodes nodes =
        agpk::frequency_nodes(m.hamiltonian, nd.o0);
    const double n = static_cast<double>(nodes.omega.size());
    // Full closure when the stored-vector budget allows it; otherwise the
    // chain runs only far enough for the requested truncations and the
    // structural node count stands in for the Krylov dimension.
    const bool closure_feasible = (n + 6.0) * n <= kChainStorageCap;
    const ChainOutcome chain =
        run_chain(nodes, closure_feasible, max_order, false);
    const std::vector<double>& b = chain.lan.krylov.b;
    const long m_max = agpk::max_truncation_order(b.size());

    json truncated = json::array();
    json n_for_5pct;
    for (long order : orders) {
      const agpk::AgpSolution sol =
          agpk::solve_alpha(b, mu, std::min(order, m_max));
      const double norm = agpk::agp_norm_from_alpha(sol, def2);
      truncated.push_back({{"n", order}, {"norm", norm}});
      if (n_for_5pct.is_null() && std::abs(norm - exact) <= 0.05 * exact)
        n_for_5pct = order;
    }
    if (n_for_5pct.is_null())
      n_for_5pct = "not reached at N=" + fmt_long(max_order);

    json entry;
    entry["model"] = m.name;
    entry["params"] = m.parameters;
    entry["mu"] = mu;
    entry["hilbert_dim"] = m.hilbert_dim;
    entry["n_frequency_nodes"] = static_cast<long>(nodes.omega.size());
    entry["chain_closed"] = chain.closed;
    entry["n_lanczos_coefficients"] = static_cast<long>(b.size());
    entry["krylov_dimension"] = chain.closed
                                    ? json(chain.lan.krylov.k_dim)
                                    : json(static_cast<long>(nodes.omega.size()));
    entry["max_truncation_order"] = chain.closed ? json(m_max) : json(nullptr);
    entry["exact_norm"] = exact;
    entry["full_krylov_norm"] =
        chain.closed
            ? json(agpk::agp_norm_from_alpha(agpk::solve_alpha(b, mu, m_max),
                                             def2))
            : json(nullptr);
    entry["truncated_norms"] = truncated;
    entry["n_for_5pct"] = n_for_5pct;
    entries.push_back(std::move(entry));
  }
  write_output(c, json{{"models", entries}}.dump(2) + "\n");
  return 0;
}

// --------------------------------------------------------------------- main

void add_shared_flags(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--config", raw.config_path,
                  "JSON config file; flags override its keys");
  sub->add_option("--model", raw.model, "model name (or scaling family)");
  sub->add_option("--param", raw.params,
                  "model parameter key=value (repeatable)");
  sub->add_option("--mu", raw.mu, "regulator: auto or a float");
  sub->add_option("--truncate", raw.truncate,
                  "comma list of truncation orders and/or 'full'");
  sub->add_option("--method", raw.methods,
                  "comma list from krylov, exact, autocorr");
  sub->add_option("--out", raw.out, "output path ('-' = stdout)");
  sub->add_option("--format", raw.format, "csv or json");
  sub->add_option("--threads", raw.threads, "sweep worker count");
  sub->add_option("--seed", raw.seed,
                  "reserved; all algorithms are deterministic");
  sub->add_flag("--print-config", raw.print_config,
                "emit the fully resolved config as JSON and exit");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "adiabatic gauge potential batch runner: Krylov-chain, exact, and "
      "integral-transform norms as CSV/JSON tables"};
  app.require_subcommand(1);

  RawFlags raw;
  CLI::App* sub_lanczos = app.add_subcommand(
      "lanczos", "Lanczos coefficients b_n of one model");
  add_shared_flags(sub_lanczos, raw);
  sub_lanczos->add_option("--max-steps", raw.max_steps,
                          "chain step cap (< 0 runs to closure)");

  CLI::App* sub_agp = app.add_subcommand(
      "agp", "norm table for one model at fixed parameters");
  add_shared_flags(sub_agp, raw);

  CLI::App* sub_sweep =
      app.add_subcommand("sweep", "norm table over a linear parameter axis");
  add_shared_flags(sub_sweep, raw);
  sub_sweep->add_option("--sweep-param", raw.sweep_param,
                        "model parameter to sweep");
  sub_sweep->add_option("--from", raw.sweep_from, "axis start");
  sub_sweep->add_option("--to", raw.sweep_to, "axis end");
  sub_sweep->add_option("--steps", raw.sweep_steps, "axis point count (>= 1)");

  CLI::App* sub_scaling = app.add_subcommand(
      "scaling", "norm-vs-size study for an autocorrelation family");
  add_shared_flags(sub_scaling, raw);
  sub_scaling->add_option("--sizes", raw.sizes, "comma list of sizes");

  CLI::App* sub_report = app.add_subcommand(
      "truncation-report", "per-model truncation-convergence JSON summary");
  add_shared_flags(sub_report, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  CLI::App* active = nullptr;
  std::string name;
  for (CLI::App* sub :
       {sub_lanczos, sub_agp, sub_sweep, sub_scaling, sub_report}) {
    if (sub->parsed()) {
      active = sub;
      name = sub->get_name();
    }
  }

  try {
    const Config cfg = resolve_config(name, *active, raw);
    if (cfg.print_config) {
      const std::string text = resolved_config_json(cfg).dump(2) + "\n";
      std::fwrite(text.data(), 1, text.size(), stdout);
      return 0;
    }
    if (name == "lanczos") return run_lanczos(cfg);
    if (name == "agp") return run_agp(cfg);
    if (name == "sweep") return run_sweep(cfg);
    if (name == "scaling") return run_scaling(cfg);
    return run_truncation_report(cfg);
  } catch (const agpk::config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const agpk::resource_error& e) {
    std::fprintf(stderr, "resource error: %s\n", e.what());
    return 4;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "resource error: allocation failed\n");
    return 4;
  } catch (const agpk::numerical_error& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  }
}
