#include "doa/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "doa/csv.hpp"
#include "doa/errors.hpp"

namespace doa {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(const std::string& label, int line, const std::string& msg) {
  throw ConfigError(label + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

ConfigDoc parse_config_text(const std::string& text, const std::string& label) {
  ConfigDoc doc;
  doc.label = label;
  std::istringstream stream(text);
  std::string raw;
  int lineno = 0;
  ConfigSection* current = nullptr;
  while (std::getline(stream, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(label, lineno, "unterminated section header");
      const std::string inner = trim(line.substr(1, line.size() - 2));
      if (inner.empty()) fail(label, lineno, "empty section header");
      ConfigSection sec;
      sec.line = lineno;
      const std::size_t sp = inner.find_first_of(" \t");
      if (sp == std::string::npos) {
        sec.name = inner;
      } else {
        sec.name = inner.substr(0, sp);
        sec.arg = trim(inner.substr(sp + 1));
      }
      doc.sections.push_back(std::move(sec));
      current = &doc.sections.back();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(label, lineno, "expected 'key = value'");
    if (!current) fail(label, lineno, "entry before any [section]");
    ConfigEntry entry;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    entry.line = lineno;
    if (entry.key.empty()) fail(label, lineno, "empty key");
    if (entry.value.empty()) fail(label, lineno, "empty value for key '" + entry.key + "'");
    current->entries.push_back(std::move(entry));
  }
  return doc;
}

namespace {

// Strict typed access to one section; unread keys are an error.
class SectionReader {
 public:
  SectionReader(const ConfigDoc& doc, const ConfigSection& sec)
      : doc_(doc), sec_(sec) {}

  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string str(const std::string& key) {
    const ConfigEntry* e = require(key);
    return e->value;
  }

  double num(const std::string& key) {
    const ConfigEntry* e = require(key);
    return parse_checked(*e);
  }

  double num_or(const std::string& key, double fallback) {
    const ConfigEntry* e = find_mark(key);
    return e ? parse_checked(*e) : fallback;
  }

  long long integer(const std::string& key) {
    const ConfigEntry* e = require(key);
    try {
      return parse_int(e->value);
    } catch (const ConfigError& ex) {
      fail(doc_.label, e->line, ex.what());
    }
  }

  long long integer_or(const std::string& key, long long fallback) {
    const ConfigEntry* e = find_mark(key);
    if (!e) return fallback;
    try {
      return parse_int(e->value);
    } catch (const ConfigError& ex) {
      fail(doc_.label, e->line, ex.what());
    }
  }

  bool flag_or(const std::string& key, bool fallback) {
    const ConfigEntry* e = find_mark(key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    fail(doc_.label, e->line, "expected true|false for '" + key + "'");
  }

  std::string str_or(const std::string& key, const std::string& fallback) {
    const ConfigEntry* e = find_mark(key);
    return e ? e->value : fallback;
  }

  std::vector<double> nums(const std::string& key, std::size_t count) {
    const ConfigEntry* e = require(key);
    const auto toks = split_ws(e->value);
    if (toks.size() != count) {
      fail(doc_.label, e->line,
           "'" + key + "' expects " + std::to_string(count) + " numbers, got " +
               std::to_string(toks.size()));
    }
    return parse_all(*e, toks);
  }

  std::vector<double> nums_any(const std::string& key) {
    const ConfigEntry* e = require(key);
    return parse_all(*e, split_ws(e->value));
  }

  int entry_line(const std::string& key) const {
    const ConfigEntry* e = find(key);
    return e ? e->line : sec_.line;
  }

  // Errors on entries no reader consumed: catches typos and stale keys.
  void finish() const {
    for (const ConfigEntry& e : sec_.entries) {
      if (!used_.count(e.key)) {
        fail(doc_.label, e.line, "unknown key '" + e.key + "' in section [" + sec_.name + "]");
      }
    }
  }

  const ConfigSection& section() const { return sec_; }
  const std::string& label() const { return doc_.label; }

 private:
  const ConfigEntry* find(const std::string& key) const {
    for (const ConfigEntry& e : sec_.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  const ConfigEntry* find_mark(const std::string& key) {
    const ConfigEntry* e = find(key);
    if (e) used_.insert(key);
    return e;
  }

  const ConfigEntry* require(const std::string& key) {
    const ConfigEntry* e = find_mark(key);
    if (!e) fail(doc_.label, sec_.line, "missing key '" + key + "' in section [" + sec_.name + "]");
    return e;
  }

  double parse_checked(const ConfigEntry& e) {
    try {
      return parse_double(e.value);
    } catch (const ConfigError& ex) {
      fail(doc_.label, e.line, ex.what());
    }
  }

  std::vector<double> parse_all(const ConfigEntry& e, const std::vector<std::string>& toks) {
    std::vector<double> out;
    out.reserve(toks.size());
    for (const auto& t : toks) {
      try {
        out.push_back(parse_double(t));
      } catch (const ConfigError& ex) {
        fail(doc_.label, e.line, ex.what());
      }
    }
    return out;
  }

  const ConfigDoc& doc_;
  const ConfigSection& sec_;
  std::set<std::string> used_;
};

Interval read_interval(SectionReader& r, const std::string& key, Interval fallback) {
  if (!r.has(key)) return fallback;
  const auto v = r.nums(key, 2);
  if (!(v[0] <= v[1])) {
    fail(r.label(), r.entry_line(key), "'" + key + "' bounds must satisfy lo <= hi");
  }
  return Interval{v[0], v[1]};
}

RuleTable read_rule_table(SectionReader& r) {
  RuleTable t;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    const std::string row = label_name(i);
    const auto toks = split_ws(r.str(row));
    if (toks.size() != kNumLabels) {
      fail(r.label(), r.entry_line(row),
           "rule row '" + row + "' expects " + std::to_string(kNumLabels) + " labels");
    }
    for (std::size_t j = 0; j < kNumLabels; ++j) {
      try {
        t.cells[i][j] = static_cast<std::uint8_t>(label_from_name(toks[j]));
      } catch (const std::invalid_argument& ex) {
        fail(r.label(), r.entry_line(row), ex.what());
      }
    }
  }
  return t;
}

void read_pd_overrides(SectionReader& r, PdParams& pd) {
  pd.ke0 = r.num_or("ke0_per_min", pd.ke0);
  pd.ec50 = r.num_or("ec50_mg_per_l", pd.ec50);
  pd.gamma = r.num_or("gamma", pd.gamma);
  pd.bis0 = r.num_or("bis0", pd.bis0);
}

void read_controller_law(SectionReader& r, ControllerConfig& cfg) {
  cfg.kp = r.num_or("kp", cfg.kp);
  cfg.ki = r.num_or("ki", cfg.ki);
  cfg.kd = r.num_or("kd", cfg.kd);
  cfg.alpha = r.num_or("alpha", cfg.alpha);
  cfg.beta = r.num_or("beta", cfg.beta);
  cfg.gain_ranges.kp_max = r.num_or("kp_max", cfg.gain_ranges.kp_max);
  cfg.gain_ranges.ki_max = r.num_or("ki_max", cfg.gain_ranges.ki_max);
  cfg.gain_ranges.kd_max = r.num_or("kd_max", cfg.gain_ranges.kd_max);
  cfg.u_max = r.num_or("u_max_mg_per_min", cfg.u_max);
  cfg.memory_len = static_cast<std::size_t>(r.integer_or("memory_len", static_cast<long long>(cfg.memory_len)));
  cfg.anti_windup = r.flag_or("anti_windup", cfg.anti_windup);
  if (r.has("mf")) {
    const auto v = r.nums("mf", kMfVectorLen);
    std::copy(v.begin(), v.end(), cfg.mf_vector.begin());
  }
}

WoaConfig::ExploreRef explore_ref_from_string(const std::string& s, const std::string& label,
                                              int line) {
  if (s == "rand") return WoaConfig::ExploreRef::rand;
  if (s == "best") return WoaConfig::ExploreRef::best;
  fail(label, line, "explore_ref must be rand|best");
}

}  // namespace

const ControllerBounds& ExperimentConfig::bounds_for(ControllerVariant v) const {
  switch (v) {
    case ControllerVariant::pid: return bounds_pid;
    case ControllerVariant::fopid: return bounds_fopid;
    case ControllerVariant::fofpid: return bounds_fofpid;
  }
  return bounds_pid;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  const ConfigDoc doc = parse_config_text(read_file(path), path.string());
  ExperimentConfig cfg;
  bool seen_controller = false;

  for (const ConfigSection& sec : doc.sections) {
    SectionReader r(doc, sec);
    if (sec.name == "sim") {
      cfg.sim.horizon_min = r.num_or("horizon_min", cfg.sim.horizon_min);
      cfg.sim.dt_min = r.num_or("dt_min", cfg.sim.dt_min);
      cfg.sim.bis_target = r.num_or("bis_target", cfg.sim.bis_target);
      cfg.sim.band_low = r.num_or("band_low_bis", cfg.sim.band_low);
      cfg.sim.band_high = r.num_or("band_high_bis", cfg.sim.band_high);
      cfg.sim.settle_tol = r.num_or("settle_tol_bis", cfg.sim.settle_tol);
    } else if (sec.name == "disturbance") {
      Disturbance d;
      d.onset_min = r.num("onset_min");
      d.magnitude_bis = r.num("magnitude_bis");
      d.duration_min = r.num("duration_min");
      cfg.sim.disturbance = d;
    } else if (sec.name == "pd") {
      read_pd_overrides(r, cfg.pd);
    } else if (sec.name == "patient") {
      if (sec.arg.empty()) fail(doc.label, sec.line, "[patient] needs an integer id argument");
      PatientProfile p;
      try {
        p.id = static_cast<int>(parse_int(sec.arg));
      } catch (const ConfigError&) {
        fail(doc.label, sec.line, "patient id '" + sec.arg + "' is not an integer");
      }
      p.age_years = r.num("age_years");
      p.weight_kg = r.num("weight_kg");
      p.height_cm = r.num("height_cm");
      try {
        p.sex = sex_from_string(r.str("sex"));
      } catch (const std::invalid_argument& ex) {
        fail(doc.label, r.entry_line("sex"), ex.what());
      }
      p.pd = cfg.pd;
      read_pd_overrides(r, p.pd);
      try {
        p.validate();
      } catch (const std::invalid_argument& ex) {
        fail(doc.label, sec.line, ex.what());
      }
      cfg.patients.push_back(p);
    } else if (sec.name == "controller") {
      seen_controller = true;
      read_controller_law(r, cfg.base);
      if (r.has("variant")) {
        try {
          cfg.base.variant = variant_from_string(r.str("variant"));
        } catch (const std::invalid_argument& ex) {
          fail(doc.label, r.entry_line("variant"), ex.what());
        }
      }
    } else if (sec.name == "woa") {
      cfg.woa.pop_size = static_cast<std::size_t>(r.integer_or("pop_size", static_cast<long long>(cfg.woa.pop_size)));
      cfg.woa.max_iter = static_cast<std::size_t>(r.integer_or("max_iter", static_cast<long long>(cfg.woa.max_iter)));
      cfg.woa.seed = static_cast<std::uint64_t>(r.integer_or("seed", static_cast<long long>(cfg.woa.seed)));
      cfg.woa.spiral_b = r.num_or("spiral_b", cfg.woa.spiral_b);
      if (r.has("explore_ref")) {
        cfg.woa.explore_ref = explore_ref_from_string(r.str("explore_ref"), doc.label,
                                                      r.entry_line("explore_ref"));
      }
    } else if (sec.name == "bounds") {
      ControllerBounds* b = nullptr;
      if (sec.arg == "pid") b = &cfg.bounds_pid;
      else if (sec.arg == "fopid") b = &cfg.bounds_fopid;
      else if (sec.arg == "fofpid") b = &cfg.bounds_fofpid;
      else fail(doc.label, sec.line, "[bounds] argument must be pid|fopid|fofpid");
      b->kp = read_interval(r, "kp", b->kp);
      b->ki = read_interval(r, "ki", b->ki);
      b->kd = read_interval(r, "kd", b->kd);
      b->kp_max = read_interval(r, "kp_max", b->kp_max);
      b->ki_max = read_interval(r, "ki_max", b->ki_max);
      b->kd_max = read_interval(r, "kd_max", b->kd_max);
      b->alpha = read_interval(r, "alpha", b->alpha);
      b->beta = read_interval(r, "beta", b->beta);
      b->mf_in = read_interval(r, "mf_in", b->mf_in);
      b->mf_out = read_interval(r, "mf_out", b->mf_out);
    } else if (sec.name == "rules") {
      RuleTable t = read_rule_table(r);
      if (sec.arg == "kp") cfg.base.rules.kp = t;
      else if (sec.arg == "ki") cfg.base.rules.ki = t;
      else if (sec.arg == "kd") cfg.base.rules.kd = t;
      else fail(doc.label, sec.line, "[rules] argument must be kp|ki|kd");
    } else {
      fail(doc.label, sec.line, "unknown section [" + sec.name + "]");
    }
    r.finish();
  }

  if (cfg.patients.empty()) {
    throw ConfigError(doc.label + ": no [patient N] sections found");
  }
  (void)seen_controller;
  try {
    cfg.sim.validate();
    cfg.pd.validate();
    cfg.base.dt = cfg.sim.dt_min;
    cfg.base.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(doc.label + ": " + ex.what());
  }
  return cfg;
}

// --- controller files -------------------------------------------------------

std::string format_full(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

namespace {

void write_rule_section(std::ostringstream& out, const std::string& arg, const RuleTable& t) {
  out << "\n[rules " << arg << "]\n";
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    out << label_name(i) << " =";
    for (std::size_t j = 0; j < kNumLabels; ++j) out << ' ' << label_name(t.cells[i][j]);
    out << '\n';
  }
}

std::string interval_str(const Interval& iv) {
  return format_full(iv.lo) + " " + format_full(iv.hi);
}

}  // namespace

std::string controller_file_text(const ControllerConfig& cfg, const TuneAudit* audit) {
  std::ostringstream out;
  out << "# controller description (machine written)\n";
  out << "[controller]\n";
  out << "variant = " << to_string(cfg.variant) << '\n';
  if (cfg.variant != ControllerVariant::fofpid) {
    out << "kp = " << format_full(cfg.kp) << '\n';
    out << "ki = " << format_full(cfg.ki) << '\n';
    out << "kd = " << format_full(cfg.kd) << '\n';
  }
  if (cfg.variant != ControllerVariant::pid) {
    out << "alpha = " << format_full(cfg.alpha) << '\n';
    out << "beta = " << format_full(cfg.beta) << '\n';
  }
  if (cfg.variant == ControllerVariant::fofpid) {
    out << "kp_max = " << format_full(cfg.gain_ranges.kp_max) << '\n';
    out << "ki_max = " << format_full(cfg.gain_ranges.ki_max) << '\n';
    out << "kd_max = " << format_full(cfg.gain_ranges.kd_max) << '\n';
    out << "mf =";
    for (double v : cfg.mf_vector) out << ' ' << format_full(v);
    out << '\n';
  }
  out << "u_max_mg_per_min = " << format_full(cfg.u_max) << '\n';
  out << "memory_len = " << cfg.memory_len << '\n';
  out << "anti_windup = " << (cfg.anti_windup ? "true" : "false") << '\n';

  if (cfg.variant == ControllerVariant::fofpid) {
    write_rule_section(out, "kp", cfg.rules.kp);
    write_rule_section(out, "ki", cfg.rules.ki);
    write_rule_section(out, "kd", cfg.rules.kd);
  }

  if (audit) {
    out << "\n[audit]\n";
    out << "pop_size = " << audit->pop_size << '\n';
    out << "max_iter = " << audit->max_iter << '\n';
    out << "seed = " << audit->seed << '\n';
    out << "spiral_b = " << format_full(audit->spiral_b) << '\n';
    out << "explore_ref = "
        << (audit->explore_ref == WoaConfig::ExploreRef::rand ? "rand" : "best") << '\n';
    out << "best_cost = " << format_full(audit->best_cost) << '\n';
    out << "converged = " << (audit->converged ? "true" : "false") << '\n';
    out << "evals = " << audit->evals << '\n';
    out << "explore_count = " << audit->explore_count << '\n';
    out << "encircle_count = " << audit->encircle_count << '\n';
    out << "spiral_count = " << audit->spiral_count << '\n';
    const ControllerBounds& b = audit->bounds;
    out << "bounds_kp = " << interval_str(b.kp) << '\n';
    out << "bounds_ki = " << interval_str(b.ki) << '\n';
    out << "bounds_kd = " << interval_str(b.kd) << '\n';
    out << "bounds_kp_max = " << interval_str(b.kp_max) << '\n';
    out << "bounds_ki_max = " << interval_str(b.ki_max) << '\n';
    out << "bounds_kd_max = " << interval_str(b.kd_max) << '\n';
    out << "bounds_alpha = " << interval_str(b.alpha) << '\n';
    out << "bounds_beta = " << interval_str(b.beta) << '\n';
    out << "bounds_mf_in = " << interval_str(b.mf_in) << '\n';
    out << "bounds_mf_out = " << interval_str(b.mf_out) << '\n';
    out << "best_unit_position =";
    for (double v : audit->best_unit_position) out << ' ' << format_full(v);
    out << '\n';
  }
  return out.str();
}

void save_controller_file(const std::filesystem::path& path, const ControllerConfig& cfg,
                          const TuneAudit* audit) {
  atomic_write(path, controller_file_text(cfg, audit));
}

ControllerFile load_controller_file(const std::filesystem::path& path) {
  const ConfigDoc doc = parse_config_text(read_file(path), path.string());
  ControllerFile file;
  bool seen_controller = false;

  for (const ConfigSection& sec : doc.sections) {
    SectionReader r(doc, sec);
    if (sec.name == "controller") {
      seen_controller = true;
      if (r.has("variant")) {
        try {
          file.config.variant = variant_from_string(r.str("variant"));
        } catch (const std::invalid_argument& ex) {
          fail(doc.label, r.entry_line("variant"), ex.what());
        }
      }
      read_controller_law(r, file.config);
    } else if (sec.name == "rules") {
      RuleTable t = read_rule_table(r);
      if (sec.arg == "kp") file.config.rules.kp = t;
      else if (sec.arg == "ki") file.config.rules.ki = t;
      else if (sec.arg == "kd") file.config.rules.kd = t;
      else fail(doc.label, sec.line, "[rules] argument must be kp|ki|kd");
    } else if (sec.name == "audit") {
      TuneAudit a;
      a.pop_size = static_cast<std::size_t>(r.integer("pop_size"));
      a.max_iter = static_cast<std::size_t>(r.integer("max_iter"));
      a.seed = static_cast<std::uint64_t>(r.integer("seed"));
      a.spiral_b = r.num("spiral_b");
      a.explore_ref = explore_ref_from_string(r.str("explore_ref"), doc.label,
                                              r.entry_line("explore_ref"));
      a.best_cost = r.num("best_cost");
      a.converged = r.flag_or("converged", true);
      a.evals = static_cast<std::uint64_t>(r.integer("evals"));
      a.explore_count = static_cast<std::uint64_t>(r.integer("explore_count"));
      a.encircle_count = static_cast<std::uint64_t>(r.integer("encircle_count"));
      a.spiral_count = static_cast<std::uint64_t>(r.integer("spiral_count"));
      auto iv = [&](const std::string& key) {
        const auto v = r.nums(key, 2);
        return Interval{v[0], v[1]};
      };
      a.bounds.kp = iv("bounds_kp");
      a.bounds.ki = iv("bounds_ki");
      a.bounds.kd = iv("bounds_kd");
      a.bounds.kp_max = iv("bounds_kp_max");
      a.bounds.ki_max = iv("bounds_ki_max");
      a.bounds.kd_max = iv("bounds_kd_max");
      a.bounds.alpha = iv("bounds_alpha");
      a.bounds.beta = iv("bounds_beta");
      a.bounds.mf_in = iv("bounds_mf_in");
      a.bounds.mf_out = iv("bounds_mf_out");
      if (r.has("best_unit_position")) {
        a.best_unit_position = r.nums_any("best_unit_position");
      }
      file.audit = a;
    } else {
      fail(doc.label, sec.line, "unknown section [" + sec.name + "]");
    }
    r.finish();
  }

  if (!seen_controller) throw ConfigError(doc.label + ": missing [controller] section");
  if (file.audit) file.audit->variant = file.config.variant;
  try {
    file.config.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(doc.label + ": " + ex.what());
  }
  return file;
}

}  // namespace doa
