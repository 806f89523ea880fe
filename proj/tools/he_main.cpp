#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "he/arcs.hpp"
#include "he/ergodic.hpp"
#include "he/expsum.hpp"
#include "he/hardy.hpp"
#include "he/io.hpp"
#include "he/parallel.hpp"
#include "he/variation.hpp"

// Command-line front end: every experiment is a subcommand with reproducible
// seeds, flags overridable from a JSON --config file, and deterministic CSV
// or JSON output (identical configs give byte-identical bytes).

namespace {

using nlohmann::ordered_json;

// flag/value problems exit with code 2, runtime failures with 1
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

double str_to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw UsageError("cannot parse number '" + s + "'");
  return v;
}

std::int64_t str_to_int(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || s.empty())
    throw UsageError("cannot parse integer '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == delim) {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  for (const auto& tok : out) require(!tok.empty(), "empty entry in list '" + text + "'");
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  for (const auto& tok : split_list(text, ',')) out.push_back(str_to_double(tok));
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& text) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split_list(text, ',')) out.push_back(str_to_int(tok));
  return out;
}

// accepts "a", "bi", "a+bi", "a-bi", with bare "i" meaning 1i
std::complex<double> parse_complex(const std::string& tok) {
  std::string s = tok;
  if (s.empty()) throw UsageError("empty complex literal");
  if (s.back() == 'i' || s.back() == 'I') {
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k < s.size(); ++k)
      if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') split = k;
    if (split == std::string::npos) {
      if (s.empty() || s == "+") return {0.0, 1.0};
      if (s == "-") return {0.0, -1.0};
      return {0.0, str_to_double(s)};
    }
    const std::string head = s.substr(0, split), tail = s.substr(split);
    const double im = tail == "+" ? 1.0 : tail == "-" ? -1.0 : str_to_double(tail);
    return {str_to_double(head), im};
  }
  return {str_to_double(s), 0.0};
}

std::vector<std::complex<double>> parse_complex_list(const std::string& text) {
  std::vector<std::complex<double>> out;
  for (const auto& tok : split_list(text, ',')) out.push_back(parse_complex(tok));
  return out;
}

// semicolon-separated Hardy functions, e.g. "1*t^1.5;1*t^2.5"
he::HardyFamily parse_family(const std::string& text) {
  require(!text.empty(), "--family is required");
  he::HardyFamily family;
  for (const auto& part : split_list(text, ';')) family.push_back(he::parse_hardy(part));
  return family;
}

// comma-separated "lo:hi" pairs, one per torus coordinate
std::vector<std::pair<double, double>> parse_arcs(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  for (const auto& tok : split_list(text, ',')) {
    const auto colon = tok.find(':');
    require(colon != std::string::npos && tok.rfind(':') == colon,
            "arc '" + tok + "' must look like lo:hi");
    out.emplace_back(str_to_double(tok.substr(0, colon)), str_to_double(tok.substr(colon + 1)));
  }
  return out;
}

Eigen::ArrayXd to_array(const std::vector<double>& v) {
  Eigen::ArrayXd a(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) a[static_cast<Eigen::Index>(i)] = v[i];
  return a;
}

// Registers flags on a subcommand and remembers how to fill each one from a
// JSON config object when the command line left it unset.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* cmd) : cmd_(cmd) {
    cmd_->add_option("--config", config_path_, "JSON file with flag values; explicit flags win");
  }

  template <class T>
  CLI::Option* num(const std::string& name, T& var, const std::string& help) {
    auto* opt = cmd_->add_option(name, var, help);
    add_bind(opt, name, [&var](const ordered_json& v) { var = v.get<T>(); });
    return opt;
  }

  CLI::Option* str(const std::string& name, std::string& var, const std::string& help) {
    auto* opt = cmd_->add_option(name, var, help);
    add_bind(opt, name, [&var](const ordered_json& v) {
      if (v.is_string()) {
        var = v.get<std::string>();
        return;
      }
      if (v.is_array()) {  // numeric lists may be JSON arrays
        std::string joined;
        for (const auto& e : v) {
          if (!joined.empty()) joined += ',';
          joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        var = joined;
        return;
      }
      var = v.dump();
    });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& var, const std::string& help) {
    auto* opt = cmd_->add_flag(name, var, help);
    add_bind(opt, name, [&var](const ordered_json& v) { var = v.get<bool>(); });
    return opt;
  }

  // Loads the config file (if any) and fills every bound flag the command
  // line did not set.
  void inject() {
    if (config_path_.empty()) return;
    std::ifstream in(config_path_);
    if (!in) throw std::runtime_error("cannot open config file '" + config_path_ + "'");
    ordered_json cfg;
    try {
      cfg = ordered_json::parse(in);
    } catch (const std::exception& e) {
      throw UsageError("config file '" + config_path_ + "': " + e.what());
    }
    for (auto& b : binds_) {
      if (b.opt->count() > 0) continue;
      if (const ordered_json* v = find(cfg, b.key)) {
        try {
          b.apply(*v);
        } catch (const std::exception&) {
          throw UsageError("config key '" + b.key + "' has the wrong type");
        }
        filled_.insert(b.opt);
      }
    }
  }

  bool given(const CLI::Option* opt) const {
    return opt->count() > 0 || filled_.count(opt) > 0;
  }

 private:
  struct Bind {
    CLI::Option* opt;
    std::string key;
    std::function<void(const ordered_json&)> apply;
  };

  void add_bind(CLI::Option* opt, const std::string& name,
                std::function<void(const ordered_json&)> apply) {
    std::string key = name;
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    binds_.push_back({opt, std::move(key), std::move(apply)});
  }

  static const ordered_json* find(const ordered_json& cfg, const std::string& key) {
    if (cfg.contains(key)) return &cfg.at(key);
    std::string alt = key;
    for (auto& c : alt)
      if (c == '-') c = '_';
    if (alt != key && cfg.contains(alt)) return &cfg.at(alt);
    if (key == "nmax" && cfg.contains("n_max")) return &cfg.at("n_max");
    return nullptr;
  }

  CLI::App* cmd_;
  std::string config_path_;
  std::vector<Bind> binds_;
  std::set<const CLI::Option*> filled_;
};

struct CommonFlags {
  std::string format, out = "-";
  int threads = 0;
};

void add_common(FlagSet& fs, CommonFlags& c, const std::string& default_format) {
  c.format = default_format;
  fs.str("--format", c.format, "output format, csv or json");
  fs.str("--out", c.out, "output path, '-' for stdout");
  fs.num("--threads", c.threads, "worker threads (falls back to HE_THREADS, then 1)");
}

void apply_common(const CommonFlags& c) {
  int t = c.threads;
  if (t <= 0) {
    const char* env = std::getenv("HE_THREADS");
    t = env ? std::atoi(env) : 1;
  }
  he::set_num_threads(t);
  require(c.format == "csv" || c.format == "json", "--format must be csv or json");
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Floor-orbit averaging experiments: exponential-sum multipliers, variation "
      "norms, jump counts, equidistribution densities and arc decompositions"};
  app.require_subcommand(1);

  // expsum-scan
  auto* scan_cmd = app.add_subcommand(
      "expsum-scan", "Jittered frequency-grid scan of the averaging multiplier "
                     "|m_N| with major-arc box membership");
  FlagSet scan_fs(scan_cmd);
  std::string scan_family;
  std::int64_t scan_N = 0;
  int scan_l = 0, scan_grid = 32;
  std::uint64_t scan_seed = 0;
  CommonFlags scan_common;
  auto* scan_o_family = scan_fs.str("--family", scan_family,
                                    "semicolon-separated Hardy functions, e.g. \"1*t^1.5\"");
  auto* scan_o_N = scan_fs.num("--N", scan_N, "orbit length");
  scan_fs.num("--l", scan_l, "major-arc box scale exponent");
  scan_fs.num("--grid", scan_grid, "grid points per frequency dimension");
  scan_fs.num("--seed", scan_seed, "jitter seed");
  add_common(scan_fs, scan_common, "csv");

  // variation
  auto* var_cmd = app.add_subcommand(
      "variation", "r-variation seminorm of a complex sequence with the optimal jump chain");
  FlagSet var_fs(var_cmd);
  std::string var_values, var_indices;
  double var_r = 2.0;
  CommonFlags var_common;
  auto* var_o_values = var_fs.str("--values", var_values,
                                  "comma-separated values, real or a+bi complex literals");
  var_fs.str("--indices", var_indices, "comma-separated increasing scales (default 1..n)");
  var_fs.num("--r", var_r, "variation exponent, r >= 1");
  add_common(var_fs, var_common, "json");

  // jumps
  auto* jump_cmd = app.add_subcommand(
      "jumps", "delta-jump counts of the multiplier trace across a scale set, "
               "with r-variation and a log-log slope fit");
  FlagSet jump_fs(jump_cmd);
  std::string jump_family, jump_xi, jump_alphas, jump_beta, jump_x0, jump_deltas, jump_scales;
  double jump_lambda = 2.0, jump_r = 2.5;
  std::int64_t jump_nmax = 0;
  bool jump_all = false;
  CommonFlags jump_common;
  auto* jump_o_family = jump_fs.str("--family", jump_family, "semicolon-separated Hardy functions");
  auto* jump_o_xi = jump_fs.str("--xi", jump_xi, "frequency, comma-separated coordinates");
  auto* jump_o_alphas = jump_fs.str("--alphas", jump_alphas,
                                    "rotation amounts; with --beta replaces --xi by alphas*beta");
  auto* jump_o_beta = jump_fs.str("--beta", jump_beta, "character frequency for --alphas");
  jump_fs.str("--x0", jump_x0, "basepoint on the torus (default 0)");
  jump_fs.num("--lambda", jump_lambda, "lacunarity ratio of the scale set");
  auto* jump_o_nmax = jump_fs.num("--nmax", jump_nmax, "largest scale");
  jump_fs.flag("--all-scales", jump_all, "use every scale 1..nmax instead of the lacunary subset");
  auto* jump_o_scales = jump_fs.str("--scales", jump_scales,
                                    "explicit comma-separated scale list (overrides the scale set)");
  auto* jump_o_deltas = jump_fs.str("--deltas", jump_deltas, "comma-separated jump sizes");
  jump_fs.num("--r", jump_r, "variation exponent for the diagnostic");
  add_common(jump_fs, jump_common, "csv");

  // equi
  auto* equi_cmd = app.add_subcommand(
      "equi", "orbit occupation densities of product arcs under commuting circle rotations");
  FlagSet equi_fs(equi_cmd);
  std::string equi_family, equi_alphas, equi_x0, equi_arcs, equi_scales;
  std::int64_t equi_N = 0;
  CommonFlags equi_common;
  auto* equi_o_family = equi_fs.str("--family", equi_family, "semicolon-separated Hardy functions");
  auto* equi_o_alphas = equi_fs.str("--alphas", equi_alphas, "rotation amounts, one per coordinate");
  equi_fs.str("--x0", equi_x0, "basepoint on the torus (default 0)");
  auto* equi_o_arcs = equi_fs.str("--arcs", equi_arcs,
                                  "comma-separated lo:hi arcs, one per coordinate");
  auto* equi_o_scales = equi_fs.str("--scales", equi_scales, "comma-separated scales to report");
  auto* equi_o_N = equi_fs.num("--N", equi_N, "single scale shorthand for --scales");
  add_common(equi_fs, equi_common, "csv");

  // arcs
  auto* arcs_cmd = app.add_subcommand(
      "arcs", "minor-arc operator ratio sweep of the cyclic averaging operator");
  FlagSet arcs_fs(arcs_cmd);
  std::string arcs_family, arcs_N, arcs_l;
  int arcs_grid = 256, arcs_trials = 32;
  std::uint64_t arcs_seed = 0;
  CommonFlags arcs_common;
  auto* arcs_o_family = arcs_fs.str("--family", arcs_family, "semicolon-separated Hardy functions");
  auto* arcs_o_N = arcs_fs.str("--N", arcs_N, "comma-separated orbit lengths");
  auto* arcs_o_l = arcs_fs.str("--l", arcs_l, "comma-separated major-arc scale exponents");
  arcs_fs.num("--grid", arcs_grid, "DFT grid size, a power of two");
  arcs_fs.num("--trials", arcs_trials, "random trial functions per (N, l)");
  arcs_fs.num("--seed", arcs_seed, "trial seed");
  add_common(arcs_fs, arcs_common, "csv");

  // orbit
  auto* orbit_cmd = app.add_subcommand(
      "orbit", "integer floor orbit floor(P_i(n)) of a Hardy-field family");
  FlagSet orbit_fs(orbit_cmd);
  std::string orbit_family;
  std::int64_t orbit_N = 0;
  CommonFlags orbit_common;
  auto* orbit_o_family = orbit_fs.str("--family", orbit_family,
                                      "semicolon-separated Hardy functions");
  auto* orbit_o_N = orbit_fs.num("--N", orbit_N, "orbit length");
  add_common(orbit_fs, orbit_common, "csv");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 2;
    }

    std::string text;
    const CommonFlags* common = nullptr;

    if (app.got_subcommand(scan_cmd)) {
      scan_fs.inject();
      apply_common(scan_common);
      common = &scan_common;
      require(scan_fs.given(scan_o_family), "--family is required");
      require(scan_fs.given(scan_o_N), "--N is required");
      const he::HardyFamily family = parse_family(scan_family);
      const auto rows = he::expsum_scan(family, scan_N, scan_l, scan_grid, scan_seed);
      if (scan_common.format == "csv") {
        text = he::scan_csv(rows);
      } else {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
          ordered_json r;
          r["N"] = row.N;
          r["l"] = row.l;
          ordered_json xi = ordered_json::array();
          for (Eigen::Index i = 0; i < row.xi.size(); ++i) xi.push_back(row.xi[i]);
          r["xi"] = std::move(xi);
          r["abs_m"] = row.abs_m;
          r["in_major_arc"] = row.in_major_arc;
          arr.push_back(std::move(r));
        }
        text = dump_json(arr);
      }
    } else if (app.got_subcommand(var_cmd)) {
      var_fs.inject();
      apply_common(var_common);
      common = &var_common;
      require(var_fs.given(var_o_values), "--values is required");
      he::IndexedSequence seq;
      seq.values = parse_complex_list(var_values);
      if (var_indices.empty()) {
        seq = he::make_sequence(std::move(seq.values));
      } else {
        seq.indices = parse_ints(var_indices);
      }
      const he::VariationResult res = he::vr_norm(seq, var_r);
      if (var_common.format == "json") {
        ordered_json j;
        j["value"] = res.value;
        j["sup_term"] = res.sup_term;
        j["jump_term"] = res.jump_term;
        j["witness"] = res.witness;
        text = dump_json(j);
      } else {
        // csv emits the witness chain as a sequence
        he::IndexedSequence chain;
        std::size_t pos = 0;
        for (std::int64_t scale : res.witness) {
          while (pos < seq.indices.size() && seq.indices[pos] != scale) ++pos;
          chain.indices.push_back(scale);
          chain.values.push_back(seq.values[pos]);
        }
        text = chain.indices.empty() ? he::csv_row({"index", "re", "im"})
                                     : he::sequence_csv(chain);
      }
    } else if (app.got_subcommand(jump_cmd)) {
      jump_fs.inject();
      apply_common(jump_common);
      common = &jump_common;
      require(jump_fs.given(jump_o_family), "--family is required");
      require(jump_fs.given(jump_o_deltas), "--deltas is required");
      const he::HardyFamily family = parse_family(jump_family);
      require(!(jump_fs.given(jump_o_xi) &&
                (jump_fs.given(jump_o_alphas) || jump_fs.given(jump_o_beta))),
              "--xi conflicts with --alphas/--beta");
      const bool via_system = !jump_fs.given(jump_o_xi);
      Eigen::ArrayXd beta;
      he::TorusPoint xi;
      if (via_system) {
        require(jump_fs.given(jump_o_alphas) && jump_fs.given(jump_o_beta),
                "either --xi or both --alphas and --beta are required");
        const Eigen::ArrayXd alphas = to_array(parse_doubles(jump_alphas));
        beta = to_array(parse_doubles(jump_beta));
        require(alphas.size() == beta.size(), "--alphas and --beta sizes differ");
        xi = he::TorusPoint::reduce(Eigen::ArrayXd(alphas * beta));
      } else {
        xi = he::TorusPoint::reduce(to_array(parse_doubles(jump_xi)));
      }
      const std::vector<double> deltas = parse_doubles(jump_deltas);
      he::JumpReport report;
      if (jump_fs.given(jump_o_scales)) {
        report = he::jump_experiment(family, xi, parse_ints(jump_scales), deltas, jump_r);
      } else {
        require(jump_fs.given(jump_o_nmax), "--nmax is required without --scales");
        const he::ScaleSet set = jump_all ? he::ScaleSet::all(jump_nmax)
                                          : he::ScaleSet::lacunary(jump_lambda, jump_nmax);
        report = he::jump_experiment(family, xi, set, deltas, jump_r);
      }
      if (via_system && !jump_x0.empty()) {
        const Eigen::ArrayXd x0 = to_array(parse_doubles(jump_x0));
        require(x0.size() == beta.size(), "--x0 size must match --beta");
        report.limit *= he::unit_phase((beta * x0).sum());  // unimodular basepoint factor
      }
      if (jump_common.format == "csv") {
        text = he::jump_report_csv(report);
      } else {
        ordered_json j;
        j["deltas"] = report.deltas;
        j["counts"] = report.counts;
        j["vr"] = report.vr_value;
        j["limit_re"] = report.limit.real();
        j["limit_im"] = report.limit.imag();
        j["slope"] = report.slope;
        text = dump_json(j);
      }
    } else if (app.got_subcommand(equi_cmd)) {
      equi_fs.inject();
      apply_common(equi_common);
      common = &equi_common;
      require(equi_fs.given(equi_o_family), "--family is required");
      require(equi_fs.given(equi_o_alphas), "--alphas is required");
      require(equi_fs.given(equi_o_arcs), "--arcs is required");
      const he::HardyFamily family = parse_family(equi_family);
      const Eigen::ArrayXd alphas = to_array(parse_doubles(equi_alphas));
      he::TorusSystem system{alphas, Eigen::ArrayXd::Zero(alphas.size())};
      const Eigen::ArrayXd x0 = equi_x0.empty() ? Eigen::ArrayXd::Zero(alphas.size())
                                                : to_array(parse_doubles(equi_x0));
      const auto arcs = parse_arcs(equi_arcs);
      std::vector<std::int64_t> scales;
      if (equi_fs.given(equi_o_scales)) {
        scales = parse_ints(equi_scales);
      } else {
        require(equi_fs.given(equi_o_N), "--scales or --N is required");
        scales = {equi_N};
      }
      const std::vector<double> densities =
          he::equidistribution_trace(system, family, x0, arcs, scales);
      if (equi_common.format == "csv") {
        text = he::csv_row({"N", "density"});
        for (std::size_t i = 0; i < scales.size(); ++i)
          text += he::csv_row({he::fmt_int(scales[i]), he::fmt_real(densities[i])});
      } else {
        ordered_json j;
        j["scales"] = scales;
        j["densities"] = densities;
        text = dump_json(j);
      }
    } else if (app.got_subcommand(arcs_cmd)) {
      arcs_fs.inject();
      apply_common(arcs_common);
      common = &arcs_common;
      require(arcs_fs.given(arcs_o_family), "--family is required");
      require(arcs_fs.given(arcs_o_N), "--N is required");
      require(arcs_fs.given(arcs_o_l), "--l is required");
      const he::HardyFamily family = parse_family(arcs_family);
      he::ArcConfig cfg;
      cfg.grid_size = arcs_grid;
      std::vector<he::RatioRow> rows;
      for (std::int64_t N : parse_ints(arcs_N)) {
        for (std::int64_t l : parse_ints(arcs_l)) {
          const he::OperatorRatio r = he::minor_arc_operator_ratio(
              cfg, family, N, static_cast<int>(l), arcs_trials, arcs_seed);
          rows.push_back({N, static_cast<int>(l), r.trials_used, r.max_ratio, r.median_ratio});
        }
      }
      if (arcs_common.format == "csv") {
        text = he::ratio_csv(rows);
      } else {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
          ordered_json r;
          r["N"] = row.N;
          r["l"] = row.l;
          r["trials"] = row.trials;
          r["max_ratio"] = row.max_ratio;
          r["median_ratio"] = row.median_ratio;
          arr.push_back(std::move(r));
        }
        text = dump_json(arr);
      }
    } else if (app.got_subcommand(orbit_cmd)) {
      orbit_fs.inject();
      apply_common(orbit_common);
      common = &orbit_common;
      require(orbit_fs.given(orbit_o_family), "--family is required");
      require(orbit_fs.given(orbit_o_N), "--N is required");
      const he::HardyFamily family = parse_family(orbit_family);
      std::vector<std::vector<std::int64_t>> orbits;
      for (const auto& f : family) orbits.push_back(he::floor_orbit(f, orbit_N));
      if (orbit_common.format == "csv") {
        std::vector<std::string> header{"n"};
        if (orbits.size() == 1) {
          header.push_back("value");
        } else {
          for (std::size_t i = 0; i < orbits.size(); ++i)
            header.push_back("value_" + std::to_string(i + 1));
        }
        text = he::csv_row(header);
        for (std::int64_t n = 1; n <= orbit_N; ++n) {
          std::vector<std::string> cells{he::fmt_int(n)};
          for (const auto& orb : orbits)
            cells.push_back(he::fmt_int(orb[static_cast<std::size_t>(n - 1)]));
          text += he::csv_row(cells);
        }
      } else {
        ordered_json j;
        j["n_max"] = orbit_N;
        j["orbits"] = orbits;
        text = dump_json(j);
      }
    }

    he::write_output(text, common->out);
    return 0;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
