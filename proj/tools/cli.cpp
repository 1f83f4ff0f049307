#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rbfpu/bloocv.hpp"
#include "rbfpu/data.hpp"
#include "rbfpu/errors.hpp"
#include "rbfpu/model_io.hpp"
#include "rbfpu/partition.hpp"
#include "rbfpu/pu.hpp"
#include "rbfpu/text.hpp"
#include "sorting_partition.hpp"

namespace rbfpu::tools {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> parse_real_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (auto field : split_fields(text)) {
    auto v = parse_real(field);
    if (!v) throw ConfigError("bad number '" + std::string(field) + "' in " + what);
    out.push_back(*v);
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
  std::vector<std::size_t> out;
  for (auto field : split_fields(text)) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      throw ConfigError("bad count '" + std::string(field) + "' in " + what);
    out.push_back(v);
  }
  return out;
}

std::string sci(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(6) << v;
  return s.str();
}

std::string fixed3(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str();
}

// Options shared by the commands that read data.
struct InputOptions {
  std::optional<std::size_t> halton;
  std::optional<std::size_t> clustered;
  std::string input;
  std::size_t dim = 2;
  std::string function;
  double ratio = 0.02;
  std::string focus;
  std::optional<double> volume;
  std::optional<std::size_t> holdout;
};

struct ModelOptions {
  std::string kernel = "imq";
  std::string mode = "bloocv";
  std::optional<double> epsilon;
  std::size_t radii = 6;
  double h = 2.0;
  double t = 0.5;
  double eps_min = 0.1;
  double eps_max = 10.0;
  std::size_t eps_count = 30;
  std::string eps_spacing = "log";
  std::string epsilons;
  bool no_grow = false;
  std::size_t max_local_points = 2000;
  double max_residual = 5e-9;
  unsigned threads = 1;
};

struct EvalOptions {
  std::size_t grid = 40;
  std::string points;
  bool unit_box = false;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("--halton", o.halton, "Halton points in [0,1]^dim");
  cmd->add_option("--clustered", o.clustered, "clustered points in [0,1]^dim");
  cmd->add_option("--input", o.input, "point file");
  cmd->add_option("--dim", o.dim, "dimension of generated data")->check(CLI::PositiveNumber);
  cmd->add_option("--function", o.function, "test function f1|f2");
  cmd->add_option("--ratio", o.ratio, "innermost ring radius of clustered data");
  cmd->add_option("--focus", o.focus, "focus of clustered data, comma separated");
  cmd->add_option("--volume", o.volume, "domain volume (default: bounding box)");
  cmd->add_option("--holdout", o.holdout, "keep every k-th point for validation");
}

void add_model_options(CLI::App* cmd, ModelOptions& o) {
  cmd->add_option("--kernel", o.kernel, "imq|matern_c2|wendland_c2|wendland_c6");
  cmd->add_option("--mode", o.mode, "classic|bloocv");
  cmd->add_option("--epsilon", o.epsilon, "fixed shape parameter (classic)");
  cmd->add_option("--radii", o.radii, "radii per patch (P)");
  cmd->add_option("--h", o.h, "radius range factor");
  cmd->add_option("--t", o.t, "radius growth step");
  cmd->add_option("--eps-min", o.eps_min);
  cmd->add_option("--eps-max", o.eps_max);
  cmd->add_option("--eps-count", o.eps_count, "shape parameters per patch (Q)");
  cmd->add_option("--eps-spacing", o.eps_spacing, "log|linear");
  cmd->add_option("--epsilons", o.epsilons, "explicit shape parameters, comma separated");
  cmd->add_flag("--no-grow", o.no_grow, "keep the covering radius as the smallest radius");
  cmd->add_option("--max-local-points", o.max_local_points);
  cmd->add_option("--max-residual", o.max_residual,
                  "reject search cells whose relative solve residual exceeds this (inf disables)");
  cmd->add_option("--threads", o.threads)->check(CLI::PositiveNumber);
}

void add_eval_options(CLI::App* cmd, EvalOptions& o) {
  cmd->add_option("--grid", o.grid, "evaluation grid side")->check(CLI::PositiveNumber);
  cmd->add_option("--points", o.points, "evaluation point file");
  cmd->add_flag("--unit-box", o.unit_box, "lay the grid on the unit box");
}

struct Dataset {
  PointSet points;
  PointSet validation;  // empty unless a holdout was requested
  bool generated = false;
  std::optional<TestFunction> function;
};

Dataset load_input(const InputOptions& o) {
  const int sources = int(o.halton.has_value()) + int(o.clustered.has_value()) +
                      int(!o.input.empty());
  if (sources != 1)
    throw ConfigError("give exactly one input: --halton N, --clustered N or --input FILE");

  Dataset d;
  if (!o.function.empty()) d.function = parse_test_function(o.function);
  if (o.halton || o.clustered) {
    d.generated = true;
    if (!d.function) d.function = TestFunction::f1;
    if (o.halton) {
      d.points = halton(*o.halton, o.dim);
    } else {
      std::vector<double> focus(o.dim, 0.5);
      if (!o.focus.empty()) focus = parse_real_list(o.focus, "--focus");
      if (focus.size() != o.dim) throw ConfigError("--focus needs one coordinate per dimension");
      d.points = clustered(*o.clustered, focus, o.ratio);
    }
    sample(d.points, *d.function);
  } else {
    d.points = read_points(o.input);
    if (!d.points.has_values()) {
      if (!d.function) throw InputError(o.input + " has no values; pass --function");
      sample(d.points, *d.function);
    }
  }
  if (o.holdout) {
    auto split = holdout_every_kth(d.points, *o.holdout);
    d.points = std::move(split.train);
    d.validation = std::move(split.validation);
  }
  return d;
}

DomainSpec domain_from(const InputOptions& o) {
  DomainSpec domain;
  domain.volume = o.volume;
  return domain;
}

SearchGrid search_from(const ModelOptions& o) {
  SearchGrid s;
  s.radius_count = o.radii;
  s.radius_growth = o.h;
  s.growth_step = o.t;
  s.grow = !o.no_grow;
  s.max_residual = o.max_residual;
  if (!o.epsilons.empty()) {
    s.epsilons = parse_real_list(o.epsilons, "--epsilons");
  } else {
    EpsilonSpacing spacing;
    if (o.eps_spacing == "log") spacing = EpsilonSpacing::log;
    else if (o.eps_spacing == "linear") spacing = EpsilonSpacing::linear;
    else throw ConfigError("--eps-spacing must be log or linear");
    s.epsilons = epsilon_range(o.eps_min, o.eps_max, o.eps_count, spacing);
  }
  s.validate();
  return s;
}

struct FitOutcome {
  PuModel model;
  std::vector<PatchReport> reports;
  double seconds = 0.0;
};

FitOutcome run_fit(const PointSet& data, const std::string& mode, const ModelOptions& o,
                   const DomainSpec& domain) {
  const KernelFamily family = parse_kernel_family(o.kernel);
  FitOutcome out;
  const auto start = Clock::now();
  if (mode == "classic") {
    if (!o.epsilon) throw ConfigError("classic mode needs --epsilon");
    out.model = fit_classic(data, family, *o.epsilon, domain, o.threads);
    for (const auto& s : out.model.subdomains()) {
      PatchReport r;
      r.centre = s.centre;
      r.delta_j1 = s.radius;
      r.radius = s.radius;
      r.epsilon = s.epsilon;
      r.local_count = s.node_indices.size();
      r.loocv_error = std::numeric_limits<double>::quiet_NaN();
      out.reports.push_back(std::move(r));
    }
  } else if (mode == "bloocv") {
    BloocvConfig config;
    config.family = family;
    config.search = search_from(o);
    config.domain = domain;
    config.max_local_points = o.max_local_points;
    config.threads = o.threads;
    auto fit = fit_bloocv(data, config);
    out.model = std::move(fit.model);
    out.reports = std::move(fit.reports);
  } else {
    throw ConfigError("--mode must be classic or bloocv");
  }
  out.seconds = seconds_since(start);
  return out;
}

void save_report(const std::filesystem::path& path, const std::vector<PatchReport>& reports) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp);
    if (!f) throw FileError("cannot write " + tmp.string());
    write_report(f, reports);
    if (!f) throw FileError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

struct EvalSet {
  PointSet points;
  std::optional<std::vector<double>> truth;
  std::size_t row_length = 0;
};

// Grid or file evaluation points. `data_box` is used for the grid unless the
// unit box was requested.
EvalSet eval_points(const EvalOptions& e, const BoundingBox& data_box, bool unit_box,
                    const std::optional<TestFunction>& function) {
  EvalSet s;
  if (!e.points.empty()) {
    s.points = read_points(e.points);
  } else {
    const std::size_t dim = data_box.dim();
    std::vector<double> lo = data_box.mins, hi = data_box.maxs;
    if (unit_box || e.unit_box) {
      lo.assign(dim, 0.0);
      hi.assign(dim, 1.0);
    }
    s.points = uniform_grid(e.grid, lo, hi);
    s.row_length = e.grid;
  }
  if (s.points.has_values()) {
    s.truth = s.points.values();
  } else if (function) {
    std::vector<double> t(s.points.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = test_function(*function, s.points.point(i));
    s.truth = std::move(t);
  }
  return s;
}

// Reads `key=value` lines and turns them into `--key=value` arguments.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config " + path);
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    std::string key = trim(line.substr(0, eq));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    if (key.empty()) throw ParseError(lineno, "missing key in " + path);
    if (eq == std::string::npos) {
      args.push_back("--" + key);
    } else {
      args.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
  }
  return args;
}

// Splices config-file arguments in front of the command-line ones so that
// explicit flags win (every option keeps its last value).
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a path");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty() || rest.empty()) return rest;
  auto extra = config_arguments(config);
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void print_metrics(std::ostream& out, const std::vector<double>& predicted,
                   const std::vector<double>& truth) {
  const auto m = rmse_mae(predicted, truth);
  out << "RMSE " << sci(m.rmse) << "\nMAE " << sci(m.mae) << '\n';
}

}  // namespace

BenchRow bench_ips(std::size_t n, std::size_t repeats) {
  const PointSet points = halton(n, 2);
  const BoundingBox box = bounding_box(points);
  const double delta = make_covering(box, n, box.volume()).min_radius;
  BenchRow row;
  row.n = n;
  row.t_ips = row.t_sps = std::numeric_limits<double>::infinity();
  std::size_t sink = 0;
  for (std::size_t r = 0; r < std::max<std::size_t>(1, repeats); ++r) {
    auto start = Clock::now();
    BlockGrid grid(points, box, delta);
    row.t_ips = std::min(row.t_ips, seconds_since(start));
    sink += grid.block_count();

    start = Clock::now();
    auto sorted = sort_partition(points, box, delta);
    row.t_sps = std::min(row.t_sps, seconds_since(start));
    sink += sorted.buckets.size();
  }
  if (sink == 0) row.t_ips = 0.0;  // keeps the builds observable
  return row;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Partition of unity RBF interpolation with block-based LOOCV", "rbfpu"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  InputOptions input;
  ModelOptions model;
  EvalOptions evalopt;
  std::string model_path = "model.txt";
  std::string report_path = "report.csv";
  std::string output_path;
  std::string sizes = "10000,100000,200000";
  std::size_t repeats = 3;

  auto* fit = app.add_subcommand("fit", "fit a model and write it with its patch report");
  add_input_options(fit, input);
  add_model_options(fit, model);
  fit->add_option("--model", model_path, "model file to write");
  fit->add_option("--report", report_path, "per-patch report to write");

  auto* eval = app.add_subcommand("eval", "evaluate a saved model");
  eval->add_option("--model", model_path, "model file to read");
  eval->add_option("--function", input.function, "truth function f1|f2");
  eval->add_option("--output", output_path, "write predicted values");
  eval->add_option("--threads", model.threads)->check(CLI::PositiveNumber);
  add_eval_options(eval, evalopt);

  auto* compare = app.add_subcommand("compare", "classic against bloocv on the same data");
  add_input_options(compare, input);
  add_model_options(compare, model);
  add_eval_options(compare, evalopt);

  auto* bench = app.add_subcommand("bench-ips", "partition build time against sorting");
  bench->add_option("--sizes", sizes, "point counts, comma separated");
  bench->add_option("--repeats", repeats)->check(CLI::PositiveNumber);

  for (auto* cmd : {fit, eval, compare, bench})
    cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  try {
    auto args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (fit->parsed()) {
      const Dataset data = load_input(input);
      const auto result = run_fit(data.points, model.mode, model, domain_from(input));
      std::size_t empty = 0, fallback = 0;
      for (const auto& s : result.model.subdomains()) {
        empty += s.node_indices.empty();
        fallback += s.used_fallback;
      }
      std::size_t relaxed = 0;
      for (const auto& r : result.reports) relaxed += r.relaxed;
      save_report(report_path, result.reports);
      save_model(model_path, result.model);
      out << "N " << data.points.size() << " d " << result.model.subdomains().size() << " mode "
          << model.mode << " time_s " << fixed3(result.seconds);
      if (empty) out << " empty " << empty;
      if (fallback) out << " lu_fallback " << fallback;
      if (relaxed) out << " relaxed " << relaxed;
      out << '\n';
      if (!data.validation.empty()) {
        const auto predicted = evaluate(result.model, data.validation, model.threads);
        print_metrics(out, predicted, data.validation.values());
      }
    } else if (eval->parsed()) {
      const PuModel m = load_model(model_path);
      std::optional<TestFunction> function;
      if (!input.function.empty()) function = parse_test_function(input.function);
      const auto set = eval_points(evalopt, bounding_box(m.data()), false, function);
      const auto predicted = evaluate(m, set.points, model.threads);
      if (!output_path.empty()) write_grid(output_path, set.points, predicted, set.row_length);
      out << "points " << set.points.size() << '\n';
      if (set.truth) print_metrics(out, predicted, *set.truth);
    } else if (compare->parsed()) {
      if (!model.epsilon) throw ConfigError("compare needs --epsilon for the classic run");
      search_from(model);
      const Dataset data = load_input(input);
      EvalSet set;
      if (!data.validation.empty()) {
        set.points = data.validation;
        set.truth = data.validation.values();
      } else {
        set = eval_points(evalopt, bounding_box(data.points), data.generated, data.function);
      }
      if (!set.truth) throw ConfigError("compare needs a truth: --function or --holdout");
      out << "N mode RMSE MAE time_s\n";
      for (const std::string mode : {"classic", "bloocv"}) {
        const auto start = Clock::now();
        const auto result = run_fit(data.points, mode, model, domain_from(input));
        const auto predicted = evaluate(result.model, set.points, model.threads);
        const double seconds = seconds_since(start);
        const auto m = rmse_mae(predicted, *set.truth);
        out << data.points.size() << ' ' << mode << ' ' << sci(m.rmse) << ' ' << sci(m.mae)
            << ' ' << fixed3(seconds) << '\n';
      }
    } else if (bench->parsed()) {
      const auto ns = parse_size_list(sizes, "--sizes");
      out << "N t_ips t_sps ratio\n";
      for (auto n : ns) {
        const auto row = bench_ips(n, repeats);
        out << n << ' ' << sci(row.t_ips) << ' ' << sci(row.t_sps) << ' '
            << fixed3(row.t_ips / row.t_sps) << '\n';
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace rbfpu::tools
