#include "fireline_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fireline/errors.hpp"
#include "fireline/event_sources.hpp"
#include "fireline/lattice_ffp.hpp"
#include "fireline/limit_lffp.hpp"
#include "fireline/parallel.hpp"
#include "fireline/rescale_couple.hpp"
#include "fireline/stats.hpp"
#include "fireline/text_io.hpp"
#include "fireline_cli/config.hpp"
#include "fireline_cli/output.hpp"
#include "fireline_cli/version.hpp"

namespace fireline::cli {

namespace {

using json = nlohmann::ordered_json;

class Stages {
 public:
  Stages(std::string command, std::ostream& log) : command_(std::move(command)), log_(log) {}

  template <class F>
  decltype(auto) run(const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      Stages* self;
      const std::string* name;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        self->timings_.push_back({*name, s});
        self->log_ << fmt::format("[{}] {}: {:.3f} s\n", self->command_, *name, s);
      }
    } record{this, &name, start};
    return std::forward<F>(f)();
  }

  [[nodiscard]] const std::vector<StageTiming>& timings() const { return timings_; }

 private:
  std::string command_;
  std::ostream& log_;
  std::vector<StageTiming> timings_;
};

std::string csv_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

void require_positive(const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(fmt::format("{} must be positive, got {}", key, v));
}

std::size_t replicas_of(const Config& c, const std::string& key, long long fallback) {
  const long long n = c.integer(key, fallback);
  if (n < 1) throw ConfigError(fmt::format("{} must be at least 1, got {}", key, n));
  return static_cast<std::size_t>(n);
}

void require_probes(const std::vector<double>& probes, double a) {
  for (double x : probes) {
    if (!(x > -a && x < a)) throw ConfigError(fmt::format("probe {} not inside (-{}, {})", x, a, a));
  }
}

std::string replica_dir(std::size_t i) { return fmt::format("replica_{:04d}", i); }

std::string to_text(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream s;
  writer(s);
  return s.str();
}

// ---------------------------------------------------------------- lattice

void simulate_lattice(const Config& c, const CommandOptions& opt, OutputDir& out, Stages& stages) {
  c.require_known({"lambda", "A", "T", "replicas", "seed", "probe", "snapshot", "ignitions"});
  const double lambda = c.number("lambda");
  validate_lambda(lambda);
  const double a = c.number("A");
  const double horizon = c.number("T");
  require_positive("A", a);
  require_positive("T", horizon);
  const std::size_t replicas = replicas_of(c, "replicas", 1);
  const std::uint64_t seed = c.seed();
  auto probes = c.numbers("probe");
  if (!c.has("probe")) probes = {0.0};
  require_probes(probes, a);
  const std::string source = c.text("ignitions", "marks");
  if (source != "marks" && source != "internal") {
    throw ConfigError(fmt::format("ignitions must be 'marks' or 'internal', got '{}'", source));
  }
  const double factor = time_factor(lambda);
  RunOptions options;
  options.probes = probes;
  options.verify = opt.verify;
  for (double s : c.numbers("snapshot")) {
    if (!(s >= 0.0 && s <= horizon)) throw ConfigError(fmt::format("snapshot {} outside [0, {}]", s, horizon));
    options.snapshot_times.push_back(s * factor);
  }

  std::vector<LatticeConfig> configs(replicas);
  std::vector<MarkSet> marks(replicas);
  stages.run("validate", [&] {
    for (std::size_t i = 0; i < replicas; ++i) {
      const std::uint64_t rs = replica_seed(seed, i);
      auto& cfg = configs[i];
      cfg = make_lattice_config(lambda, a, horizon * factor, rs);
      if (source == "marks") {
        marks[i] = sample_marks(horizon, a, {rs, "marks"});
        cfg.ignition_source = IgnitionSource::schedule;
        cfg.ignitions = marks_to_ignitions(marks[i], lambda, cfg.half_sites);
      }
      cfg.validate();
    }
  });

  std::vector<LatticeRun> runs(replicas);
  stages.run("simulate", [&] {
    parallel_for(replicas, opt.threads, [&](std::size_t i) { runs[i] = run(configs[i], options); });
  });

  stages.run("write", [&] {
    for (std::size_t i = 0; i < replicas; ++i) {
      const auto dir = replica_dir(i);
      const auto& r = runs[i];
      out.write(dir + "/burns.csv", to_text([&](std::ostream& s) { write_burns_csv(s, r.burns); }));
      for (std::size_t k = 0; k < r.probes.size(); ++k) {
        out.write(fmt::format("{}/probe_{}.csv", dir, k),
                  to_text([&](std::ostream& s) { write_probe_csv(s, r.probes[k]); }));
      }
      out.write(dir + "/snapshots.txt", to_text([&](std::ostream& s) { write_snapshots(s, r.snapshots); }));
      if (source == "marks") {
        out.write(dir + "/marks.csv", to_text([&](std::ostream& s) { write_marks_csv(s, marks[i]); }));
        out.write(dir + "/ignitions.csv",
                  to_text([&](std::ostream& s) { write_ignitions_csv(s, configs[i].ignitions); }));
      }
    }
  });
}

// ---------------------------------------------------------------- limit

void simulate_limit(const Config& c, const CommandOptions& opt, OutputDir& out, Stages& stages) {
  c.require_known({"A", "T", "seed", "marks", "marks_file", "probe", "dump"});
  const double a = c.number("A");
  const double horizon = c.number("T");
  require_positive("A", a);
  require_positive("T", horizon);
  const std::uint64_t seed = c.seed();
  auto probes = c.numbers("probe");
  if (!c.has("probe")) probes = {0.0};
  require_probes(probes, a);
  const std::string mode = c.text("marks", c.has("marks_file") ? "file" : "sampled");
  std::vector<double> dumps = c.numbers("dump");
  for (double s : dumps) {
    if (!(s >= 0.0 && s <= horizon)) throw ConfigError(fmt::format("dump time {} outside [0, {}]", s, horizon));
  }

  MarkSet marks;
  stages.run("validate", [&] {
    if (mode == "sampled") {
      marks = sample_marks(horizon, a, {seed, "marks"});
    } else if (mode == "empty") {
      marks = MarkSet{horizon, a, {}};
    } else if (mode == "file") {
      auto path = std::filesystem::path(c.text("marks_file"));
      if (path.is_relative()) path = opt.config.parent_path() / path;
      std::ifstream in(path);
      if (!in) throw IoError(fmt::format("cannot read marks file '{}'", path.string()));
      marks = read_marks_csv(in, horizon, a);
    } else {
      throw ConfigError(fmt::format("marks must be 'sampled', 'empty' or 'file', got '{}'", mode));
    }
    for (const auto& m : marks.marks) {
      if (!(m.x > -a && m.x < a)) throw ConfigError(fmt::format("mark x={} not inside (-{}, {})", m.x, a, a));
    }
  });

  std::optional<Timeline> timeline;
  std::vector<RescaledTrajectory> paths;
  stages.run("simulate", [&] {
    timeline.emplace(simulate(a, horizon, marks));
    if (opt.verify) {
      timeline->state_at(0.0).check_invariants();
      for (std::size_t k = 0; k < timeline->events().size(); ++k) timeline->state_after(k).check_invariants();
    }
    paths = limit_trajectories(a, horizon, marks, probes);
  });

  if (dumps.empty()) {
    dumps.push_back(0.0);
    for (const auto& e : timeline->events()) dumps.push_back(e.mark.t);
    dumps.push_back(horizon);
  }
  stages.run("write", [&] {
    out.write("marks.csv", to_text([&](std::ostream& s) { write_marks_csv(s, marks); }));
    out.write("timeline.csv", to_text([&](std::ostream& s) { write_timeline_csv(s, *timeline); }));
    out.write("states.txt", to_text([&](std::ostream& s) { write_state_dump(s, *timeline, dumps); }));
    for (std::size_t k = 0; k < paths.size(); ++k) {
      out.write(fmt::format("probe_{}.csv", k), to_text([&](std::ostream& s) { write_trajectory_csv(s, paths[k]); }));
    }
  });
}

// ---------------------------------------------------------------- couple

void couple(const Config& c, const CommandOptions& opt, OutputDir& out, Stages& stages) {
  c.require_known({"lambda", "A", "T", "replicas", "seed", "probe", "bootstrap"});
  const auto lambdas = c.numbers("lambda");
  if (lambdas.empty()) throw ConfigError("missing required key 'lambda'");
  for (double l : lambdas) validate_lambda(l);
  const double a = c.number("A");
  const double horizon = c.number("T");
  require_positive("A", a);
  require_positive("T", horizon);
  const std::size_t replicas = replicas_of(c, "replicas", 200);
  const std::uint64_t seed = c.seed();
  auto probes = c.numbers("probe");
  if (!c.has("probe")) probes = {0.0};
  require_probes(probes, a);
  const long long resamples = c.integer("bootstrap", 1000);
  if (resamples < 2) throw ConfigError(fmt::format("bootstrap must be at least 2, got {}", resamples));
  stages.run("validate", [] {});

  // Replica i uses the same mark and growth seeds for every lambda.
  std::vector<std::vector<PathDistance>> distances(lambdas.size() * replicas);
  stages.run("simulate", [&] {
    parallel_for(distances.size(), opt.threads, [&](std::size_t job) {
      const std::size_t li = job / replicas;
      const std::size_t i = job % replicas;
      const auto run = coupled_run(lambdas[li], a, horizon, replica_seed(seed, 2 * i),
                                   replica_seed(seed, 2 * i + 1), probes);
      for (const auto& p : run.probes) distances[job].push_back(p.distance);
    });
  });

  stages.run("write", [&] {
    std::string lines;
    json grid = json::array();
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      for (std::size_t k = 0; k < probes.size(); ++k) {
        std::vector<double> totals;
        for (std::size_t i = 0; i < replicas; ++i) {
          const auto& d = distances[li * replicas + i][k];
          json rec;
          rec["lambda"] = lambdas[li];
          rec["A"] = a;
          rec["T"] = horizon;
          rec["seed"] = seed;
          rec["replica"] = i;
          rec["mark_seed"] = replica_seed(seed, 2 * i);
          rec["growth_seed"] = replica_seed(seed, 2 * i + 1);
          rec["probe"] = probes[k];
          rec["delta_T"] = d.total();
          rec["sup_z"] = d.sup_z;
          rec["int_D"] = d.int_d;
          lines += rec.dump() + '\n';
          totals.push_back(d.total());
        }
        const auto m = median_with_bootstrap(totals, static_cast<std::size_t>(resamples), seed);
        grid.push_back({{"lambda", lambdas[li]},
                        {"probe", probes[k]},
                        {"n", replicas},
                        {"median_delta_T", m.median},
                        {"bootstrap_se", m.bootstrap_se}});
      }
    }
    json summary;
    summary["A"] = a;
    summary["T"] = horizon;
    summary["seed"] = seed;
    summary["replicas"] = replicas;
    summary["bootstrap"] = resamples;
    summary["medians"] = grid;
    out.write("couple_runs.jsonl", lines);
    out.write("couple_summary.json", summary.dump(2) + '\n');
  });
}

// ---------------------------------------------------------------- stats

json estimate_json(const TailEstimate& e) {
  json j;
  j["estimator"] = e.estimator;
  json params;
  if (e.lambda) params["lambda"] = *e.lambda;
  params["t"] = e.t;
  if (e.threshold_b) params["B"] = *e.threshold_b;
  if (e.window_a) params["window"] = {*e.window_a, *e.window_b};
  j["params"] = params;
  j["p_hat"] = e.p_hat;
  j["se"] = e.se;
  j["n"] = e.n;
  j["successes"] = e.successes;
  if (e.lambda) j["lambda"] = *e.lambda;
  j["t"] = e.t;
  if (e.threshold_b) j["B"] = *e.threshold_b;
  if (e.window_a) j["window"] = {*e.window_a, *e.window_b};
  j["in_regime"] = e.in_regime;
  return j;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError(fmt::format("window '{}' must be written a:b", text));
  return {parse_double(trim(parts[0])), parse_double(trim(parts[1]))};
}

void stats(const Config& c, const CommandOptions& opt, OutputDir& out, Stages& stages) {
  c.require_known({"lambda", "t", "A", "replicas", "seed", "window", "B", "vacant", "lffp_t", "lffp_A",
                   "lffp_T", "lffp_B", "lffp_replicas", "atom_t", "atom_z", "atom_window", "atom_A",
                   "atom_replicas", "loc_A", "loc_T", "loc_lambda", "loc_replicas"});
  const std::uint64_t seed = c.seed();

  // Lattice block: one batch of origin cluster sizes per lambda feeds every
  // lattice estimator.
  const auto lambdas = c.numbers("lambda");
  for (double l : lambdas) validate_lambda(l);
  const double t = c.number("t", 3.0);
  if (!(t >= 0.0)) throw ConfigError(fmt::format("t must be >= 0, got {}", t));
  const double box = c.number("A", 5.0);
  require_positive("A", box);
  const std::size_t replicas = replicas_of(c, "replicas", 1000);
  std::vector<std::pair<double, double>> windows;
  for (const auto& w : c.texts("window")) {
    windows.push_back(parse_window(w));
    const auto [wa, wb] = windows.back();
    if (!(wa >= 0.0 && wa < wb && wb < 1.0)) {
      throw ConfigError(fmt::format("window must satisfy 0 <= a < b < 1, got ({}, {})", wa, wb));
    }
  }
  const auto bs = c.numbers("B");
  for (double b : bs) require_positive("B", b);
  const bool vacant = c.text("vacant", "yes") == "yes";

  // Limit length tail.
  const auto lffp_bs = c.numbers("lffp_B");
  const double lffp_t = c.number("lffp_t", 2.0);
  const double lffp_a = c.number("lffp_A", 30.0);
  const double lffp_h = c.number("lffp_T", 2.5);
  const std::size_t lffp_n = replicas_of(c, "lffp_replicas", 10000);
  if (!lffp_bs.empty()) {
    require_positive("lffp_T", lffp_h);
    if (lffp_t > lffp_h) throw ConfigError(fmt::format("lffp_t={} beyond lffp_T={}", lffp_t, lffp_h));
    for (double b : lffp_bs) {
      require_positive("lffp_B", b);
      if (lffp_a < b + 4.0) {
        throw ConfigError(fmt::format("lffp_A={} too small for lffp_B={} (need A >= B + 4)", lffp_a, b));
      }
    }
  }

  // Atomlessness.
  const auto atom_z = c.numbers("atom_z");
  std::vector<std::pair<double, double>> atom_windows;
  for (const auto& w : c.texts("atom_window")) atom_windows.push_back(parse_window(w));
  const bool atoms = !atom_z.empty() || !atom_windows.empty();
  const double atom_t = c.number("atom_t", 3.0);
  const double atom_a = c.number("atom_A", 5.0);
  const std::size_t atom_n = replicas_of(c, "atom_replicas", 10000);
  if (atoms) {
    require_positive("atom_t", atom_t);
    require_positive("atom_A", atom_a);
  }

  // Localization.
  const auto loc_as = c.numbers("loc_A");
  const double loc_t = c.number("loc_T", 3.0);
  const std::size_t loc_n = replicas_of(c, "loc_replicas", 500);
  std::vector<LocalizationProcess> processes{LocalizationProcess::limit()};
  for (double l : c.numbers("loc_lambda")) {
    validate_lambda(l);
    processes.push_back(LocalizationProcess::lattice(l));
  }
  for (double la : loc_as) {
    if (!(la >= 2.0)) throw ConfigError(fmt::format("localization needs A >= 2, got {}", la));
  }
  if (!loc_as.empty()) require_positive("loc_T", loc_t);
  stages.run("validate", [] {});

  std::vector<TailEstimate> estimates;
  json atom_json;
  json loc_json = json::array();
  stages.run("simulate", [&] {
    const MonteCarloPlan plan{replicas, seed, opt.threads};
    for (double l : lambdas) {
      const auto sizes = lattice_origin_sizes(l, t, box, plan);
      for (const auto& [wa, wb] : windows) estimates.push_back(window_from_sizes(sizes, l, t, wa, wb));
      for (double b : bs) estimates.push_back(tail_from_sizes(sizes, l, t, b));
      if (vacant) estimates.push_back(vacancy_from_sizes(sizes, l, t));
    }
    if (!lffp_bs.empty()) {
      const auto lengths = lffp_origin_lengths(lffp_t, lffp_a, lffp_h, {lffp_n, seed, opt.threads});
      for (double b : lffp_bs) estimates.push_back(length_tail_from(lengths, lffp_t, b, lffp_a));
    }
    if (atoms) {
      const auto report = lffp_z_atomless(atom_t, atom_z, atom_windows, atom_a, {atom_n, seed, opt.threads});
      json hits = json::array();
      for (const auto& h : report.atoms) hits.push_back({{"z", h.z}, {"hits", h.hits}});
      json ws = json::array();
      for (const auto& w : report.windows) {
        ws.push_back(estimate_json(w));
        estimates.push_back(w);
      }
      atom_json = {{"t", report.t}, {"n", report.n}, {"atoms", hits}, {"windows", ws}};
    }
    for (const auto& process : processes) {
      for (double la : loc_as) {
        const auto r = localization_coincidence(la, loc_t, process, {loc_n, seed, opt.threads});
        json j{{"process", r.process}};
        j["lambda"] = r.lambda ? json(*r.lambda) : json(nullptr);
        j["A"] = r.half_width;
        j["T"] = r.horizon;
        j["n"] = r.replicas;
        j["coincident"] = r.coincident;
        j["fraction"] = r.fraction;
        j["se"] = r.se;
        loc_json.push_back(j);
      }
    }
  });

  stages.run("write", [&] {
    std::string csv = "estimator,lambda,t,a,b,B,p_hat,se,n\n";
    json all = json::array();
    for (const auto& e : estimates) {
      csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", e.estimator, csv_number(e.lambda), format_double(e.t),
                         csv_number(e.window_a), csv_number(e.window_b), csv_number(e.threshold_b),
                         format_double(e.p_hat), format_double(e.se), e.n);
      all.push_back(estimate_json(e));
    }
    json reports;
    reports["seed"] = seed;
    reports["estimates"] = all;
    if (atoms) reports["atomless"] = atom_json;
    if (!loc_as.empty()) reports["localization"] = loc_json;
    out.write("stats.csv", csv);
    out.write("reports.json", reports.dump(2) + '\n');
  });
}

using Handler = void (*)(const Config&, const CommandOptions&, OutputDir&, Stages&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"simulate-lattice", &simulate_lattice},
      {"simulate-limit", &simulate_limit},
      {"couple", &couple},
      {"stats", &stats},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"simulate-lattice", "simulate-limit", "couple", "stats"};
  return names;
}

int run_command(const std::string& command, const CommandOptions& options, std::ostream& log,
                std::ostream& err) {
  try {
    const auto it = handlers().find(command);
    if (it == handlers().end()) throw ConfigError(fmt::format("unknown command '{}'", command));
    if (options.threads < 1) throw ConfigError("--threads must be at least 1");

    Config config = Config::load(options.config);
    if (const char* env = std::getenv("FIRELINE_SEED"); env != nullptr && *env != '\0') {
      parse_int(env);
      config.set("seed", env);
    }
    const std::uint64_t seed = config.seed();

    OutputDir out(options.out);
    Stages stages(command, log);
    it->second(config, options, out, stages);
    write_manifest(out, {command, sha256_hex(command + '\n' + config.canonical()), seed, stages.timings()});
    return kOk;
  } catch (const ConfigError& e) {
    err << "fireline: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "fireline: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "fireline: I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const InvariantError& e) {
    err << "fireline: invariant violation: " << e.what() << '\n';
    return kInvariantError;
  } catch (const std::exception& e) {
    err << "fireline: internal error: " << e.what() << '\n';
    return kInvariantError;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Forest fire simulations on the line: lattice process, limit process, coupling, statistics"};
  app.set_version_flag("--version", kCodeVersion);
  app.require_subcommand(1);

  CommandOptions options;
  const std::map<std::string, std::string> help{
      {"simulate-lattice", "Run lattice replicas and write burn logs, probe records and snapshots"},
      {"simulate-limit", "Simulate the limit process on one mark set and export its timeline"},
      {"couple", "Drive lattice and limit processes with shared marks across a lambda grid"},
      {"stats", "Monte Carlo estimates of cluster-size laws and box localization"},
  };
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", options.config, "Config file (key = value lines)")->required();
    sub->add_option("--out", options.out, "Output directory")->required();
    sub->add_option("--threads", options.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verify", options.verify, "Full invariant scans after every event");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }
  const auto subs = app.get_subcommands();
  return run_command(subs.front()->get_name(), options, std::clog, std::cerr);
}

}  // namespace fireline::cli
