#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctmc/errors.hpp"
#include "ctmc/model_io.hpp"
#include "ctmc/monte_carlo.hpp"
#include "ctmc/path.hpp"
#include "ctmc/pricing.hpp"
#include "ctmc/recovery.hpp"
#include "ctmc/replication.hpp"
#include "ctmc/two_state.hpp"

namespace ctmc::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw InputError("'" + token + "' is not a number");
    out.push_back(v);
    token.clear();
  };
  for (char c : spec) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return out;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string piece;
  while (std::getline(ss, piece, ':')) {
    const auto v = parse_list(piece);
    if (v.size() != 1) throw InputError("grid '" + spec + "' must be start:stop:step");
    parts.push_back(v.front());
  }
  if (parts.size() != 3) throw InputError("grid '" + spec + "' must be start:stop:step");
  const double start = parts[0];
  const double stop = parts[1];
  const double step = parts[2];
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw InputError("grid '" + spec + "' needs finite bounds and a positive step");
  }
  if (stop < start) throw InputError("grid '" + spec + "' is empty");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = start + static_cast<double>(k) * step;
  return grid;
}

namespace {

struct CommonOptions {
  std::string model;
  std::string out;
  std::string manifest;
};

struct ClaimOptions {
  std::string payoff;
  bool bond = false;
  std::string arrow_debreu;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// Routes table output either to --out or to the default stream, and writes
// the run manifest next to --out.
class Sink {
 public:
  Sink(const CommonOptions& common, std::ostream& fallback) : common_(common), fallback_(fallback) {
    if (!common.out.empty()) {
      file_.open(common.out, std::ios::binary | std::ios::trunc);
      if (!file_) throw InputError("cannot open output file '" + common.out + "'");
    }
  }

  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

  void finish(json manifest) {
    if (file_.is_open()) file_.close();
    std::string path = common_.manifest;
    if (path.empty() && !common_.out.empty()) path = common_.out + ".manifest.json";
    if (path.empty()) return;
    manifest["output"] = common_.out.empty() ? json(nullptr) : json(common_.out);
    manifest["finished_at"] = utc_now();
    std::ofstream m(path, std::ios::binary | std::ios::trunc);
    if (!m) throw InputError("cannot open manifest file '" + path + "'");
    m << manifest.dump(2) << '\n';
  }

 private:
  const CommonOptions& common_;
  std::ostream& fallback_;
  std::ofstream file_;
};

json base_manifest(const CLI::App& sub, const CommonOptions& common,
                   const std::vector<std::string>& args) {
  json m;
  m["tool"] = "ctmc";
  m["version"] = CTMC_VERSION;
  m["command"] = sub.get_name();
  m["arguments"] = args;
  json params = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    const auto& res = opt->results();
    params[opt->get_name()] = res.size() == 1 ? json(res.front()) : json(res);
  }
  m["parameters"] = params;
  if (!common.model.empty()) {
    m["model"] = {{"path", common.model}, {"fnv1a64", fnv1a64_file(common.model)}};
  }
  m["started_at"] = utc_now();
  return m;
}

State parse_state(const Model& model, const std::string& text) {
  if (const auto hit = model.states().find(text)) return *hit;
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v < 1 || v > model.size()) {
    throw InputError("unknown state '" + text + "' (use a label or an index 1.." +
                     std::to_string(model.size()) + ")");
  }
  return static_cast<State>(v - 1);
}

Vector claim_values(const Model& model, const ClaimOptions& claim) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const int chosen = (claim.bond ? 1 : 0) + (claim.payoff.empty() ? 0 : 1) +
                     (claim.arrow_debreu.empty() ? 0 : 1);
  if (chosen != 1) throw InputError("specify exactly one of --payoff, --bond, --arrow-debreu");
  if (claim.bond) return Vector::Ones(n);
  if (!claim.arrow_debreu.empty()) {
    Vector v = Vector::Zero(n);
    v(static_cast<Eigen::Index>(parse_state(model, claim.arrow_debreu))) = 1.0;
    return v;
  }
  const auto values = parse_list(claim.payoff);
  if (static_cast<Eigen::Index>(values.size()) != n) {
    throw InputError("--payoff has " + std::to_string(values.size()) + " values, model has " +
                     std::to_string(n) + " states");
  }
  return Eigen::Map<const Vector>(values.data(), n);
}

std::optional<JumpStructure> jump_structure(const Model& model, const std::string& name) {
  if (name.empty() || name == "full") return std::nullopt;
  if (name == "birth-death") return JumpStructure::birth_death(model.size());
  throw InputError("--jumps must be 'full' or 'birth-death'");
}

void add_common(CLI::App* sub, CommonOptions& common, bool needs_model) {
  auto* m = sub->add_option("--model", common.model, "Model file");
  if (needs_model) m->required();
  sub->add_option("--out", common.out, "Write the table to this file (manifest alongside)");
  sub->add_option("--manifest", common.manifest, "Manifest path (default: <out>.manifest.json)");
}

void add_claim(CLI::App* sub, ClaimOptions& claim) {
  sub->add_option("--payoff", claim.payoff, "Payoff per state, comma separated");
  sub->add_flag("--bond", claim.bond, "Zero-coupon bond (payoff 1 in every state)");
  sub->add_option("--arrow-debreu", claim.arrow_debreu,
                  "Arrow-Debreu claim on the given state (label or 1-based index)");
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t k = 0; k < cells.size(); ++k) os << (k ? "," : "") << cells[k];
  os << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interest-rate derivatives on a finite-state CTMC short rate", "ctmc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CTMC_VERSION));

  CommonOptions common;
  ClaimOptions claim;
  double t = 0.0;
  double T = 0.0;
  double Tb = 0.0;
  std::optional<double> caplet_strike;
  std::optional<double> floorlet_strike;
  bool ad_matrix = false;
  std::string grid;
  std::string basis;
  std::string jumps;
  std::string measure = "q";
  std::size_t paths = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::string initial = "1";
  double dt = 0.0;
  double lambda = 0.5;
  double rate = 0.1;

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_common(validate, common, true);

  auto* price = app.add_subcommand("price", "Price a European claim per current state");
  add_common(price, common, true);
  add_claim(price, claim);
  price->add_option("--t", t, "Valuation time")->default_val(0.0);
  price->add_option("--T", T, "Claim maturity (reset date for caplets/floorlets)")->required();
  price->add_option("--Tb", Tb, "Settlement date for caplets/floorlets");
  price->add_option("--caplet", caplet_strike, "Caplet strike");
  price->add_option("--floorlet", floorlet_strike, "Floorlet strike");
  price->add_flag("--arrow-debreu-matrix", ad_matrix, "Full Arrow-Debreu state-price matrix");

  auto* curve = app.add_subcommand("yield-curve", "Yields Y(t, i; T) over a maturity grid");
  add_common(curve, common, true);
  curve->add_option("--t", t, "Valuation time")->default_val(0.0);
  curve->add_option("--T-grid", grid, "Maturities start:stop:step")->required();

  auto* hedge = app.add_subcommand("hedge", "Replicating bond positions on a time grid");
  add_common(hedge, common, true);
  add_claim(hedge, claim);
  hedge->add_option("--T", T, "Claim maturity")->required();
  hedge->add_option("--basis", basis, "Bond maturities T1,...")->required();
  hedge->add_option("--t-grid", grid, "Times start:stop:step")->required();
  hedge->add_option("--jumps", jumps, "Jump structure: full (default) or birth-death");

  auto* recover = app.add_subcommand("recover", "Recover the real-world generator");
  add_common(recover, common, true);

  auto* simulate = app.add_subcommand("simulate", "Path statistics under Q or the recovered P");
  add_common(simulate, common, true);
  simulate->add_option("--measure", measure, "q (pricing) or p (recovered real-world)")
      ->check(CLI::IsMember({"q", "p"}));
  simulate->add_option("--N", paths, "Number of paths")->required();
  simulate->add_option("--horizon", horizon, "Simulation horizon")->required();
  simulate->add_option("--seed", seed, "RNG seed")->required();
  simulate->add_option("--initial", initial, "Initial state (label or 1-based index)");

  auto* replicate = app.add_subcommand("replicate", "Pathwise replication experiment");
  add_common(replicate, common, true);
  add_claim(replicate, claim);
  replicate->add_option("--T", T, "Claim maturity")->required();
  replicate->add_option("--basis", basis, "Bond maturities T1,...")->required();
  replicate->add_option("--dt", dt, "Rebalance interval")->required();
  replicate->add_option("--N", paths, "Number of paths")->required();
  replicate->add_option("--seed", seed, "RNG seed")->required();
  replicate->add_option("--initial", initial, "Initial state (label or 1-based index)");
  replicate->add_option("--jumps", jumps, "Jump structure: full (default) or birth-death");

  auto* demo = app.add_subcommand("demo", "Two-state closed-form yield curves");
  add_common(demo, common, false);
  demo->add_option("--lambda", lambda, "Symmetric jump intensity")->default_val(0.5);
  demo->add_option("--rate", rate, "Short rate in state 2 (state 1 has rate 0)")->default_val(0.1);
  demo->add_option("--T-grid", grid, "Maturities start:stop:step")->default_val("0.1:50:0.1");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    json manifest = base_manifest(*sub, common, args);

    if (sub == validate) {
      const Model model = load_model(common.model);
      Sink sink(common, out);
      sink.stream() << "ok: " << model.size() << " states\n";
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == demo) {
      const two_state::TwoStateModel m(lambda, rate);
      const auto maturities = parse_grid(grid);
      Sink sink(common, out);
      auto& os = sink.stream();
      const double asymptote = two_state::limiting_yield(m);
      write_row(os, {"T", "Y_1", "Y_2", "asymptote"});
      for (double mat : maturities) {
        if (!(mat > 0.0)) throw InputError("yield undefined at T = t = 0");
        const auto b = two_state::closed_form_bonds(m, 0.0, mat);
        write_row(os, {format_double(mat), format_double(-std::log(b(0)) / mat),
                       format_double(-std::log(b(1)) / mat), format_double(asymptote)});
      }
      sink.finish(manifest);
      return kSuccess;
    }

    const Model model = load_model(common.model);
    const auto n = model.size();

    if (sub == price) {
      Sink sink(common, out);
      auto& os = sink.stream();
      const bool forward_option = caplet_strike || floorlet_strike;
      if (caplet_strike && floorlet_strike) throw InputError("choose one of --caplet, --floorlet");
      if (forward_option) {
        if (price->count("--Tb") == 0) throw InputError("--caplet/--floorlet require --Tb");
        const PriceVector pv = caplet_strike ? caplet(model, t, T, Tb, *caplet_strike)
                                             : floorlet(model, t, T, Tb, *floorlet_strike);
        write_row(os, {"state", "price"});
        for (State i = 0; i < n; ++i) {
          write_row(os, {model.states().label(i), format_double(pv.values(i))});
        }
      } else if (ad_matrix) {
        const auto ad = arrow_debreu(model, t, T);
        std::vector<std::string> header{"state"};
        for (State j = 0; j < n; ++j) header.push_back("AD_" + model.states().label(j));
        write_row(os, header);
        for (State i = 0; i < n; ++i) {
          std::vector<std::string> row{model.states().label(i)};
          for (State j = 0; j < n; ++j) row.push_back(format_double(ad.entries(i, j)));
          write_row(os, row);
        }
      } else {
        const PriceVector pv = price_claim(model, {claim_values(model, claim), T}, t);
        write_row(os, {"state", "price"});
        for (State i = 0; i < n; ++i) {
          write_row(os, {model.states().label(i), format_double(pv.values(i))});
        }
      }
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == curve) {
      const auto maturities = parse_grid(grid);
      std::optional<double> asymptote;
      if (n == 2) {
        try {
          asymptote = -perron_pair(model).rho;
        } catch (const RecoveryHypothesisError&) {
          asymptote = 0.0;  // r identically zero: all yields vanish
        }
      }
      for (double mat : maturities) {
        if (!(mat > t)) throw InputError("yield undefined for maturity <= t");
      }
      const auto curves = bond_curve(model, t, maturities);
      Sink sink(common, out);
      auto& os = sink.stream();
      std::vector<std::string> header{"T"};
      for (State i = 0; i < n; ++i) header.push_back("Y_" + model.states().label(i));
      if (asymptote) header.push_back("asymptote");
      write_row(os, header);
      for (std::size_t k = 0; k < maturities.size(); ++k) {
        std::vector<std::string> row{format_double(maturities[k])};
        for (State i = 0; i < n; ++i) {
          row.push_back(format_double(-std::log(curves[k].values(i)) / (maturities[k] - t)));
        }
        if (asymptote) row.push_back(format_double(*asymptote));
        write_row(os, row);
      }
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == hedge) {
      const BondBasis b(parse_list(basis), T);
      const HedgePlan plan(model, {claim_values(model, claim), T}, b, jump_structure(model, jumps));
      const auto times = parse_grid(grid);
      Sink sink(common, out);
      auto& os = sink.stream();
      std::vector<std::string> header{"time", "state"};
      for (double m : b.maturities()) header.push_back("position_" + format_double(m));
      header.push_back("money_market");
      header.push_back("claim_value");
      write_row(os, header);
      for (double time : times) {
        for (State i = 0; i < n; ++i) {
          const auto p = plan.at(time, i);
          std::vector<std::string> row{format_double(time), model.states().label(i)};
          for (Eigen::Index k = 0; k < p.positions.size(); ++k) {
            row.push_back(format_double(p.positions(k)));
          }
          row.push_back(format_double(p.money_market));
          row.push_back(format_double(p.claim_value));
          write_row(os, row);
        }
      }
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == recover) {
      const PerronPair pair = perron_pair(model);
      const RecoveredMeasure rm = recover_generator(pair, model.generator());
      const auto report = validate_generator(rm.generator_p.entries());
      json j;
      j["rho"] = pair.rho;
      j["pi"] = std::vector<double>(pair.pi.data(), pair.pi.data() + pair.pi.size());
      json g = json::array();
      for (State i = 0; i < n; ++i) {
        std::vector<double> row(n);
        for (State k = 0; k < n; ++k) row[k] = rm.generator_p(i, k);
        g.push_back(row);
      }
      j["generator_p"] = g;
      j["eigen_residual"] = eigen_residual(model, pair);
      json violations = json::array();
      for (const auto& v : report.violations) violations.push_back(v.message);
      j["validation"] = {{"ok", report.ok()}, {"violations", violations}};
      Sink sink(common, out);
      sink.stream() << j.dump(2) << '\n';
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == simulate) {
      if (paths == 0) throw InputError("--N must be positive");
      const State init = parse_state(model, initial);
      std::optional<RecoveredMeasure> rm;
      if (measure == "p") rm = recover_generator(perron_pair(model), model.generator());
      const GeneratorMatrix& law = rm ? rm->generator_p : model.generator();
      const auto stats = simulate_statistics(law, init, horizon, {paths, seed, 0});
      Sink sink(common, out);
      auto& os = sink.stream();
      write_row(os, {"state", "terminal_frequency", "occupancy_fraction", "mean_jumps_out"});
      for (State i = 0; i < n; ++i) {
        write_row(os, {model.states().label(i), format_double(stats.terminal_frequency(i)),
                       format_double(stats.occupancy_fraction(i)),
                       format_double(stats.mean_jumps_out(i))});
      }
      manifest["seed"] = seed;
      manifest["rng"] = std::string(Rng::kAlgorithm);
      sink.finish(manifest);
      return kSuccess;
    }

    if (sub == replicate) {
      if (paths == 0) throw InputError("--N must be positive");
      const State init = parse_state(model, initial);
      const BondBasis b(parse_list(basis), T);
      const ClaimPayoff payoff{claim_values(model, claim), T};
      const auto structure = jump_structure(model, jumps);
      const JumpSampler sampler(model.generator());
      Sink sink(common, out);
      auto& os = sink.stream();
      write_row(os, {"path", "jumps", "initial_state", "terminal_state", "terminal_value",
                     "target_value", "terminal_error", "max_tracking_error",
                     "max_jump_mismatch"});
      double sum_error = 0.0;
      for (std::size_t p = 0; p < paths; ++p) {
        Rng rng = Rng::stream(seed, p);
        const ChainPath path = simulate_path(sampler, init, T, rng);
        const auto rep = replicate_on_path(model, path, payoff, b, dt, structure);
        sum_error += rep.terminal_error;
        write_row(os, {std::to_string(p), std::to_string(rep.jumps),
                       model.states().label(rep.initial_state),
                       model.states().label(rep.terminal_state), format_double(rep.terminal_value),
                       format_double(rep.target_value), format_double(rep.terminal_error),
                       format_double(rep.max_tracking_error),
                       format_double(rep.max_jump_mismatch)});
      }
      err << "mean terminal error " << format_double(sum_error / static_cast<double>(paths))
          << " over " << paths << " paths\n";
      manifest["seed"] = seed;
      manifest["rng"] = std::string(Rng::kAlgorithm);
      sink.finish(manifest);
      return kSuccess;
    }
    throw InputError("unknown command");
  } catch (const RecoveryHypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kRecoveryHypothesis;
  } catch (const UnhedgeableBasisError& e) {
    err << "error: " << e.what() << '\n';
    return kUnhedgeable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace ctmc::cli
