#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "permclust/cluster.hpp"
#include "permclust/enumerate.hpp"
#include "permclust/errors.hpp"
#include "permclust/formulas.hpp"
#include "permclust/sampler.hpp"
#include "permclust/series.hpp"

namespace {

using permclust::AvoidanceClass;
using permclust::BigRational;
using permclust::Permutation;
using json = nlohmann::ordered_json;

std::string g_out_path;

void emit(const std::string& payload) {
  if (g_out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(g_out_path, std::ios::binary);
  if (!out) throw permclust::InvalidInput("cannot open output file \"" + g_out_path + "\"");
  out << payload;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json rational_json(const BigRational& q) { return permclust::rational_string(q); }

json moment_report_json(const permclust::MomentReport& rep) {
  json j;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["tau"] = rep.tau ? json(permclust::to_string(*rep.tau)) : json(nullptr);
  j["class"] = rep.cls.key();
  j["class_size"] = rep.class_size.get_str();
  j["mean"] = rational_json(rep.mean);
  j["second_moment"] = rational_json(rep.second_moment);
  j["variance"] = rational_json(rep.variance);
  return j;
}

struct FormulaArgs {
  std::string eta;
  std::string cls;
  std::string tau;
  int n = 0;
  int k = 0;
  bool total = false;
  bool with_float = false;
};

std::string run_formula(const FormulaArgs& a) {
  if (a.eta.empty() == a.cls.empty())
    throw permclust::InvalidInput("give exactly one of --eta or --class");
  if (a.tau.empty() == !a.total)
    throw permclust::InvalidInput("give exactly one of --tau or --total");
  json j;
  j["n"] = a.n;
  j["k"] = a.k;
  std::optional<Permutation> tau;
  if (!a.tau.empty()) tau = permclust::parse_permutation(a.tau);
  j["tau"] = tau ? json(permclust::to_string(*tau)) : json(nullptr);

  BigRational value;
  std::string branch;
  std::string formula;
  std::string warning;
  if (!a.eta.empty()) {
    const Permutation eta = permclust::parse_permutation(a.eta);
    j["class"] = permclust::to_string(eta);
    const bool monotone = eta == Permutation::identity(3) || eta == Permutation::decreasing(3);
    if (a.total) {
      value = permclust::expectation_s3_total(a.n, a.k, eta);
      branch = "total";
      formula = monotone ? "C(n-k+1)*(n-k+C(k))/C(n)"
                         : "C(n-k+1)*((n-k+2)*C(k)+n-k)/(2*C(n))";
    } else {
      value = permclust::expectation_s3(a.n, a.k, *tau, eta);
      const bool star = *tau == permclust::tau_star(eta, a.k);
      branch = star ? "star" : "nonstar";
      if (permclust::contains(*tau, eta)) {
        warning = "tau contains the class pattern; the statistic is identically zero";
        formula = "0";
      } else if (monotone) {
        formula = star ? "(n-k+1)*C(n-k+1)/C(n)" : "C(n-k+1)/C(n)";
      } else {
        formula = star ? "(n-k+3)*C(n-k+2)/(2*C(n)) - (n-k+2)*C(n-k+1)/C(n)"
                       : "(n-k+2)*C(n-k+1)/(2*C(n))";
      }
    }
  } else {
    const AvoidanceClass cls = AvoidanceClass::parse(a.cls);
    j["class"] = cls.key();
    branch = "multi";
    if (a.total) {
      value = permclust::expectation_simple_multi_total(a.n, a.k, cls);
      formula = "(n-k+1)*|Av(n-k+1)|*|Av(k)|/|Av(n)|";
    } else {
      value = permclust::expectation_simple_multi(a.n, a.k, *tau, cls);
      formula = "(n-k+1)*|Av(n-k+1)|/|Av(n)|";
      if (!permclust::avoids_all(*tau, cls)) {
        warning = "tau contains a class pattern; the statistic is identically zero";
        formula = "0";
      }
    }
  }
  j["exact"] = rational_json(value);
  if (a.with_float) j["float"] = permclust::to_double(value);
  j["branch"] = branch;
  j["formula"] = formula;
  if (!warning.empty()) j["warning"] = warning;
  return dump(j);
}

// Closed forms against enumerated moments for every length-3 class (per
// pattern and total), plus the simple-pattern classes at small k. Returns
// the number of verified cases; throws on first mismatch via `fail`.
struct VerifyMismatch {
  std::string message;
};

std::size_t run_verify_sweep(int max_n, int max_k, std::ostream& log) {
  std::size_t cases = 0;
  const auto fail = [](int n, int k, const std::string& tau, const std::string& cls,
                       const BigRational& want, const BigRational& got) {
    throw VerifyMismatch{"mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                         " tau=" + tau + " class=" + cls + ": formula " +
                         permclust::rational_string(want) + " != brute " +
                         permclust::rational_string(got)};
  };

  const std::vector<std::string> etas = {"123", "132", "213", "231", "312", "321"};
  for (const auto& eta_text : etas) {
    const Permutation eta = permclust::parse_permutation(eta_text);
    const AvoidanceClass cls({eta});
    for (int k = 2; k <= max_k; ++k) {
      for (int n = k; n <= max_n; ++n) {
        const auto sweep = permclust::moment_sweep(n, k, cls);
        for (const auto& tau : permclust::class_members(k, cls)) {
          const BigRational want = permclust::expectation_s3(n, k, tau, eta);
          const auto it = sweep.by_tau.find(tau);
          const BigRational got = it == sweep.by_tau.end() ? BigRational(0) : it->second.mean;
          if (want != got) fail(n, k, permclust::to_string(tau), eta_text, want, got);
          ++cases;
        }
        const BigRational want_total = permclust::expectation_s3_total(n, k, eta);
        if (want_total != sweep.total.mean)
          fail(n, k, "(total)", eta_text, want_total, sweep.total.mean);
        ++cases;
      }
    }
    log << "ok class=" << eta_text << " k=2.." << max_k << " n<=" << max_n << "\n";
  }

  const std::vector<std::string> simple_classes = {"3142", "2413+3142"};
  for (const auto& cls_text : simple_classes) {
    const AvoidanceClass cls = AvoidanceClass::parse(cls_text);
    for (int k = 2; k <= std::min(3, max_k); ++k) {
      for (int n = k; n <= max_n; ++n) {
        const auto sweep = permclust::moment_sweep(n, k, cls);
        for (const auto& tau : permclust::class_members(k, cls)) {
          const BigRational want = permclust::expectation_simple_multi(n, k, tau, cls);
          const auto it = sweep.by_tau.find(tau);
          const BigRational got = it == sweep.by_tau.end() ? BigRational(0) : it->second.mean;
          if (want != got) fail(n, k, permclust::to_string(tau), cls_text, want, got);
          ++cases;
        }
        const BigRational want_total = permclust::expectation_simple_multi_total(n, k, cls);
        if (want_total != sweep.total.mean)
          fail(n, k, "(total)", cls_text, want_total, sweep.total.mean);
        ++cases;
      }
    }
    log << "ok class=" << cls_text << " k=2.." << std::min(3, max_k) << " n<=" << max_n
        << "\n";
  }
  return cases;
}

std::string run_simple_closure(const std::string& cls_text, int max_n) {
  const AvoidanceClass cls = AvoidanceClass::parse(cls_text);
  json j;
  j["class"] = cls.key();
  j["max_n"] = max_n;
  std::size_t checked = 0;
  for (int m = 1; m <= max_n - 1; ++m) {
    const auto nus = permclust::class_members(m, cls);
    for (int k = 2; m + k - 1 <= max_n; ++k) {
      const auto taus = permclust::class_members(k, cls);
      for (const auto& nu : nus) {
        for (const auto& tau : taus) {
          for (int a = 1; a <= m; ++a) {
            const Permutation sigma = permclust::extend(nu, tau, nu.at(a), a);
            ++checked;
            if (!permclust::avoids_all(sigma, cls)) {
              j["checked"] = checked;
              j["closed"] = false;
              json ce;
              ce["nu"] = permclust::to_string(nu);
              ce["tau"] = permclust::to_string(tau);
              ce["l"] = nu.at(a);
              ce["a"] = a;
              ce["extended"] = permclust::to_string(sigma);
              j["counterexample"] = ce;
              return dump(j);
            }
          }
        }
      }
    }
  }
  j["checked"] = checked;
  j["closed"] = true;
  j["counterexample"] = nullptr;
  return dump(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact cluster statistics in pattern-avoiding permutations"};
  app.require_subcommand(1);
  app.add_option("--out", g_out_path, "write the payload to this file instead of stdout");

  // count
  auto* cmd_count = app.add_subcommand("count", "class sizes |S_n^{av(c)}|");
  std::string count_class_text;
  int count_n = -1, count_from = -1, count_to = -1;
  cmd_count->add_option("--class", count_class_text, "patterns joined by '+'")->required();
  cmd_count->add_option("--n", count_n, "single size");
  cmd_count->add_option("--from", count_from, "range start");
  cmd_count->add_option("--to", count_to, "range end");

  // enumerate
  auto* cmd_enum = app.add_subcommand("enumerate", "list class members in lexicographic order");
  std::string enum_class_text;
  int enum_n = 0;
  cmd_enum->add_option("--class", enum_class_text, "patterns joined by '+'")->required();
  cmd_enum->add_option("--n", enum_n, "permutation size")->required();

  // stats
  auto* cmd_stats = app.add_subcommand("stats", "exact cluster-count moments by enumeration");
  std::string stats_class_text, stats_tau;
  int stats_n = 0, stats_k = 0;
  bool stats_sweep = false;
  cmd_stats->add_option("--class", stats_class_text, "patterns joined by '+'")->required();
  cmd_stats->add_option("--n", stats_n, "permutation size")->required();
  cmd_stats->add_option("--k", stats_k, "cluster length")->required();
  cmd_stats->add_option("--tau", stats_tau, "cluster pattern (default: total count)");
  cmd_stats->add_flag("--sweep", stats_sweep, "per-pattern table for all tau in one pass");

  // formula
  auto* cmd_formula = app.add_subcommand("formula", "closed-form exact expectations");
  FormulaArgs formula_args;
  cmd_formula->add_option("--eta", formula_args.eta, "single length-3 pattern");
  cmd_formula->add_option("--class", formula_args.cls, "simple patterns joined by '+'");
  cmd_formula->add_option("--n", formula_args.n, "permutation size")->required();
  cmd_formula->add_option("--k", formula_args.k, "cluster length")->required();
  cmd_formula->add_option("--tau", formula_args.tau, "cluster pattern");
  cmd_formula->add_flag("--total", formula_args.total, "total count over all patterns");
  cmd_formula->add_flag("--float", formula_args.with_float, "include a float rendering");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "closed forms vs enumeration, exact");
  int verify_max_n = 8, verify_max_k = 4;
  cmd_verify->add_option("--max-n", verify_max_n, "largest size (default 8)");
  cmd_verify->add_option("--max-k", verify_max_k, "largest cluster length (default 4)");

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "draw uniform class members");
  std::string sample_class_text, sample_method = "automatic";
  int sample_n = 0;
  std::uint64_t sample_seed = 0, sample_count = 1;
  cmd_sample->add_option("--n", sample_n, "permutation size")->required();
  cmd_sample->add_option("--class", sample_class_text, "patterns joined by '+'")->required();
  cmd_sample->add_option("--method", sample_method,
                         "automatic|recursive231|dyck321|enumerated");
  cmd_sample->add_option("--seed", sample_seed, "rng seed (default 0)");
  cmd_sample->add_option("--count", sample_count, "number of draws (default 1)");

  // mc
  auto* cmd_mc = app.add_subcommand("mc", "Monte Carlo moment estimate");
  std::string mc_class_text, mc_tau, mc_method = "automatic";
  int mc_n = 0, mc_k = 0, mc_workers = 1;
  std::uint64_t mc_samples = 10000, mc_seed = 0;
  cmd_mc->add_option("--n", mc_n, "permutation size")->required();
  cmd_mc->add_option("--k", mc_k, "cluster length")->required();
  cmd_mc->add_option("--tau", mc_tau, "cluster pattern (default: total count)");
  cmd_mc->add_option("--class", mc_class_text, "patterns joined by '+'")->required();
  cmd_mc->add_option("--samples", mc_samples, "number of draws (default 10000)");
  cmd_mc->add_option("--seed", mc_seed, "rng seed (default 0)");
  cmd_mc->add_option("--workers", mc_workers, "worker threads (default 1)");
  cmd_mc->add_option("--method", mc_method, "automatic|recursive231|dyck321|enumerated");

  // series-check
  auto* cmd_series = app.add_subcommand("series-check", "verify the series identities");
  int series_order = 40;
  cmd_series->add_option("--order", series_order, "truncation order (default 40)");

  // asymptotics
  auto* cmd_asym = app.add_subcommand("asymptotics", "finite-n gaps to the limit constants");
  std::string asym_kind, asym_ns = "100,500,2000", asym_class_text;
  int asym_k = 0;
  cmd_asym->add_option("--kind", asym_kind,
                       "nonmon_nonstar|nonmon_star|nonmon_total|mon_nonstar|mon_star|"
                       "mon_total|separable|separable_total|sw_general")
      ->required();
  cmd_asym->add_option("--k", asym_k, "cluster length")->required();
  cmd_asym->add_option("--n", asym_ns, "comma-separated sizes (default 100,500,2000)");
  cmd_asym->add_option("--class", asym_class_text, "class for the multi-pattern kinds");

  // simple-check
  auto* cmd_simple = app.add_subcommand("simple-check", "simplicity and closure checks");
  std::string simple_perm, simple_class_text;
  int simple_max_n = 8;
  cmd_simple->add_option("--perm", simple_perm, "report blocks/simplicity of one permutation");
  cmd_simple->add_option("--class", simple_class_text, "run the extension-closure search");
  cmd_simple->add_option("--max-n", simple_max_n, "closure search bound (default 8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_count) {
      const AvoidanceClass cls = AvoidanceClass::parse(count_class_text);
      const bool range = cmd_count->count("--from") > 0 || cmd_count->count("--to") > 0;
      if (range == (cmd_count->count("--n") > 0))
        throw permclust::InvalidInput("give either --n or --from/--to");
      if (range) {
        if (cmd_count->count("--from") == 0 || cmd_count->count("--to") == 0)
          throw permclust::InvalidInput("range mode needs both --from and --to");
        std::ostringstream csv;
        csv << "n,count\n";
        for (const auto& row : permclust::count_table(count_from, count_to, cls))
          csv << row.n << "," << row.count.get_str() << "\n";
        emit(csv.str());
      } else {
        emit(permclust::count_class(count_n, cls).get_str() + "\n");
      }
    } else if (*cmd_enum) {
      const AvoidanceClass cls = AvoidanceClass::parse(enum_class_text);
      std::ostringstream lines;
      permclust::for_each_in_class(enum_n, cls, [&](const Permutation& p) {
        lines << permclust::to_string(p) << "\n";
        return true;
      });
      emit(lines.str());
    } else if (*cmd_stats) {
      const AvoidanceClass cls = AvoidanceClass::parse(stats_class_text);
      if (stats_sweep) {
        const auto sweep = permclust::moment_sweep(stats_n, stats_k, cls);
        json j;
        j["n"] = stats_n;
        j["k"] = stats_k;
        j["class"] = cls.key();
        j["class_size"] = sweep.total.class_size.get_str();
        j["total"] = moment_report_json(sweep.total);
        json by_tau = json::object();
        for (const auto& [tau, rep] : sweep.by_tau)
          by_tau[permclust::to_string(tau)] = moment_report_json(rep);
        j["by_tau"] = by_tau;
        emit(dump(j));
      } else {
        std::optional<Permutation> tau;
        if (!stats_tau.empty()) tau = permclust::parse_permutation(stats_tau);
        emit(dump(moment_report_json(permclust::exact_moments(stats_n, stats_k, tau, cls))));
      }
    } else if (*cmd_formula) {
      emit(run_formula(formula_args));
    } else if (*cmd_verify) {
      std::ostringstream log;
      try {
        const std::size_t cases = run_verify_sweep(verify_max_n, verify_max_k, log);
        log << "verified " << cases << " cases, all match\n";
        emit(log.str());
      } catch (const VerifyMismatch& m) {
        log << m.message << "\n";
        emit(log.str());
        return 1;
      }
    } else if (*cmd_sample) {
      const AvoidanceClass cls = AvoidanceClass::parse(sample_class_text);
      const permclust::SampleMethod method = permclust::parse_sample_method(sample_method);
      permclust::CounterRng rng = permclust::CounterRng::from_seed(sample_seed);
      std::ostringstream lines;
      for (std::uint64_t i = 0; i < sample_count; ++i)
        lines << permclust::to_string(permclust::sample_class(sample_n, cls, method, rng))
              << "\n";
      emit(lines.str());
    } else if (*cmd_mc) {
      permclust::MCParams params;
      params.n = mc_n;
      params.k = mc_k;
      if (!mc_tau.empty()) params.tau = permclust::parse_permutation(mc_tau);
      params.cls = AvoidanceClass::parse(mc_class_text);
      params.samples = mc_samples;
      params.seed = mc_seed;
      params.workers = mc_workers;
      params.method = permclust::parse_sample_method(mc_method);
      const auto est = permclust::monte_carlo(params);
      json j;
      j["n"] = params.n;
      j["k"] = params.k;
      j["tau"] = params.tau ? json(permclust::to_string(*params.tau)) : json(nullptr);
      j["class"] = params.cls.key();
      j["samples"] = est.samples;
      j["seed"] = est.seed;
      j["workers"] = est.workers;
      j["mean"] = est.mean;
      j["variance"] = est.variance;
      j["stderr"] = est.stderr_of_mean;
      j["sum"] = est.sum;
      j["sum_sq"] = est.sum_sq;
      emit(dump(j));
    } else if (*cmd_series) {
      const auto identities = permclust::verify_identities(series_order);
      std::ostringstream lines;
      bool all_ok = true;
      for (const auto& id : identities) {
        lines << id.name << " truncation=" << id.truncation << " ";
        if (id.holds) {
          lines << "PASS\n";
        } else {
          all_ok = false;
          lines << "first-mismatch=t^" << id.first_mismatch.value_or(-1) << "\n";
        }
      }
      emit(lines.str());
      if (!all_ok) return 1;
    } else if (*cmd_asym) {
      std::vector<int> ns;
      std::stringstream ss(asym_ns);
      std::string tok;
      while (std::getline(ss, tok, ',')) ns.push_back(std::stoi(tok));
      std::optional<AvoidanceClass> cls;
      if (!asym_class_text.empty()) cls = AvoidanceClass::parse(asym_class_text);
      const auto rep = permclust::asymptotic_constants(
          permclust::parse_asymptotic_kind(asym_kind), asym_k, ns, cls);
      json j;
      j["kind"] = permclust::to_string(rep.kind);
      j["k"] = rep.k;
      json constant;
      constant["description"] = rep.constant.description;
      constant["exact"] =
          rep.constant.exact ? json(permclust::rational_string(*rep.constant.exact)) : json(nullptr);
      constant["value"] = rep.constant.value;
      j["constant"] = constant;
      json points = json::array();
      for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& pt = rep.points[i];
        json p;
        p["n"] = pt.n;
        p["exact"] = rational_json(pt.exact_value);
        p["value"] = pt.value;
        p["relative_gap"] = pt.relative_gap;
        if (i < rep.two_term.size()) {
          p["linear_term"] = rep.two_term[i].linear;
          p["offset_term"] = rep.two_term[i].offset;
        }
        points.push_back(p);
      }
      j["points"] = points;
      emit(dump(j));
    } else if (*cmd_simple) {
      if (simple_perm.empty() == simple_class_text.empty())
        throw permclust::InvalidInput("give exactly one of --perm or --class");
      if (!simple_perm.empty()) {
        const Permutation p = permclust::parse_permutation(simple_perm);
        json j;
        j["perm"] = permclust::to_string(p);
        j["simple"] = permclust::is_simple(p);
        json blocks = json::array();
        for (const auto& b : permclust::find_blocks(p)) {
          json bj;
          bj["start"] = b.start_pos;
          bj["length"] = b.length;
          blocks.push_back(bj);
        }
        j["blocks"] = blocks;
        emit(dump(j));
      } else {
        emit(run_simple_closure(simple_class_text, simple_max_n));
      }
    }
  } catch (const permclust::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const permclust::ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
