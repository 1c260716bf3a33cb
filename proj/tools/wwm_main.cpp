// wwm: weighted word metrics on finitely presented groups.
//
// Subcommands: check, entropy (free|bounds|ball), count, growth, minimize,
// sample (word|presentation), experiment, demo (nonstrict).
// Exit codes: 0 success / check passed, 1 check failed, 2 input error,
// 3 resource cap exceeded.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wwm/avoidance.hpp"
#include "wwm/entropy.hpp"
#include "wwm/errors.hpp"
#include "wwm/io.hpp"
#include "wwm/presentation.hpp"
#include "wwm/random_groups.hpp"

using nlohmann::json;
using namespace wwm;

namespace {

void write_report(const std::string& path, const json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write report file: " + path);
  out << j.dump(2) << "\n";
}

json word_json(const Word& w, int m) { return word_string(w, m); }

json ta_json(const TranslationApparentReport& ta, int m) {
  json j;
  j["ok"] = ta.ok;
  j["lambda"] = rat_string(ta.lambda);
  j["cyclically_reduced_ok"] = ta.cyclically_reduced_ok;
  json jc;
  jc["ok"] = ta.cprime.ok;
  if (ta.cprime.witness) {
    jc["witness"] = {{"piece", word_json(ta.cprime.witness->piece, m)},
                     {"relator", word_json(ta.cprime.witness->relator, m)}};
  } else {
    jc["witness"] = nullptr;
  }
  j["small_cancellation"] = jc;
  json je;
  je["run_ok"] = ta.even.run_ok;
  je["half_window_ok"] = ta.even.half_window_ok;
  je["freq_window_ok"] = ta.even.freq_window_ok;
  je["first_violation"] =
      ta.even.first_violation ? json(ta.even.first_violation->describe(m)) : json(nullptr);
  j["even_distribution"] = je;
  j["failures"] = ta.failures;
  return j;
}

json weights_json(const WeightVector& w) {
  std::vector<std::string> per;
  for (const Rat& q : w.per_generator) per.push_back(rat_string(q));
  return json{{"m", w.m}, {"per_generator", per}, {"normalized", w.normalized()}};
}

struct Cli {
  CLI::App app{"weighted word metrics: entropy, small-cancellation checks, exact balls"};
  std::function<int()> action;
  int run(int argc, char** argv) {
    app.require_subcommand(1);
    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
    try {
      return action ? action() : 2;
    } catch (const ResourceCapError& e) {
      std::cerr << "resource cap: " << e.what() << "\n";
      return 3;
    } catch (const PreconditionError& e) {
      std::cerr << "precondition failed: " << e.what() << "\n";
      return 2;
    } catch (const InputError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      return 2;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App& app = cli.app;

  // ---- check ----
  {
    auto* sc = app.add_subcommand("check", "verify C'(lambda) + even-distribution conditions");
    auto opt = std::make_shared<std::
        tuple<std::string, std::string, std::string>>();
    sc->add_option("--presentation", std::get<0>(*opt), "presentation file")->required();
    sc->add_option("--lambda", std::get<1>(*opt), "small-cancellation parameter p/q")->required();
    sc->add_option("--report", std::get<2>(*opt), "write JSON report here");
    sc->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        auto& [pres_path, lambda_str, report_path] = *opt;
        Presentation p = parse_presentation_file(pres_path);
        Rat lambda = parse_rat(lambda_str);
        TranslationApparentReport ta = check_translation_apparent(p, lambda);
        std::cout << "translation-apparent check (lambda = " << rat_string(lambda)
                  << "): " << (ta.ok ? "PASS" : "FAIL") << "\n";
        for (const std::string& f : ta.failures) std::cout << "  - " << f << "\n";
        json j = ta_json(ta, p.m);
        j["invocation"] = {{"subcommand", "check"},
                           {"presentation", pres_path},
                           {"lambda", lambda_str}};
        write_report(report_path, j);
        return ta.ok ? 0 : 1;
      };
    });
  }

  // ---- entropy ----
  {
    auto* sc = app.add_subcommand("entropy", "entropy values and bounds");
    sc->require_subcommand(1);

    {  // entropy free
      auto* f = sc->add_subcommand("free", "solve the free-group entropy equation");
      auto opt = std::make_shared<std::tuple<std::string, int, std::string>>();
      std::get<1>(*opt) = 0;
      f->add_option("--weights", std::get<0>(*opt), "weight JSON file")->required();
      f->add_option("--m", std::get<1>(*opt), "cross-check generator count");
      f->add_option("--report", std::get<2>(*opt), "write JSON report here");
      f->callback([&cli, opt] {
        cli.action = [opt]() -> int {
          auto& [wpath, m, report_path] = *opt;
          WeightVector w = parse_weights_file(wpath);
          if (m > 0 && m != w.m)
            throw InputError("--m does not match the weight file");
          double h = free_entropy(w);
          std::vector<double> g = entropy_gradient(w);
          std::cout.precision(12);
          std::cout << "h = " << h << "\n";
          json j{{"h", h}, {"gradient", g}, {"weights", weights_json(w)}};
          j["invocation"] = {{"subcommand", "entropy free"}, {"weights", wpath}};
          write_report(report_path, j);
          return 0;
        };
      });
    }

    {  // entropy bounds
      auto* b = sc->add_subcommand("bounds", "two-sided sandwich for a verified presentation");
      auto opt =
          std::make_shared<std::tuple<std::string, std::string, std::string, std::string>>();
      b->add_option("--presentation", std::get<0>(*opt), "presentation file")->required();
      b->add_option("--lambda", std::get<1>(*opt), "small-cancellation parameter p/q")
          ->required();
      b->add_option("--weights", std::get<2>(*opt), "weight JSON file")->required();
      b->add_option("--report", std::get<3>(*opt), "write JSON report here");
      b->callback([&cli, opt] {
        cli.action = [opt]() -> int {
          auto& [ppath, lstr, wpath, report_path] = *opt;
          Presentation p = parse_presentation_file(ppath);
          Rat lambda = parse_rat(lstr);
          WeightVector w = parse_weights_file(wpath);
          EntropyBounds eb = entropy_bounds(p, lambda, w);
          std::cout.precision(12);
          std::cout << "h_lo = " << eb.h_lo << "\nh_hi = " << eb.h_hi
                    << "\ngap  = " << (eb.h_hi - eb.h_lo) << "\n";
          std::cout << "hypotheses: min_length_ok=" << eb.hypotheses.min_length_ok
                    << " counting_ok=" << eb.hypotheses.counting_ok
                    << " apriori_gap=" << eb.hypotheses.apriori_gap << "\n";
          json j{{"h_lo", eb.h_lo},
                 {"h_hi", eb.h_hi},
                 {"hypotheses",
                  {{"prefix_count_max", eb.hypotheses.prefix_count_max},
                   {"prefix_min_length", eb.hypotheses.prefix_min_length},
                   {"total_weight", eb.hypotheses.total_weight},
                   {"min_length_ok", eb.hypotheses.min_length_ok},
                   {"counting_ok", eb.hypotheses.counting_ok},
                   {"apriori_gap", eb.hypotheses.apriori_gap}}},
                 {"integer_weights", eb.integer_weights},
                 {"scale", eb.scale.get_str()},
                 {"weights", weights_json(w)}};
          j["invocation"] = {{"subcommand", "entropy bounds"},
                             {"presentation", ppath},
                             {"lambda", lstr},
                             {"weights", wpath}};
          write_report(report_path, j);
          return 0;
        };
      });
    }

    {  // entropy ball
      auto* e = sc->add_subcommand("ball", "exact weighted ball count");
      auto opt = std::make_shared<
          std::tuple<std::string, std::string, std::string, std::uint64_t, std::string>>();
      std::get<3>(*opt) = BallOptions{}.node_limit;
      e->add_option("--presentation", std::get<0>(*opt), "presentation file")->required();
      e->add_option("--weights", std::get<1>(*opt), "weight JSON file")->required();
      e->add_option("--radius", std::get<2>(*opt), "ball radius p/q")->required();
      e->add_option("--node-limit", std::get<3>(*opt), "search node cap");
      e->add_option("--report", std::get<4>(*opt), "write JSON report here");
      e->callback([&cli, opt] {
        cli.action = [opt]() -> int {
          auto& [ppath, wpath, rstr, cap, report_path] = *opt;
          Presentation p = parse_presentation_file(ppath);
          WeightVector w = parse_weights_file(wpath);
          Rat radius = parse_rat(rstr);
          BallOptions bo;
          bo.node_limit = cap;
          BigInt c = ball_count(p, w, radius, bo);
          std::cout << "|B(" << rat_string(radius) << ")| = " << c.get_str() << "\n";
          json j{{"radius", rat_string(radius)},
                 {"count", c.get_str()},
                 {"weights", weights_json(w)}};
          j["invocation"] = {{"subcommand", "entropy ball"},
                             {"presentation", ppath},
                             {"weights", wpath},
                             {"radius", rstr},
                             {"node_limit", cap}};
          write_report(report_path, j);
          return 0;
        };
      });
    }
  }

  // ---- count ----
  {
    auto* sc = app.add_subcommand("count", "exact counts of words avoiding the forbidden set");
    auto opt = std::make_shared<
        std::tuple<std::string, std::string, std::string, long, std::string, std::string>>();
    std::get<4>(*opt) = "automaton";
    sc->add_option("--presentation", std::get<0>(*opt), "presentation file")->required();
    sc->add_option("--lambda", std::get<1>(*opt), "threshold parameter p/q")->required();
    sc->add_option("--weights", std::get<2>(*opt), "weight JSON file (positive integers)")
        ->required();
    sc->add_option("--n-max", std::get<3>(*opt), "maximum weighted length")->required();
    sc->add_option("--mode", std::get<4>(*opt), "automaton | brute_force")
        ->check(CLI::IsMember({"automaton", "brute_force"}));
    sc->add_option("--report", std::get<5>(*opt), "write JSON report here");
    sc->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        auto& [ppath, lstr, wpath, n_max, mode_str, report_path] = *opt;
        Presentation p = parse_presentation_file(ppath);
        Rat lambda = parse_rat(lstr);
        WeightVector w = parse_weights_file(wpath);
        ForbiddenSet f = build_forbidden_set(p, lambda);
        CountMode mode =
            mode_str == "automaton" ? CountMode::automaton : CountMode::brute_force;
        GrowthSeries gs = count_avoiding(f, w, n_max, mode);
        std::cout << "n,exact,cumulative\n";
        json jf = json::array(), jg = json::array();
        for (long n = 0; n <= n_max; ++n) {
          std::cout << n << ',' << gs.exact[n].get_str() << ',' << gs.cumulative[n].get_str()
                    << "\n";
          jf.push_back(gs.exact[n].get_str());
          jg.push_back(gs.cumulative[n].get_str());
        }
        json j{{"patterns", f.patterns.size()},
               {"exact", jf},
               {"cumulative", jg},
               {"weights", weights_json(w)}};
        j["invocation"] = {{"subcommand", "count"}, {"presentation", ppath},
                           {"lambda", lstr},       {"weights", wpath},
                           {"n_max", n_max},       {"mode", mode_str}};
        write_report(report_path, j);
        return 0;
      };
    });
  }

  // ---- growth ----
  {
    auto* sc = app.add_subcommand(
        "growth", "automaton growth rate and certificate-polynomial root");
    auto opt =
        std::make_shared<std::tuple<std::string, std::string, std::string, std::string>>();
    sc->add_option("--presentation", std::get<0>(*opt), "presentation file")->required();
    sc->add_option("--lambda", std::get<1>(*opt), "threshold parameter p/q")->required();
    sc->add_option("--weights", std::get<2>(*opt), "weight JSON file")->required();
    sc->add_option("--report", std::get<3>(*opt), "write JSON report here");
    sc->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        auto& [ppath, lstr, wpath, report_path] = *opt;
        Presentation p = parse_presentation_file(ppath);
        Rat lambda = parse_rat(lstr);
        WeightVector w = parse_weights_file(wpath);
        ForbiddenSet f = build_forbidden_set(p, lambda);
        double rate = growth_rate(f, w);
        std::optional<double> root = p_largest_root(p, lambda, w);
        double M0 = std::exp(free_entropy(w));
        std::cout.precision(12);
        std::cout << "automaton_growth_rate = " << rate << "\n";
        if (root)
          std::cout << "certificate_root = " << *root << "\n";
        else
          std::cout << "certificate_root = (no sign change found)\n";
        std::cout << "free_growth_M0 = " << M0 << "\n";
        json j{{"automaton_growth_rate", rate},
               {"certificate_root", root ? json(*root) : json(nullptr)},
               {"free_growth_M0", M0},
               {"patterns", f.patterns.size()},
               {"weights", weights_json(w)}};
        j["invocation"] = {{"subcommand", "growth"},
                           {"presentation", ppath},
                           {"lambda", lstr},
                           {"weights", wpath}};
        write_report(report_path, j);
        return 0;
      };
    });
  }

  // ---- minimize ----
  {
    auto* sc = app.add_subcommand("minimize", "minimize free entropy over normalized weights");
    auto opt = std::make_shared<std::tuple<int, double, int, std::string>>();
    *opt = {2, 1e-8, 20000, ""};
    sc->add_option("--m", std::get<0>(*opt), "generator count")->required();
    sc->add_option("--tol", std::get<1>(*opt), "projected-gradient stop tolerance");
    sc->add_option("--max-iterations", std::get<2>(*opt), "iteration cap");
    sc->add_option("--report", std::get<3>(*opt), "write JSON report here");
    sc->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        auto& [m, tol, max_it, report_path] = *opt;
        MinimizeOptions mo;
        mo.tol = tol;
        mo.max_iterations = max_it;
        MinimizeResult r = minimize_free_entropy(m, mo);
        std::cout.precision(12);
        std::cout << "h_min = " << r.value << (r.converged ? "" : "  (NOT converged)") << "\n";
        std::cout << "weights =";
        for (double x : r.weights) std::cout << ' ' << x;
        std::cout << "\niterations = " << r.iterations << "\n";
        json j{{"value", r.value},
               {"weights", r.weights},
               {"iterations", r.iterations},
               {"converged", r.converged}};
        j["invocation"] = {{"subcommand", "minimize"}, {"m", m}, {"tol", tol}};
        write_report(report_path, j);
        return r.converged ? 0 : 1;
      };
    });
  }

  // ---- sample ----
  {
    auto* sc = app.add_subcommand("sample", "seeded random words / presentations");
    sc->require_subcommand(1);

    {  // sample word
      auto* wsc = sc->add_subcommand("word", "cyclically reduced words");
      auto opt = std::make_shared<std::tuple<int, long, std::uint64_t, long>>();
      std::get<3>(*opt) = 1;
      wsc->add_option("--m", std::get<0>(*opt), "generator count")->required();
      wsc->add_option("--ell", std::get<1>(*opt), "word length")->required();
      wsc->add_option("--seed", std::get<2>(*opt), "RNG seed (required: no wall-clock seeding)")
          ->required();
      wsc->add_option("--count", std::get<3>(*opt), "number of words");
      wsc->callback([&cli, opt] {
        cli.action = [opt]() -> int {
          auto& [m, ell, seed, count] = *opt;
          for (long i = 0; i < count; ++i) {
            SplitMix64 gen = stream_for(seed, StreamPurpose::generic, ell, i);
            std::cout << word_string(sample_cyclically_reduced_word(m, ell, gen), m) << "\n";
          }
          return 0;
        };
      });
    }

    {  // sample presentation
      auto* psc = sc->add_subcommand("presentation", "density-model random presentation");
      auto opt = std::make_shared<std::tuple<int, long, std::string, long, std::uint64_t,
                                             std::uint64_t, std::string>>();
      std::get<3>(*opt) = -1;
      std::get<5>(*opt) = DensityModelParams{}.relator_cap;
      psc->add_option("--m", std::get<0>(*opt), "generator count")->required();
      psc->add_option("--ell", std::get<1>(*opt), "relator length")->required();
      psc->add_option("--density", std::get<2>(*opt), "density d in (0,1) as p/q");
      psc->add_option("--relators", std::get<3>(*opt), "explicit relator count (overrides density)");
      psc->add_option("--seed", std::get<4>(*opt), "RNG seed (required: no wall-clock seeding)")
          ->required();
      psc->add_option("--relator-cap", std::get<5>(*opt), "refuse to emit more than this many");
      psc->add_option("--out", std::get<6>(*opt), "output file (stdout if omitted)");
      psc->callback([&cli, opt] {
        cli.action = [opt]() -> int {
          auto& [m, ell, density_str, relators, seed, cap, out_path] = *opt;
          DensityModelParams dp;
          dp.m = m;
          dp.ell = ell;
          dp.seed = seed;
          dp.relator_cap = cap;
          if (relators >= 0) dp.relator_count_override = relators;
          if (!density_str.empty()) dp.density = parse_rat(density_str);
          if (relators < 0 && density_str.empty())
            throw InputError("need --density or --relators");
          Presentation p = sample_presentation(dp);
          std::string text = format_presentation(p);
          if (out_path.empty()) {
            std::cout << text;
          } else {
            std::ofstream out(out_path);
            if (!out) throw InputError("cannot write: " + out_path);
            out << text;
            std::cout << "wrote " << p.relators.size() << " relators to " << out_path << "\n";
          }
          return 0;
        };
      });
    }
  }

  // ---- experiment ----
  {
    auto* sc = app.add_subcommand("experiment", "genericity of the verification conditions");
    auto opt = std::make_shared<std::tuple<int, std::string, std::vector<long>, long,
                                           std::uint64_t, int, std::string, std::string>>();
    std::get<5>(*opt) = 1;
    sc->add_option("--m", std::get<0>(*opt), "generator count")->required();
    sc->add_option("--lambda", std::get<1>(*opt), "threshold parameter p/q")->required();
    sc->add_option("--ell", std::get<2>(*opt), "relator lengths (comma separated)")
        ->required()
        ->delimiter(',');
    sc->add_option("--trials", std::get<3>(*opt), "trials per length")->required();
    sc->add_option("--seed", std::get<4>(*opt), "RNG seed (required: no wall-clock seeding)")
        ->required();
    sc->add_option("--threads", std::get<5>(*opt), "worker threads (same results any value)");
    sc->add_option("--csv", std::get<6>(*opt), "write CSV here (also printed)");
    sc->add_option("--report", std::get<7>(*opt), "write JSON report here");
    sc->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        auto& [m, lstr, ells, trials, seed, threads, csv_path, report_path] = *opt;
        Rat lambda = parse_rat(lstr);
        GenericityReport rep = genericity_experiment(m, ells, lambda, trials, seed, threads);
        std::string csv = rep.to_csv();
        std::cout << csv;
        if (!csv_path.empty()) {
          std::ofstream out(csv_path);
          if (!out) throw InputError("cannot write: " + csv_path);
          out << csv;
        }
        if (!report_path.empty()) {
          json rows = json::array();
          for (const GenericityRow& r : rep.rows) {
            rows.push_back({{"m", r.m},
                            {"ell", r.ell},
                            {"lambda", rat_string(r.lambda)},
                            {"trials", r.trials},
                            {"fail_run", r.fail_run},
                            {"fail_halfwin", r.fail_halfwin},
                            {"fail_freqwin", r.fail_freqwin},
                            {"fail_smallcanc", r.fail_smallcanc},
                            {"rate_pooled", r.rate_pooled},
                            {"bound_pooled", r.bound_pooled},
                            {"bound_pooled_exact", r.bound_pooled_exact}});
          }
          json j{{"rows", rows}, {"seed", seed}};
          j["invocation"] = {{"subcommand", "experiment"}, {"m", m},
                             {"lambda", lstr},             {"ell", ells},
                             {"trials", trials},           {"seed", seed},
                             {"threads", threads}};
          write_report(report_path, j);
        }
        return 0;
      };
    });
  }

  // ---- demo nonstrict ----
  {
    auto* sc = app.add_subcommand("demo", "worked examples");
    sc->require_subcommand(1);
    auto* d = sc->add_subcommand(
        "nonstrict",
        "a segment of weights on a redundant generating set of F2 inducing one metric");
    auto opt = std::make_shared<std::string>();
    d->add_option("--report", *opt, "write JSON report here");
    d->callback([&cli, opt] {
      cli.action = [opt]() -> int {
        // Steps a, b cost 1/16; a^2 costs (1-t)*3/16 + t*2/16 and b^2 costs
        // (1-t)*3/16 + t*4/16.  Every t in [0,1] induces the same metric as
        // single letters at cost 1/16, so the entropy is constant on the
        // segment: no strict convexity in the weights.
        const Rat radius(1, 2);
        auto steps_at = [](const Rat& t) {
          Rat a2 = (Rat(1) - t) * Rat(3, 16) + t * Rat(2, 16);
          Rat b2 = (Rat(1) - t) * Rat(3, 16) + t * Rat(4, 16);
          a2.canonicalize();
          b2.canonicalize();
          return std::vector<WeightedStep>{
              {{1}, Rat(1, 16)}, {{2}, Rat(1, 16)}, {{1, 1}, a2}, {{2, 2}, b2}};
        };
        std::map<Word, Rat> reference = free_ball_distance_map(
            2, {{{1}, Rat(1, 16)}, {{2}, Rat(1, 16)}}, radius);
        std::cout << "two-generator metric ball |B(1/2)| = " << reference.size() << "\n";
        bool all_equal = true;
        json jt = json::array();
        for (const Rat& t : {Rat(0), Rat(1, 2), Rat(1)}) {
          std::map<Word, Rat> ball = free_ball_distance_map(2, steps_at(t), radius);
          bool same = ball == reference;
          all_equal = all_equal && same;
          std::cout << "t = " << rat_string(t) << ": |B(1/2)| = " << ball.size()
                    << ", distances " << (same ? "coincide" : "DIFFER") << "\n";
          jt.push_back({{"t", rat_string(t)},
                        {"ball_size", ball.size()},
                        {"matches_reference", same}});
        }
        std::cout << (all_equal ? "metrics coincide along the segment: entropy is not "
                                  "strictly convex in the weights\n"
                                : "unexpected metric disagreement\n");
        json j{{"reference_ball_size", reference.size()},
               {"radius", rat_string(radius)},
               {"weights_along_segment", jt},
               {"all_equal", all_equal}};
        j["invocation"] = {{"subcommand", "demo nonstrict"}};
        write_report(*opt, j);
        return all_equal ? 0 : 1;
      };
    });
  }

  return cli.run(argc, argv);
}
