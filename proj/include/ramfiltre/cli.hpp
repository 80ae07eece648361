#pragma once

#include <cstdlib>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ramfiltre/bigint.hpp"
#include "ramfiltre/engine.hpp"
#include "ramfiltre/errors.hpp"
#include "ramfiltre/filtration.hpp"
#include "ramfiltre/herbrand.hpp"
#include "ramfiltre/model.hpp"
#include "ramfiltre/mutate.hpp"
#include "ramfiltre/oracle.hpp"

namespace ramfiltre {
namespace cli {

using ordered_json = nlohmann::ordered_json;

// Exit codes: 0 success, 1 verification failures, 2 domain/usage error,
// 3 internal error, 4 path disagreement in `jump --path both`.
enum ExitCode : int {
  exit_ok = 0,
  exit_verify_failed = 1,
  exit_domain = 2,
  exit_internal = 3,
  exit_mismatch = 4,
};

inline Int parse_int(const std::string& s, const std::string& what) {
  try {
    return Int(s);
  } catch (const std::invalid_argument&) {
    throw DomainError(what + " is not a valid integer: " + s);
  }
}

inline VClass parse_vclass(const std::string& s) {
  if (s == "div" || s == "divisible") return VClass::Divisible;
  if (s == "nondiv" || s == "nondivisible") return VClass::NonDivisible;
  throw DomainError("vclass must be div or nondiv, got: " + s);
}

inline std::vector<TameFactor> parse_tame(const std::vector<std::string>& parts) {
  std::vector<TameFactor> out;
  for (const std::string& part : parts) {
    std::vector<std::string> bits;
    std::string cur;
    std::istringstream is(part);
    while (std::getline(is, cur, ':')) bits.push_back(cur);
    if (bits.size() < 2) throw DomainError("tame factor needs q:e1[:e2...], got: " + part);
    TameFactor tf;
    tf.q = parse_int(bits[0], "tame factor base");
    for (std::size_t i = 1; i < bits.size(); ++i) {
      Int e = parse_int(bits[i], "tame factor exponent");
      if (e < 1 || e > 1000000) throw DomainError("tame exponent out of range: " + bits[i]);
      tf.exponents.push_back(static_cast<unsigned>(e.get_ui()));
    }
    out.push_back(std::move(tf));
  }
  return out;
}

inline ordered_json field_json(const FieldLabel& f) {
  ordered_json j;
  j["r"] = f.r;
  j["s"] = f.s;
  return j;
}

inline ordered_json spec_json(const RadicalSpec& spec) {
  ordered_json j;
  j["p"] = spec.p.value.get_str();
  j["r"] = spec.r;
  j["s"] = spec.s;
  j["vclass"] = vclass_name(spec.vclass);
  ordered_json tame = ordered_json::array();
  for (const TameFactor& tf : spec.tame) {
    ordered_json t;
    t["q"] = tf.q.get_str();
    t["exponents"] = tf.exponents;
    tame.push_back(std::move(t));
  }
  j["tame"] = std::move(tame);
  j["p2_asserted"] = spec.p2_asserted;
  return j;
}

inline ordered_json filtration_json(const Filtration& f) {
  ordered_json j;
  j["spec"] = spec_json(f.spec);
  j["tame_multiplier"] = f.tame_multiplier.get_str();
  j["g0_order"] = f.g0_order.get_str();
  j["g1_order"] = f.g1_order.get_str();
  ordered_json jumps = ordered_json::array();
  for (const auto& lv : f.levels) jumps.push_back(lv.jump.get_str());
  j["jumps"] = std::move(jumps);
  ordered_json levels = ordered_json::array();
  for (const auto& lv : f.levels) {
    ordered_json l;
    l["jump"] = lv.jump.get_str();
    l["family"] = lv.family;
    l["k"] = lv.k;
    if (lv.family == "zero") {
      l["query"] = nullptr;
      l["fixed_field"] = nullptr;
    } else {
      l["query"] = field_json(lv.query);
      l["fixed_field"] = field_json(lv.fixed_field);
    }
    l["group_order"] = lv.group_order.get_str();
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  PiecewiseLinear phi = phi_from_filtration(f);
  ordered_json hb;
  ordered_json breaks = ordered_json::array();
  for (const Rat& b : phi.breaks) {
    ordered_json point;
    point["u"] = rat_str(b);
    point["phi"] = rat_str(phi.value(b));
    breaks.push_back(std::move(point));
  }
  hb["breakpoints"] = std::move(breaks);
  ordered_json slopes = ordered_json::array();
  for (const Rat& m : phi.slopes) slopes.push_back(rat_str(m));
  hb["slopes"] = std::move(slopes);
  j["herbrand_phi"] = std::move(hb);
  j["different_valuation"] = different_valuation(f).get_str();
  return j;
}

inline std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

inline void filtration_csv(const Filtration& f, std::ostream& out) {
  out << "level,jump,family,k,query,fixed_field,group_order\n";
  for (std::size_t i = 0; i < f.levels.size(); ++i) {
    const auto& lv = f.levels[i];
    out << i << "," << lv.jump << "," << lv.family << "," << lv.k << ",";
    if (lv.family == "zero") out << ",";
    else out << csv_quote(label_str(lv.query)) << "," << csv_quote(label_str(lv.fixed_field));
    out << "," << lv.group_order << "\n";
  }
}

inline void filtration_text(const Filtration& f, std::ostream& out) {
  const int n = static_cast<int>(f.spec.s.size());
  out << "spec: p=" << f.spec.p.value << " " << label_str({f.spec.r, f.spec.s}) << " "
      << vclass_name(f.spec.vclass) << "\n";
  out << "degree: " << f.g0_order << " (wild " << f.g1_order << ", tame "
      << f.tame_multiplier << ")\n";
  out << "jumps:";
  for (const auto& lv : f.levels) out << " " << lv.jump;
  out << "\n";
  for (std::size_t i = 0; i < f.levels.size(); ++i) {
    const auto& lv = f.levels[i];
    out << "level " << i << ": jump " << lv.jump << ", order " << lv.group_order
        << ", family " << lv.family;
    if (lv.family != "zero") {
      out << ", t_{" << n << "," << lv.k << "}(" << lv.query.r << ",(";
      for (std::size_t x = 0; x < lv.query.s.size(); ++x)
        out << (x ? "," : "") << lv.query.s[x];
      out << ")), fixes " << label_str(lv.fixed_field);
    }
    out << "\n";
  }
  PiecewiseLinear phi = phi_from_filtration(f);
  out << "phi breakpoints:";
  for (const Rat& b : phi.breaks) out << " (" << rat_str(b) << ", " << rat_str(phi.value(b)) << ")";
  out << "\n";
  out << "different valuation: " << different_valuation(f) << "\n";
}

struct SpecOptions {
  std::string p = "3";
  unsigned r = 1;
  std::vector<unsigned> s;
  std::string vclass = "div";
  std::vector<std::string> tame;
  bool assert_p2 = false;

  RadicalSpec to_spec() const {
    RadicalSpec spec{Prime(parse_int(p, "p")), r, s, parse_vclass(vclass),
                     parse_tame(tame), assert_p2};
    validate(spec);
    return spec;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--p", p, "residue characteristic (prime)")->required();
    cmd->add_option("--r", r, "cyclotomic level r")->required();
    cmd->add_option("--s", s, "radical exponents, comma separated")
        ->required()
        ->delimiter(',');
    cmd->add_option("--vclass", vclass, "valuation class: div or nondiv");
    cmd->add_option("--tame", tame,
                    "tame factors q:e1[:e2...], comma separated")
        ->delimiter(',');
    cmd->add_flag("--assert-p2", assert_p2,
                  "assert the extra hypothesis needed when p = 2");
  }
};

inline GridSpec preset_grid(const std::string& name) {
  GridSpec g;
  if (name == "small") {
    g.primes = {Int(3)};
    g.n_max = 2;
    g.r_max = 4;
    g.tame_degrees = {Int(1), Int(5)};
  } else if (name == "default" || name.empty()) {
    // defaults already set
  } else if (name == "extended") {
    g.primes = {Int(2), Int(3), Int(5), Int(7)};
    g.assert_p2 = true;
  } else {
    throw DomainError("unknown grid preset: " + name + " (try small, default, extended)");
  }
  return g;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ramification filtrations of radical extensions of unramified p-adic fields"};
  app.require_subcommand(1);
  std::string format = "json";

  // ---- compute ----------------------------------------------------------
  auto* c_compute = app.add_subcommand(
      "compute", "full filtration, Herbrand function and different of a tower");
  SpecOptions compute_opts;
  compute_opts.attach(c_compute);
  c_compute->add_option("--format", format, "json, csv or text");

  // ---- jump -------------------------------------------------------------
  auto* c_jump = app.add_subcommand("jump", "one ramification jump t_{n,k}");
  SpecOptions jump_opts;
  jump_opts.attach(c_jump);
  int jump_k = 1;
  std::string jump_path = "both";
  c_jump->add_option("--k", jump_k, "step index 1..n+1")->required();
  c_jump->add_option("--path", jump_path, "closed, rec or both");
  c_jump->add_option("--format", format, "json or text");

  // ---- verify -----------------------------------------------------------
  auto* c_verify = app.add_subcommand("verify", "run the self-verification grid");
  std::string grid_name;
  int jobs = 1;
  std::string mutate_site;
  std::vector<std::string> verify_primes;
  int verify_nmax = -1;
  int verify_rmax = -1;
  bool verify_p2 = false;
  c_verify->add_option("--grid", grid_name, "preset: small, default, extended");
  c_verify->add_option("--jobs", jobs, "worker threads");
  c_verify->add_option("--mutate", mutate_site,
                       "activate a named formula mutation (negative control)");
  c_verify->add_option("--primes", verify_primes, "override primes")->delimiter(',');
  c_verify->add_option("--nmax", verify_nmax, "override maximal number of radicals")
      ->check(CLI::NonNegativeNumber);
  c_verify->add_option("--rmax", verify_rmax, "override maximal cyclotomic level")
      ->check(CLI::NonNegativeNumber);
  c_verify->add_flag("--p2", verify_p2, "include p = 2 (asserting its hypothesis)");

  // ---- table ------------------------------------------------------------
  auto* c_table = app.add_subcommand("table", "CSV table of jumps over a range");
  std::string table_p = "3";
  int table_n = 1;
  unsigned table_rmax = 4;
  std::string table_vclass = "div";
  int table_k = -1;
  c_table->add_option("--p", table_p, "prime")->required();
  c_table->add_option("--n", table_n, "number of radicals")->required();
  c_table->add_option("--rmax", table_rmax, "maximal cyclotomic level")->required();
  c_table->add_option("--vclass", table_vclass, "div or nondiv");
  c_table->add_option("--k", table_k, "step index (default n+1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? exit_ok : exit_domain;
  }

  try {
    if (*c_compute) {
      RadicalSpec spec = compute_opts.to_spec();
      JumpEngine eng(spec.p.value);
      Filtration f = build_filtration(spec, eng);
      if (format == "json") out << filtration_json(f).dump(2) << "\n";
      else if (format == "csv") filtration_csv(f, out);
      else if (format == "text") filtration_text(f, out);
      else throw DomainError("unknown format: " + format);
      return exit_ok;
    }

    if (*c_jump) {
      RadicalSpec spec = jump_opts.to_spec();
      if (!spec.tame.empty())
        throw DomainError("jump values are tame-independent; drop --tame");
      JumpEngine eng(spec.p.value);
      JumpQuery q{spec.r, spec.s, jump_k, spec.vclass};
      bool have_closed = false, have_rec = false;
      Int closed = 0, rec = 0;
      std::string window_note;
      if (jump_path == "closed" || jump_path == "both") {
        try {
          closed = jump_k == 1 ? eng.t_n1(q) : eng.t_nk_closed(q);
          have_closed = true;
        } catch (const DomainError& e) {
          if (jump_path == "closed") throw;
          window_note = e.what();
        }
      }
      if (jump_path == "rec" || jump_path == "both") {
        rec = eng.t_nk_rec(q);
        have_rec = true;
      }
      if (jump_path != "closed" && jump_path != "rec" && jump_path != "both")
        throw DomainError("unknown path: " + jump_path);
      const bool mismatch = have_closed && have_rec && closed != rec;
      const Int& value = have_rec ? rec : closed;
      if (format == "json") {
        ordered_json j;
        j["query"] = spec_json(spec);
        j["k"] = jump_k;
        j["paths"] = ordered_json::object();
        j["paths"]["closed"] = have_closed ? ordered_json(closed.get_str()) : ordered_json(nullptr);
        j["paths"]["rec"] = have_rec ? ordered_json(rec.get_str()) : ordered_json(nullptr);
        j["value"] = value.get_str();
        j["agree"] = !mismatch;
        out << j.dump(2) << "\n";
      } else if (format == "text") {
        out << value << "\n";
      } else {
        throw DomainError("unknown format: " + format);
      }
      if (!window_note.empty())
        err << "note: closed form unavailable (" << window_note << "); recurrence value used\n";
      if (mismatch) {
        err << "path mismatch: closed=" << closed << " rec=" << rec << "\n";
        return exit_mismatch;
      }
      return exit_ok;
    }

    if (*c_verify) {
      if (grid_name.empty()) {
        if (const char* env = std::getenv("RAMFILTRE_GRID")) grid_name = env;
      }
      GridSpec grid = preset_grid(grid_name);
      if (!verify_primes.empty()) {
        grid.primes.clear();
        for (const std::string& ps : verify_primes)
          grid.primes.push_back(parse_int(ps, "prime"));
      }
      if (verify_nmax >= 0) grid.n_max = verify_nmax;
      if (verify_rmax >= 0) grid.r_max = static_cast<unsigned>(verify_rmax);
      if (verify_p2) grid.assert_p2 = true;
      ScopedMutation mut(mutate_site.empty() ? MutationSite::none
                                             : parse_mutation(mutate_site));
      std::vector<RadicalSpec> specs = enumerate_grid(grid);
      out << "grid: " << specs.size() << " tower specs\n";
      if (specs.empty()) out << "warning: empty grid, no checks to run\n";
      for (const Int& pr : grid.primes)
        if (pr == 2 && grid.assert_p2)
          out << "note: p = 2 towers rely on the user-asserted hypothesis; towers "
                 "whose consecutive steps share a jump value are reported as "
                 "hard errors, never merged\n";
      Report rep = run_all_checks(grid, jobs);
      const std::size_t shown = std::min<std::size_t>(rep.failures.size(), 20);
      for (std::size_t i = 0; i < shown; ++i) {
        const Failure& f = rep.failures[i];
        out << "FAIL [" << f.check << "] " << f.query << ": expected " << f.expected
            << ", got " << f.got << "\n";
      }
      if (rep.failures.size() > shown)
        out << "... " << (rep.failures.size() - shown) << " more failures\n";
      out << "checks: " << rep.checks_run << " run, " << rep.failures.size()
          << " failed\n";
      return rep.ok() ? exit_ok : exit_verify_failed;
    }

    if (*c_table) {
      Int p = parse_int(table_p, "p");
      VClass vc = parse_vclass(table_vclass);
      if (table_n < 1) throw DomainError("table needs n >= 1");
      const int k = table_k < 0 ? table_n + 1 : table_k;
      if (k < 1 || k > table_n + 1) throw DomainError("k out of range 1..n+1");
      JumpEngine eng(p);
      out << "r,s,value\n";
      for (unsigned r = (k == 1 ? 2u : 1u); r <= table_rmax; ++r) {
        std::vector<std::vector<unsigned>> vecs;
        enumerate_vectors(table_n, r, vc, vecs);
        for (const auto& s : vecs) {
          if (*std::max_element(s.begin(), s.end()) > r) continue;
          Int v = eng.t_nk_rec({r, s, k, vc});
          out << r << ",";
          for (std::size_t i = 0; i < s.size(); ++i) out << (i ? ";" : "") << s[i];
          out << "," << v << "\n";
        }
      }
      return exit_ok;
    }

    throw InternalError("no subcommand dispatched");
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return exit_domain;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_internal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_internal;
  }
}

}  // namespace cli
}  // namespace ramfiltre
