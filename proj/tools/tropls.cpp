// tropls: command-line front end for the tropls library.
//
// Exit codes: 0 pass/true, 1 fail/false, 2 input error, 3 undetermined.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tropls/catalog.hpp"

using namespace tropls;

namespace {

constexpr int kPass = 0, kFail = 1, kInput = 2, kUnknown = 3;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("TROPLS_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw input_error("TROPLS_SEED must be a non-negative integer");
    }
  }
  return 1;
}

struct Common {
  std::string graph, divisor, module;
  std::vector<std::string> functions;
  bool json = false;
  bool dot = false;

  GraphPtr load_graph() const {
    if (graph.empty()) throw input_error("missing --graph");
    return make_graph(graph_from_json(io::load(graph)));
  }
  TropicalSubmodule load_module(const GraphPtr& g) const {
    if (module.empty()) throw input_error("missing --module");
    return module_from_json(g, io::load(module));
  }
  Divisor load_divisor(const GraphPtr& g) const {
    if (divisor.empty()) throw input_error("missing --divisor");
    return divisor_from_json(*g, io::load(divisor));
  }
  std::vector<PLFunction> load_functions(const GraphPtr& g) const {
    std::vector<PLFunction> fs;
    for (const auto& f : functions) fs.push_back(function_from_json(g, io::load(f)));
    if (fs.empty()) throw input_error("need at least one --function");
    return fs;
  }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::optional<Rational>> parse_coefficients(const std::string& s) {
  std::vector<std::optional<Rational>> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" "));
    tok.erase(tok.find_last_not_of(" ") + 1);
    if (tok == "inf") out.push_back(std::nullopt);
    else out.push_back(parse_rational(tok));
  }
  return out;
}

void print_report(const MetricGraph& g, const TLSReport& r) {
  auto line = [&](const char* name, const AxiomVerdict& v) {
    std::cout << name << ": " << state_name(v.state) << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
    if (v.uncovered_divisor) std::cout << "  uncovered divisor: " << describe(g, *v.uncovered_divisor) << "\n";
    if (v.uncovered_point) std::cout << "  uncovered point: " << g.describe(*v.uncovered_point) << "\n";
    if (v.bad_tangent) std::cout << "  tangent: " << describe_tangent(g, *v.bad_tangent) << "\n";
  };
  std::cout << "rank " << r.rank << " verdict: " << (r.pass() ? "pass" : r.fail() ? "fail" : "unknown") << "\n";
  line("axiom 1", r.axiom1);
  line("axiom 2", r.axiom2);
  line("axiom 3", r.axiom3);
  line("slope count", r.slope_count);
  std::cout << "property 4: " << r.property4 << "\n";
  line("property 5", r.property5);
}

int report_code(const TLSReport& r) { return r.pass() ? kPass : r.fail() ? kFail : kUnknown; }

ValuatedMatroid circuits_for(const TropicalSubmodule& m, const std::string& path) {
  if (!path.empty()) return valuated_from_json(io::load(path));
  return rank1_valuated_circuits(m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divisors on metric graphs and tropical linear series"};
  app.require_subcommand(1);
  Common c;
  int code = kPass;
  std::uint64_t seed = 0;
  bool seed_set = false;

  auto graph_opts = [&](CLI::App* s) {
    s->add_option("-g,--graph", c.graph, "graph JSON file or inline JSON");
    s->add_flag("--json", c.json, "machine-readable output");
  };

  // rank / reduce
  auto* rank = app.add_subcommand("rank", "Baker-Norine rank of a divisor");
  graph_opts(rank);
  rank->add_option("-d,--divisor", c.divisor)->required();

  auto* reduce = app.add_subcommand("reduce", "reduced divisor with respect to a base point");
  graph_opts(reduce);
  reduce->add_option("-d,--divisor", c.divisor)->required();
  std::string base = R"({"vertex":null})";
  reduce->add_option("--base", base, "base point JSON, e.g. '{\"vertex\":\"v\"}'")->required();

  // dep
  auto* dep = app.add_subcommand("dep", "tropical dependence");
  dep->require_subcommand(1);
  auto* dep_decide = dep->add_subcommand("decide", "decide dependence of a finite set");
  graph_opts(dep_decide);
  dep_decide->add_option("-f,--function", c.functions)->required();
  auto* dep_verify = dep->add_subcommand("verify", "verify a given coefficient vector");
  graph_opts(dep_verify);
  dep_verify->add_option("-f,--function", c.functions)->required();
  std::string coeffs;
  dep_verify->add_option("--coeffs", coeffs, "comma separated rationals, 'inf' for an absent term")->required();

  // module
  auto* mod = app.add_subcommand("module", "finitely generated tropical submodules");
  mod->require_subcommand(1);
  auto* mod_member = mod->add_subcommand("member", "membership of a function");
  auto* mod_min = mod->add_subcommand("minimize", "minimal generating subset");
  auto* mod_slopes = mod->add_subcommand("slopes", "slope vectors");
  auto* mod_cover = mod->add_subcommand("cover", "covered locus");
  int cover_rank = 1;
  for (auto* s : {mod_member, mod_min, mod_slopes, mod_cover}) {
    graph_opts(s);
    s->add_option("-m,--module", c.module)->required();
  }
  mod_member->add_option("-f,--function", c.functions)->required();
  std::string tangent;
  mod_slopes->add_option("--tangent", tangent, "tangent JSON {\"at\":point,\"edge\":id,\"dir\":1}");
  mod_cover->add_option("--rank", cover_rank);

  // tls
  auto* tls = app.add_subcommand("tls", "tropical linear series");
  tls->require_subcommand(1);
  auto* tls_verify = tls->add_subcommand("verify", "check the axioms");
  auto* tls_gen = tls->add_subcommand("generate-rank1", "canonical generators of a rank-1 series");
  auto* tls_obs = tls->add_subcommand("obstruct-rank1", "search for a proof that R(D) has no rank-1 series");
  auto* tls_res = tls->add_subcommand("restrict", "restriction to a connected subgraph");
  int r = 1, samples = 200;
  std::vector<std::string> witnesses;
  std::string subgraph;
  for (auto* s : {tls_verify, tls_gen, tls_res}) {
    graph_opts(s);
    s->add_option("-m,--module", c.module)->required();
  }
  for (auto* s : {tls_verify, tls_res}) {
    s->add_option("--rank", r);
    s->add_option("--samples", samples);
    s->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });
  }
  tls_verify->add_option("--witness", witnesses, "rank-1 subseries module JSON for axiom 3");
  graph_opts(tls_obs);
  tls_obs->add_option("-d,--divisor", c.divisor)->required();
  tls_res->add_option("--subgraph", subgraph, "{\"segments\":[{\"edge\":id,\"from\":q,\"to\":q}]}")->required();

  // matroid
  auto* mat = app.add_subcommand("matroid", "matroids and the rank-2 series on their Levi graphs");
  mat->require_subcommand(1);
  std::string matroid_path, valuated_path, point;
  auto* mat_check = mat->add_subcommand("check", "circuit axioms");
  auto* mat_flats = mat->add_subcommand("flats", "rank-2 flats");
  auto* mat_levi = mat->add_subcommand("levi", "Levi graph");
  auto* mat_series = mat->add_subcommand("series", "rank-2 series of the matroid");
  auto* mat_berg = mat->add_subcommand("bergman", "Bergman fan membership");
  for (auto* s : {mat_check, mat_flats, mat_levi, mat_series}) {
    s->add_option("-M,--matroid", matroid_path)->required();
    s->add_flag("--json", c.json);
  }
  bool series_verify = false;
  mat_series->add_flag("--verify", series_verify, "also verify the series at rank 2");
  mat_berg->add_option("-M,--matroid", matroid_path);
  mat_berg->add_option("-V,--valuated", valuated_path);
  mat_berg->add_option("--point", point, "comma separated coordinates, 'inf' allowed")->required();
  mat_berg->add_flag("--json", c.json);

  // morph
  auto* morph = app.add_subcommand("morph", "tropical modifications and balancing");
  morph->require_subcommand(1);
  auto* morph_mod = morph->add_subcommand("modify", "modification along the generators");
  auto* morph_map = morph->add_subcommand("map", "coordinate map to tropical projective space");
  auto* morph_bal = morph->add_subcommand("balance", "balancing check against the rank-2 tree");
  for (auto* s : {morph_mod, morph_map, morph_bal}) {
    graph_opts(s);
    s->add_option("-m,--module", c.module)->required();
    s->add_flag("--dot", c.dot, "Graphviz output");
  }
  morph_bal->add_option("-V,--valuated", valuated_path, "valuated circuits JSON; computed when absent");

  // example
  auto* ex = app.add_subcommand("example", "built-in worked examples");
  std::string ex_name;
  bool ex_check = false, ex_list = false;
  FixtureParams params;
  ex->add_option("name", ex_name, "fixture name");
  ex->add_flag("--list", ex_list, "list fixture names");
  ex->add_flag("--check", ex_check, "evaluate the expected facts");
  ex->add_flag("--json", c.json);
  ex->add_flag("--dot", c.dot);
  for (const char* p : {"m", "l1", "l2", "l3", "x", "w0", "w1"})
    ex->add_option_function<std::string>(std::string("--") + p, [&params, p](const std::string& v) { params[p] = v; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (!seed_set) seed = default_seed();

    if (*rank) {
      GraphPtr g = c.load_graph();
      Divisor d = c.load_divisor(g);
      int k = bn_rank(g, d);
      if (c.json) emit({{"kind", "rank"}, {"rank", k}});
      else std::cout << "rank " << k << "\n";
    } else if (*reduce) {
      GraphPtr g = c.load_graph();
      Divisor d = c.load_divisor(g);
      Point q = point_from_json(*g, io::load(base));
      Reduction red = dhar_reduce(g, d, q);
      if (c.json)
        emit({{"kind", "reduction"}, {"reduced", to_json(*g, red.reduced)}, {"witness", to_json(red.witness)}});
      else
        std::cout << "reduced: " << describe(*g, red.reduced) << "\n";
    } else if (*dep_decide) {
      GraphPtr g = c.load_graph();
      auto fs = c.load_functions(g);
      DependenceAnswer a = decide_dependence(fs);
      if (c.json) {
        emit(to_json(*g, a));
      } else {
        std::cout << status_name(a.status) << "\n";
        if (a.status == DependenceAnswer::Dependent) {
          std::cout << "coefficients:";
          for (const auto& x : a.coefficients) std::cout << " " << (x ? to_string(*x) : "inf");
          std::cout << "\n";
        }
        if (!a.certificate_coefficients.empty()) {
          std::cout << "certificate:";
          for (const auto& x : a.certificate_coefficients) std::cout << " " << to_string(x);
          std::cout << "\n";
        }
      }
      code = a.status == DependenceAnswer::Dependent ? kPass : a.status == DependenceAnswer::Independent ? kFail : kUnknown;
    } else if (*dep_verify) {
      GraphPtr g = c.load_graph();
      auto fs = c.load_functions(g);
      auto a = parse_coefficients(coeffs);
      if (a.size() != fs.size()) throw input_error("--coeffs needs one entry per function");
      CombinationVerdict v = verify_combination(fs, a);
      if (c.json) emit(to_json(*g, v));
      else std::cout << kind_name(v.kind) << "\n";
      code = v.kind == CombinationVerdict::Dependence ? kPass : v.kind == CombinationVerdict::Certificate ? kFail : kUnknown;
    } else if (*mod_member) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = c.load_module(g);
      PLFunction psi = c.load_functions(g).at(0);
      auto a = membership(psi, m);
      json j{{"kind", "membership"}, {"member", a.has_value()}};
      if (a) {
        j["coefficients"] = json::array();
        for (const auto& x : *a) j["coefficients"].push_back(to_string(x));
      }
      if (c.json) emit(j);
      else std::cout << (a ? "member" : "not a member") << "\n";
      code = a ? kPass : kFail;
    } else if (*mod_min) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = minimize_generators(c.load_module(g));
      json j = to_json(m);
      j["kind"] = "module";
      if (c.json) emit(j);
      else std::cout << m.generators.size() << " generators\n";
    } else if (*mod_slopes) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = c.load_module(g);
      json rows = json::array();
      std::vector<SlopeRow> table;
      if (!tangent.empty()) {
        Tangent z = tangent_from_json(*g, io::load(tangent));
        table.push_back({z, slope_vector(m, z).slopes});
      } else {
        table = slope_table(m);
      }
      for (const auto& row : table) {
        rows.push_back({{"tangent", to_json(*g, row.tangent)}, {"slopes", row.slopes}});
        if (!c.json) std::cout << describe_tangent(*g, row.tangent) << ": " << detail::slopes_text(row.slopes) << "\n";
      }
      if (c.json) emit({{"kind", "slopes"}, {"rows", rows}});
    } else if (*mod_cover) {
      GraphPtr g = c.load_graph();
      CoveredLocus cl = covered_locus(c.load_module(g), cover_rank);
      if (c.json) emit(to_json(*g, cl));
      else std::cout << (cl.covers_graph() ? "covers the graph" : "does not cover the graph") << (cl.incomplete ? " (incomplete)" : "") << "\n";
      code = cl.covers_graph() ? kPass : cl.incomplete ? kUnknown : kFail;
    } else if (*tls_verify) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = c.load_module(g);
      VerifyOptions opt;
      opt.samples = samples;
      opt.seed = seed;
      for (const auto& w : witnesses) opt.witnesses.push_back(module_from_json(g, io::load(w)));
      TLSReport rep = verify_tls(m, r, opt);
      if (c.json) emit(to_json(*g, rep));
      else print_report(*g, rep);
      code = report_code(rep);
    } else if (*tls_gen) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule canon = rank1_canonical_generators(c.load_module(g));
      json j = to_json(canon);
      j["kind"] = "module";
      if (c.json) emit(j);
      else std::cout << canon.generators.size() << " canonical generators\n";
    } else if (*tls_obs) {
      GraphPtr g = c.load_graph();
      Divisor d = c.load_divisor(g);
      auto ob = rank1_obstruction(g, d);
      if (c.json) {
        json j{{"kind", "obstruction"}, {"found", ob.has_value()}};
        if (ob) {
          j["points"] = json::array();
          for (const auto& p : ob->points) j["points"].push_back(to_json(*g, p));
          j["functions"] = json::array();
          for (const auto& f : ob->functions) j["functions"].push_back(to_json(f));
          j["dependence"] = to_json(*g, ob->answer);
        }
        emit(j);
      } else if (ob) {
        std::cout << "no rank-1 tropical linear series in R(D): independent forced functions at";
        for (const auto& p : ob->points) std::cout << " " << g->describe(p);
        std::cout << "\n";
      } else {
        std::cout << "no obstruction found\n";
      }
      code = ob ? kPass : kUnknown;
    } else if (*tls_res) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = c.load_module(g);
      RestrictedSeries rs = restrict_tls(m, subgraph_from_json(*g, io::load(subgraph)));
      TLSReport rep = verify_tls(rs.module, r, {samples, seed});
      const MetricGraph& sg = *rs.module.graph;
      if (c.json) {
        json b = json::array();
        for (const auto& [p, n] : rs.boundary) b.push_back({{"at", to_json(sg, p)}, {"n", n}});
        emit({{"kind", "restriction"},
              {"graph", to_json(sg)},
              {"module", to_json(rs.module)},
              {"boundary", b},
              {"report", to_json(sg, rep)}});
      } else {
        std::cout << "restricted divisor: " << describe(sg, rs.module.divisor) << "\n";
        print_report(sg, rep);
      }
      code = report_code(rep);
    } else if (*mat_check || *mat_flats || *mat_levi || *mat_series) {
      Matroid M = matroid_from_json(io::load(matroid_path));
      if (*mat_check) {
        Verdict v = matroid_axioms_check(M);
        if (c.json) emit({{"kind", "matroid_check"}, {"pass", v.pass}, {"message", v.message}, {"matroid", to_json(M)}});
        else std::cout << (v.pass ? "pass: " : "fail: ") << v.message << "\n";
        code = v.pass ? kPass : kFail;
      } else if (*mat_flats) {
        json fl = json::array();
        for (ElementSet f : rank2_flats(M)) {
          fl.push_back(flat_name(M, f));
          if (!c.json) std::cout << flat_name(M, f) << "\n";
        }
        if (c.json) emit({{"kind", "flats"}, {"flats", fl}});
      } else if (*mat_levi) {
        MetricGraph g = levi_graph(M);
        if (c.json) emit({{"kind", "graph"}, {"graph", to_json(g)}});
        else std::cout << g.num_vertices() << " vertices, " << g.num_edges() << " edges, genus " << genus(g) << "\n";
      } else {
        CartwrightSeries S = cartwright_series(M);
        json j{{"kind", "matroid_series"}, {"graph", to_json(*S.graph)}, {"module", to_json(S.module)}};
        if (!c.json) std::cout << "D_M = " << describe(*S.graph, S.divisor) << "\n";
        if (series_verify) {
          TLSReport rep = verify_tls(S.module, 2, {samples, seed});
          j["report"] = to_json(*S.graph, rep);
          if (!c.json) print_report(*S.graph, rep);
          code = report_code(rep);
        }
        if (c.json) emit(j);
      }
    } else if (*mat_berg) {
      ValuatedMatroid V;
      if (!valuated_path.empty()) V = valuated_from_json(io::load(valuated_path));
      else if (!matroid_path.empty()) V = trivially_valuated(matroid_from_json(io::load(matroid_path)));
      else throw input_error("need --matroid or --valuated");
      auto x = parse_coefficients(point);
      if (static_cast<int>(x.size()) != V.size()) throw input_error("--point needs one coordinate per element");
      bool in = bergman_membership(x, V);
      if (c.json) emit({{"kind", "bergman"}, {"member", in}});
      else std::cout << (in ? "in the Bergman fan" : "not in the Bergman fan") << "\n";
      code = in ? kPass : kFail;
    } else if (*morph_mod || *morph_map || *morph_bal) {
      GraphPtr g = c.load_graph();
      TropicalSubmodule m = c.load_module(g);
      ModifiedGraph mg = tropical_modification(m);
      PLMap map = coordinate_map(mg);
      if (*morph_mod) {
        if (c.dot) std::cout << modified_graph_dot(map);
        else if (c.json) emit(to_json(mg));
        else for (const auto& ray : mg.rays) std::cout << ray.id << " " << detail::slopes_text(ray.slopes) << "\n";
      } else if (*morph_map) {
        json imgs = json::array();
        for (int v = 0; v < g->num_vertices(); ++v) {
          json coords = json::array();
          for (const auto& x : map.image(Point::at_vertex(v))) coords.push_back(to_string(x));
          imgs.push_back({{"vertex", g->vertex_name(v)}, {"image", coords}});
          if (!c.json) {
            std::cout << g->vertex_name(v) << " ->";
            for (const auto& x : map.image(Point::at_vertex(v))) std::cout << " " << to_string(x);
            std::cout << "\n";
          }
        }
        if (c.json) emit({{"kind", "map"}, {"images", imgs}, {"modification", to_json(mg)}});
      } else {
        ValuatedMatroid V = circuits_for(m, valuated_path);
        BalanceReport b = balancing_check(map, V);
        if (c.dot) {
          std::cout << modified_graph_dot(map, &b);
          if (V.rank == 2) std::cout << tree_dot(rank1_tree_target(V));
        } else if (c.json) {
          json j = to_json(*g, b);
          j["circuits"] = to_json(V);
          if (V.rank == 2) j["target"] = to_json(rank1_tree_target(V));
          emit(j);
        } else {
          std::cout << (b.pass ? "balanced: " : "not balanced: ") << b.detail << "\n";
        }
        code = b.pass ? kPass : kFail;
      }
    } else if (*ex) {
      if (ex_list) {
        for (const auto& n : list_fixtures()) std::cout << n << "\n";
        return kPass;
      }
      if (ex_name.empty()) throw input_error("example needs a fixture name (see --list)");
      FixtureRun run = run_fixture(ex_name, params, ex_check, seed);
      if (c.dot) {
        std::cout << run.dot;
      } else if (c.json) {
        emit(to_json(run));
      } else {
        std::cout << run.name << ": " << run.divisor.degree() << " chips, " << run.verdict << "\n";
        for (const auto& f : run.facts)
          std::cout << (f.pass ? "  PASS " : "  FAIL ") << f.name << (f.detail.empty() ? "" : " [" + f.detail + "]") << "\n";
      }
      if (ex_check) code = run.all_pass() ? kPass : kFail;
    }
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kInput;
  }
  return code;
}
