// statlim: construct sequences with prescribed limit behaviour, analyze
// value streams into point spectra, and run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 precondition violation,
// 3 malformed descriptor or stream.

#include "statlim/constructions.hpp"
#include "statlim/descriptor_json.hpp"
#include "statlim/probe.hpp"
#include "statlim/verify.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using namespace statlim;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error&) {
    throw parse_error("malformed JSON in '" + path + "'");
  }
  return j;
}

struct ConstructArgs {
  std::string triple_a, triple_b, triple_c;
  std::string lambda_b;
  std::string fsigma_b, fsigma_c, fsigma_ideal, fsigma_index;
  bool nonclosed = false;
  bool cantor = false;
  bool nofsigma = false;
  uint64_t n = 1000;
  std::string out;
};

SeqGen build_generator(const ConstructArgs& a) {
  int chosen = (!a.triple_a.empty() || !a.triple_b.empty()) + !a.lambda_b.empty() +
               (!a.fsigma_b.empty()) + a.nonclosed + a.cantor + a.nofsigma;
  if (chosen != 1) {
    throw parse_error(
        "choose exactly one construction: --triple, --lambda-only, --fsigma-pair, --nonclosed, "
        "--cantor, --nofsigma");
  }
  if (!a.triple_b.empty()) {
    RFSigma A = rfsigma_from_json(load_json(a.triple_a));
    RClosedSet B = rset_from_json(load_json(a.triple_b));
    RClosedSet C = rset_from_json(load_json(a.triple_c));
    return assemble_triple(A, B, C);
  }
  if (!a.lambda_b.empty()) {
    return lambda_only(rfsigma_from_json(load_json(a.lambda_b)));
  }
  if (!a.fsigma_b.empty()) {
    RClosedSet B = rset_from_json(load_json(a.fsigma_b));
    RClosedSet C = rset_from_json(load_json(a.fsigma_c));
    IdealSpec ideal = a.fsigma_ideal.empty()
                          ? IdealSpec::fsigma(Submeasure::summable_harmonic())
                          : ideal_from_json(load_json(a.fsigma_ideal));
    IndexSet I = a.fsigma_index.empty() ? IndexSet::powers(2)
                                        : index_set_from_json(load_json(a.fsigma_index));
    return fsigma_pair(B, C, ideal, I);
  }
  if (a.nonclosed) return nonclosed_demo();
  if (a.cantor) return cantor_generator();
  return nofsigma_sequence();
}

Submeasure phi_from_name(const std::string& name) {
  if (name == "density") return Submeasure::density();
  if (name == "summable-harmonic") return Submeasure::summable_harmonic();
  if (name == "counting") return Submeasure::counting();
  throw parse_error("unknown submeasure '" + name + "'");
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(path);
  if (!*f) throw parse_error("cannot open output '" + path + "'");
  return f;
}

constexpr uint64_t kMaxN = 10'000'000;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequences with prescribed statistical limit behaviour"};
  app.require_subcommand(1);

  // --- construct ---
  ConstructArgs cargs;
  auto* construct = app.add_subcommand("construct", "emit the first N terms of a construction");
  auto* triple_opt = construct->add_option("--triple", "A, B, C descriptor files (limit, cluster, ordinary sets)")
                         ->expected(3);
  construct->add_option("--lambda-only", cargs.lambda_b, "layered closed-set descriptor file");
  auto* fsig_opt = construct->add_option("--fsigma-pair", "B, C descriptor files")->expected(2);
  construct->add_option("--ideal", cargs.fsigma_ideal, "ideal descriptor for --fsigma-pair");
  construct->add_option("--index-set", cargs.fsigma_index,
                        "ideal-member index set routed to the ordinary channel");
  construct->add_flag("--nonclosed", cargs.nonclosed, "non-closed limit-set demo sequence");
  construct->add_flag("--cantor", cargs.cantor, "ternary transport of the uniform unit sequence");
  construct->add_flag("--nofsigma", cargs.nofsigma, "dyadic-column example sequence");
  construct->add_option("--n", cargs.n, "number of terms")->check(CLI::Range(uint64_t(1), kMaxN));
  construct->add_option("--out", cargs.out, "output path (default stdout)");

  // --- analyze ---
  struct {
    std::string in;
    std::string phi = "density";
    std::string grid_step = "1/32";
    std::string grid_lo = "0", grid_hi = "1";
    std::string radius = "1/64";
    std::string delta = "1/100";
    std::string out;
    std::vector<std::string> profile_centers;
    std::string profile_out;
    uint64_t n = 0;  // 0: use the whole stream
  } aargs;
  auto* analyze = app.add_subcommand("analyze", "spectrum and profiles over a JSONL value stream");
  analyze->add_option("--in", aargs.in, "JSONL stream path")->required();
  analyze->add_option("--phi", aargs.phi, "density | summable-harmonic | counting");
  analyze->add_option("--grid-step", aargs.grid_step, "grid spacing (rational)");
  analyze->add_option("--grid-lo", aargs.grid_lo, "grid start");
  analyze->add_option("--grid-hi", aargs.grid_hi, "grid end");
  analyze->add_option("--radius", aargs.radius, "neighbourhood radius (rational)");
  analyze->add_option("--delta", aargs.delta, "cluster/limit threshold (rational)");
  analyze->add_option("--n", aargs.n, "truncate the stream to N terms");
  analyze->add_option("--out", aargs.out, "CSV output path (default stdout)");
  analyze->add_option("--profile", aargs.profile_centers, "centers for local mass profiles");
  analyze->add_option("--profile-out", aargs.profile_out, "profile JSON output path");

  // --- verify ---
  struct {
    std::string suite = "all";
  } vargs;
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  verify_cmd->add_option("--suite", vargs.suite, "suite name or 'all'");

  // --- example ---
  struct {
    std::string dir = ".";
  } eargs;
  auto* example = app.add_subcommand("example", "write the principal experiment descriptor files");
  example->add_option("--dir", eargs.dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed()) {
      auto triple_files = triple_opt->results();
      if (triple_files.size() == 3) {
        cargs.triple_a = triple_files[0];
        cargs.triple_b = triple_files[1];
        cargs.triple_c = triple_files[2];
      }
      auto fsig_files = fsig_opt->results();
      if (fsig_files.size() == 2) {
        cargs.fsigma_b = fsig_files[0];
        cargs.fsigma_c = fsig_files[1];
      }
      SeqGen gen = build_generator(cargs);
      auto file = open_out(cargs.out);
      write_jsonl(file ? *file : std::cout, gen, cargs.n);
      return 0;
    }

    if (analyze->parsed()) {
      std::ifstream in(aargs.in);
      if (!in) throw parse_error("cannot open '" + aargs.in + "'");
      auto [values, meta] = read_jsonl(in);
      if (aargs.n != 0 && aargs.n < values.size()) values.resize(aargs.n);

      Submeasure phi = phi_from_name(aargs.phi);
      Rational lo = parse_rational(aargs.grid_lo);
      Rational hi = parse_rational(aargs.grid_hi);
      Rational step = parse_rational(aargs.grid_step);
      if (!(step > 0) || lo > hi) throw parse_error("invalid grid");
      std::vector<Rational> grid;
      for (Rational g = lo; g <= hi; g += step) grid.push_back(g);

      SpectrumParams params;
      params.radius = parse_rational(aargs.radius);
      params.delta = parse_rational(aargs.delta);
      SpectrumReport rep = spectrum(values, grid, phi, params);
      auto file = open_out(aargs.out);
      (file ? *file : std::cout) << rep.to_csv();

      if (!aargs.profile_centers.empty()) {
        std::vector<Rational> radii;
        for (int j = 1; j <= 9; ++j) radii.push_back(pow2(-j));
        nlohmann::json profiles = nlohmann::json::array();
        for (const auto& center : aargs.profile_centers) {
          UProfile p = u_profile(values, parse_rational(center), radii, phi);
          nlohmann::json jp{{"center", format_rational(p.center)}, {"prefix", p.prefix}};
          for (size_t i = 0; i < p.radii.size(); ++i) {
            jp["radii"].push_back(format_rational(p.radii[i]));
            jp["estimates"].push_back(format_rational(p.estimates[i]));
          }
          profiles.push_back(std::move(jp));
        }
        auto pf = open_out(aargs.profile_out);
        (pf ? *pf : std::cout) << profiles.dump(2) << "\n";
      }
      return 0;
    }

    if (verify_cmd->parsed()) {
      std::vector<verify::SuiteResult> results;
      if (vargs.suite == "all") {
        results = verify::run_all();
      } else {
        results.push_back(verify::run_suite(vargs.suite));
      }
      return verify::report(results, std::cout);
    }

    if (example->parsed()) {
      verify::TripleFixture f = verify::principal_triple_fixture();
      auto dump = [&](const std::string& name, const nlohmann::json& j) {
        std::string path = eargs.dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw parse_error("cannot write '" + path + "'");
        out << j.dump(2) << "\n";
        std::cout << "wrote " << path << "\n";
      };
      dump("a.json", to_json(f.A));
      dump("b.json", to_json(f.B));
      dump("c.json", to_json(f.C));
      std::cout << "run: statlim construct --triple a.json b.json c.json --n 100000 --out x.jsonl\n"
                << "     statlim analyze --in x.jsonl --grid-step 1/32 --radius 1/64 --delta 1/100\n";
      return 0;
    }
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const precondition_error& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
