#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "lawvere/metalang.hpp"
#include "lawvere/report.hpp"
#include "lawvere/theories.hpp"

using namespace lawvere;

namespace {

constexpr int kExitOk = 0, kExitFail = 1, kExitUsage = 2, kExitInconclusive = 3;

int exit_code(Status s, bool downgrade) {
  switch (s) {
    case Status::Ok: return kExitOk;
    case Status::Fail: return kExitFail;
    case Status::Inconclusive: return downgrade ? kExitOk : kExitInconclusive;
  }
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite Lawvere theories: orders, tensors, conservativity, metalanguage"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false, downgrade = false;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  app.add_flag("--json", as_json, "Print the report as JSON");
  app.add_option("--seed", seed, "Seed for sampled law suites");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--allow-inconclusive", downgrade, "Exit 0 on inconclusive verdicts");

  std::string theory, monad, mode = "full", suite, file;
  std::size_t n = 0, m = 0, N = 2, max_type_size = 2;
  bool two_sided = false, verify = false;

  auto* theories = app.add_subcommand("theories", "Built-in theories");
  auto* theories_list = theories->add_subcommand("list", "List built-in theory specs");
  theories->require_subcommand(1);

  auto* hom = app.add_subcommand("hom", "Enumerate L(n,m)");
  hom->add_option("--theory", theory)->required();
  hom->add_option("--n", n)->required();
  hom->add_option("--m", m)->required();

  auto* order = app.add_subcommand("order", "Approximation preorder");
  order->add_option("--theory", theory)->required();
  order->add_option("--max-size", N)->required();
  order->add_flag("--two-sided", two_sided, "Also close under precomposition");

  auto* cons = app.add_subcommand("conservativity", "Order-theoretic conservativity criterion");
  cons->add_option("--theory", theory)->required();
  cons->add_option("--max-size", N)->required();

  auto* tensor = app.add_subcommand("tensor", "Tensor with nondeterminism");
  tensor->add_option("--theory", theory)->required();
  tensor->add_option("--max-size", N)->required();
  tensor->add_option("--mode", mode)->check(CLI::IsMember({"full", "nonempty"}));
  tensor->add_flag("--verify", verify, "Check category, tensor and monad laws");

  auto* unif = app.add_subcommand("uniformity", "Uniformity witnesses for every morphism n -> m");
  unif->add_option("--theory", theory)->required();
  unif->add_option("--n", n)->required();
  unif->add_option("--m", m)->required();

  auto* add = app.add_subcommand("additivity", "Complete additivity");
  add->add_option("--theory", theory)->required();
  add->add_option("--max-size", N)->required();

  auto* run = app.add_subcommand("run", "Evaluate a metalanguage program");
  run->add_option("FILE", file)->required()->check(CLI::ExistingFile);
  run->add_option("--monad", monad)->required();

  auto* laws = app.add_subcommand("laws", "Law suites");
  laws->add_option("--monad", monad)->required();
  laws->add_option("--suite", suite)->required()->check(CLI::IsMember({"monad", "kleene", "fl"}));
  laws->add_option("--max-type-size", max_type_size)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ReportOptions opt;
  opt.jobs = jobs;
  opt.seed = seed;
  try {
    std::optional<Report> r;
    if (theories_list->parsed()) r = report_theories(opt);
    else if (hom->parsed()) r = report_hom(theory, n, m, opt);
    else if (order->parsed()) r = report_order(theory, N, two_sided, opt);
    else if (cons->parsed()) r = report_conservativity(theory, N, opt);
    else if (tensor->parsed()) r = report_tensor(theory, N, mode, verify, opt);
    else if (unif->parsed()) r = report_uniformity(theory, n, m, opt);
    else if (add->parsed()) r = report_additivity(theory, N, opt);
    else if (run->parsed()) r = report_run(file, monad, opt);
    else if (laws->parsed()) r = report_laws(monad, suite, max_type_size, opt);
    if (!r) return kExitUsage;
    if (as_json) std::cout << to_json(*r).dump(2) << "\n";
    else std::cout << r->text;
    return exit_code(r->status, downgrade);
  } catch (const CapacityExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return downgrade ? kExitOk : kExitInconclusive;
  } catch (const ml::SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
  } catch (const ml::TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
  } catch (const ml::MonadNotAdditive& e) {
    std::cerr << "monad not additive: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}
