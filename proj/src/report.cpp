#include "lawvere/report.hpp"

#include <chrono>
#include <sstream>

#include "lawvere/conservativity.hpp"
#include "lawvere/metalang.hpp"
#include "lawvere/order.hpp"
#include "lawvere/registry.hpp"
#include "lawvere/tensor.hpp"

namespace lawvere {

using nlohmann::json;

std::string to_string(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

Status parse_status(const std::string& s) {
  if (s == "ok") return Status::Ok;
  if (s == "fail") return Status::Fail;
  if (s == "inconclusive") return Status::Inconclusive;
  throw std::invalid_argument("unknown report status '" + s + "'");
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string join_strings(const json& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) out += (i ? ", " : "") + a[i].get<std::string>();
  return out;
}

const char* pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

json to_json(const Report& r) {
  return {{"schema", kReportSchema},   {"command", r.command},         {"params", r.params},
          {"status", to_string(r.status)}, {"truncated", r.truncated}, {"seconds", r.seconds},
          {"result", r.result}};
}

Report report_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != kReportSchema)
    throw std::invalid_argument("unsupported report schema " + j.at("schema").dump());
  Report r;
  r.command = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.result = j.at("result");
  r.status = parse_status(j.at("status").get<std::string>());
  r.truncated = j.at("truncated").get<bool>();
  r.seconds = j.at("seconds").get<double>();
  return r;
}

Report report_theories(const ReportOptions&) {
  Timer t;
  Report r;
  r.command = "theories list";
  json list = json::array();
  std::ostringstream os;
  for (const auto& b : builtin_theories()) {
    list.push_back({{"spec", b.spec}, {"description", b.description}, {"bounded", b.bounded},
                    {"has_join", b.has_join}});
    os << b.spec << "  " << b.description << (b.bounded ? "  [bounded]" : "")
       << (b.has_join ? "  [join]" : "") << "\n";
  }
  r.result["theories"] = list;
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_hom(const std::string& spec, std::size_t n, std::size_t m, const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "hom";
  r.params = {{"theory", spec}, {"n", n}, {"m", m}};
  auto th = make_theory(spec);
  HomSet hs(*th, n, m);
  json items = json::array();
  std::ostringstream os;
  os << spec << "(" << n << "," << m << "): " << hs.size() << " morphisms\n";
  for (std::uint64_t i = 0; i < hs.size() && i < opt.list_limit; ++i) {
    std::string s = show(*th, hs.at(i));
    items.push_back(s);
    os << "  " << i << ": " << s << "\n";
  }
  r.truncated = hs.size() > opt.list_limit;
  if (r.truncated) os << "  ... (" << hs.size() - opt.list_limit << " more)\n";
  r.result = {{"size", hs.size()}, {"morphisms", items}};
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_order(const std::string& spec, std::size_t N, bool two_sided, const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "order";
  r.params = {{"theory", spec}, {"max_size", N}, {"two_sided", two_sided}};
  auto th = make_theory(spec);
  auto ot = compute_preorder(th, N, two_sided ? RuleMode::TwoSided : RuleMode::Literal);
  auto po = is_partial_order(ot);
  std::ostringstream os;
  os << "order on " << spec << " up to " << N << " (" << to_string(ot.mode()) << ")\n";
  json tables = json::array();
  for (std::size_t n = 0; n <= N; ++n) {
    json adj = json::array();
    os << "L(" << n << ",1):\n";
    const std::size_t c = ot.carrier(n);
    for (Elem a = 0; a < c; ++a) {
      json up = json::array();
      for (Elem b = 0; b < c; ++b)
        if (a != b && ot.leq1(n, a, b)) up.push_back(th->show(b, n));
      if (a < opt.list_limit) {
        adj.push_back({{"index", a}, {"elem", th->show(a, n)}, {"above", up}});
        os << "  " << th->show(a, n) << " <= " << join_strings(up) << "\n";
      } else {
        r.truncated = true;
      }
    }
    tables.push_back({{"n", n}, {"carrier", c}, {"adjacency", adj}});
  }
  r.truncated = r.truncated || ot.truncated() > 0;
  r.result = {{"rule_mode", to_string(ot.mode())},
              {"pairs", ot.pair_count()},
              {"truncated_pairs", ot.truncated()},
              {"partial_order", po.ok},
              {"tables", tables}};
  if (!po.ok)
    r.result["antisymmetry_witness"] = {show(*th, po.witness->first), show(*th, po.witness->second)};
  os << "pairs: " << ot.pair_count() << ", partial order: " << (po.ok ? "yes" : "no") << "\n";
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_conservativity(const std::string& spec, std::size_t N, const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "conservativity";
  r.params = {{"theory", spec}, {"max_size", N}};
  auto th = make_theory(spec);
  ConservativityOptions co;
  co.jobs = opt.jobs;
  Verdict v = check_conservativity(th, N, co);
  r.result = to_json(*th, v);
  r.status = v.kind == VerdictKind::Admits ? Status::Ok
             : v.kind == VerdictKind::Fails ? Status::Fail
                                            : Status::Inconclusive;
  r.truncated = v.truncated_pairs > 0;
  std::ostringstream os;
  os << (v.kind == VerdictKind::Admits ? "ADMITS" : v.kind == VerdictKind::Fails ? "FAIL" : "INCONCLUSIVE")
     << ": " << spec << " at N=" << N << "\n";
  if (v.witness) {
    const auto& w = r.result["witness"];
    os << "  reason: " << w["reason"].get<std::string>() << "\n"
       << "  f = " << w["f"].get<std::string>() << "\n"
       << "  g = " << w["g"].get<std::string>() << "\n"
       << "  pieces: " << join_strings(w["pieces"]) << "\n"
       << "  minimal upper bounds: " << join_strings(w["minimal_upper_bounds"]) << "\n";
    if (!w["expected"].is_null()) os << "  composite: " << w["expected"].get<std::string>() << "\n";
  }
  if (v.truncated_pairs) os << "  truncated pairs: " << v.truncated_pairs << "\n";
  if (v.stability) os << "  stable at N-1: " << (*v.stability ? "yes" : "no") << "\n";
  if (v.modes_agree) os << "  literal and two-sided modes agree: " << (*v.modes_agree ? "yes" : "no") << "\n";
  if (!v.note.empty()) os << "  note: " << v.note << "\n";
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_tensor(const std::string& spec, std::size_t N, const std::string& mode, bool verify,
                     const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "tensor";
  r.params = {{"theory", spec}, {"max_size", N}, {"mode", mode}, {"verify", verify}};
  TensorMode tm;
  if (mode == "full") tm = TensorMode::Full;
  else if (mode == "nonempty") tm = TensorMode::Nonempty;
  else throw InvalidSpec("unknown tensor mode '" + mode + "'");
  auto tt = build_tensor(make_theory(spec), N, tm);
  std::ostringstream os;
  os << tt->spec() << "\n";
  json objs = json::array();
  for (std::size_t n = 0; n <= tt->max_obj(); ++n) {
    const std::size_t c = tt->carrier_size(n);
    json members = json::array();
    for (Elem e = 0; e < c && e < opt.list_limit; ++e) members.push_back({{"index", e}, {"set", tt->show(e, n)}});
    r.truncated = r.truncated || c > opt.list_limit;
    objs.push_back({{"n", n}, {"size", c}, {"members", members}});
    os << "  |T(" << n << ")| = " << c << "\n";
  }
  r.result["spec"] = tt->spec();
  r.result["objects"] = objs;
  const bool stable = tensor_stable(*tt);
  r.result["stable"] = stable;
  os << "  closure stable at N-1: " << (stable ? "yes" : "no") << "\n";
  if (verify) {
    TensorLawOptions lo;
    lo.seed = opt.seed;
    auto rep = verify_tensor_laws(*tt, lo);
    json checks = json::array();
    for (const auto& c : rep.checks) {
      checks.push_back({{"name", c.name}, {"cases", c.cases}, {"violations", c.violations},
                        {"witness", c.first_witness}});
      os << "  " << pass_fail(c.violations == 0) << " " << c.name << " (" << c.cases << " cases)";
      if (c.violations) os << ": " << c.violations << " violations, e.g. " << c.first_witness;
      os << "\n";
    }
    r.result["laws"] = checks;
    r.status = rep.ok() ? Status::Ok : Status::Fail;
  }
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_uniformity(const std::string& spec, std::size_t n, std::size_t m, const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "uniformity";
  r.params = {{"theory", spec}, {"n", n}, {"m", m}};
  auto th = make_theory(spec);
  HomSet hs(*th, n, m);
  std::uint64_t failures = 0, max_k = 0;
  json first_failure = nullptr, examples = json::array();
  for (std::uint64_t i = 0; i < hs.size(); ++i) {
    Morphism f = hs.at(i);
    UniformityCheck c = verify_uniform_witness(*th, f);
    const std::size_t k = c.witness.fhat.dom;
    max_k = std::max<std::uint64_t>(max_k, k);
    json w = {{"f", show(*th, f)},
              {"fhat", show(*th, c.witness.fhat)},
              {"u", c.witness.u.table},
              {"k", k},
              {"equation", c.equation},
              {"k_bound", c.k_bound}};
    if (!c.ok()) {
      if (!failures) first_failure = w;
      ++failures;
    }
    if (examples.size() < std::min<std::size_t>(opt.list_limit, 16)) examples.push_back(w);
  }
  const std::uint64_t bound = checked_pow(n + th->carrier_size(0), m, std::uint64_t{1} << 62);
  r.result = {{"morphisms", hs.size()}, {"failures", failures}, {"max_k", max_k},
              {"k_bound", bound},       {"examples", examples}, {"first_failure", first_failure}};
  r.status = failures ? Status::Fail : Status::Ok;
  std::ostringstream os;
  os << pass_fail(!failures) << ": uniformity witnesses for " << spec << "(" << n << "," << m << "), "
     << hs.size() << " morphisms, max k = " << max_k << " (bound " << bound << ")\n";
  if (failures) os << "  first failure: " << first_failure.dump() << "\n";
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_additivity(const std::string& spec, std::size_t N, const ReportOptions&) {
  Timer t;
  Report r;
  r.command = "additivity";
  r.params = {{"theory", spec}, {"max_size", N}};
  auto th = make_theory(spec);
  const bool bounded = check_bounded(*th);
  AdditivityResult a = check_complete_additivity(*th, N);
  json family = json::array();
  for (std::size_t n = 0; n < a.family.size(); ++n) family.push_back(th->show(a.family[n], n));
  json delta = nullptr;
  std::ostringstream os;
  os << pass_fail(a.ok) << ": complete additivity of " << spec << " up to " << N << "\n";
  if (a.ok) os << "  U_n: " << join_strings(family) << "\n";
  else os << "  " << a.reason << "\n";
  if (bounded) {
    DeltaSumResult d = check_delta_sum(*th, N);
    delta = {{"ok", d.ok}, {"checked", d.checked},
             {"failing_m", d.failing_m ? json(*d.failing_m) : json(nullptr)}};
    os << "  sum of Delta_j = id: " << (d.ok ? "yes" : "no") << "\n";
  }
  r.result = {{"bounded", bounded}, {"completely_additive", a.ok}, {"family", family},
              {"reason", a.reason}, {"delta_sum", delta}};
  r.status = a.ok ? Status::Ok : Status::Fail;
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

Report report_run(const std::string& file, const std::string& monad, const ReportOptions&) {
  Timer t;
  Report r;
  r.command = "run";
  r.params = {{"file", file}, {"monad", monad}};
  auto th = make_theory(monad);
  ml::RunResult res = ml::run_program(ml::load_program(file), *th);
  r.result = {{"type", ml::show(*res.type)}, {"value", res.value}, {"shown", res.shown}};
  r.text = res.shown + " : " + ml::show(*res.type) + "\n";
  r.seconds = t.seconds();
  return r;
}

Report report_laws(const std::string& monad, const std::string& suite, std::size_t max_type_size,
                   const ReportOptions& opt) {
  Timer t;
  Report r;
  r.command = "laws";
  r.params = {{"monad", monad}, {"suite", suite}, {"max_type_size", max_type_size}, {"seed", opt.seed}};
  auto th = make_theory(monad);
  ml::LawOptions lo;
  lo.max_type_size = max_type_size;
  lo.seed = opt.seed;
  ml::LawReport rep = ml::run_law_suite(*th, ml::parse_suite(suite), lo);
  json laws = json::array();
  std::ostringstream os;
  bool sampled = false;
  for (const auto& l : rep.laws) {
    laws.push_back({{"name", l.name}, {"rule", l.rule}, {"cases", l.cases},
                    {"premise_failed", l.premise_failed}, {"violations", l.violations},
                    {"truncated", l.truncated}, {"sampled", l.sampled}, {"witness", l.witness}});
    sampled = sampled || l.sampled;
    r.truncated = r.truncated || l.truncated > 0;
    os << pass_fail(l.violations == 0) << " " << l.name << " (" << l.cases << " cases"
       << (l.sampled ? ", sampled" : "") << (l.truncated ? ", " + std::to_string(l.truncated) + " truncated" : "")
       << ")";
    if (l.violations) os << ": " << l.violations << " violations, e.g. " << l.witness;
    os << "\n";
  }
  r.result = {{"suite", rep.suite}, {"monad", rep.monad}, {"laws", laws}, {"sampled", sampled}};
  r.status = rep.ok() ? Status::Ok : Status::Fail;
  r.text = os.str();
  r.seconds = t.seconds();
  return r;
}

}  // namespace lawvere
