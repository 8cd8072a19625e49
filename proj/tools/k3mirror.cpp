#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "k3mirror/k3mirror.hpp"

namespace {

using namespace k3m;

std::string default_data_dir() {
  if (const char* env = std::getenv("K3MIRROR_DATA")) return env;
#ifdef K3MIRROR_DEFAULT_DATA
  return K3MIRROR_DEFAULT_DATA;
#else
  return "data";
#endif
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

void print_group(const std::string& label, const SymmetryGroup& g, bool elements) {
  std::cout << label << ": order " << g.order() << ", generators " << g.generators_string() << "\n";
  if (!elements) return;
  for (const auto& e : g.elements()) std::cout << "  " << e.to_string() << "\n";
}

SymmetryGroup group_from_cli(const InvertiblePolynomial& w, const std::vector<std::string>& gens) {
  return gens.empty() ? j_subgroup(w) : group_from_generators(w, gens);
}

int run_poly(const std::string& text, bool transpose_flag, bool weights, bool decompose) {
  const InvertiblePolynomial w = parse_polynomial(text);
  std::cout << "polynomial: " << w.to_string() << "\n";
  std::cout << "exponent matrix: " << w.exponent_matrix().to_string() << "\n";
  const bool all = !transpose_flag && !weights && !decompose;
  if (weights || all) {
    const WeightSystem ws = weight_system(w);
    std::cout << "weights: " << ws.to_string() << (ws.is_calabi_yau() ? " (Calabi-Yau)" : "") << "\n";
  }
  if (decompose || all)
    for (const auto& b : atomic_decomposition(w)) std::cout << "block: " << block_to_string(b, w.variables()) << "\n";
  if (transpose_flag || all) {
    const InvertiblePolynomial t = transpose(w);
    std::cout << "transpose: " << t.to_string() << "  weights " << weight_system(t).to_string() << "\n";
  }
  return 0;
}

int run_group(const std::string& text, const std::vector<std::string>& gens, bool max, bool j, bool sl, bool dual,
              bool quotient, bool elements) {
  const InvertiblePolynomial w = parse_polynomial(text);
  const bool all = !max && !j && !sl && !dual && !quotient;
  if (max || all) print_group("max", max_group(w), elements);
  if (j || all) print_group("J", j_subgroup(w), elements);
  if (sl || all) print_group("SL", sl_subgroup(w), elements);
  const SymmetryGroup g = group_from_cli(w, gens);
  if (quotient || all) {
    print_group("G", g, elements);
    std::cout << "G/J: " << invariants_to_string(quotient_invariants(g, j_subgroup(w))) << "\n";
  }
  if (dual || all) {
    const InvertiblePolynomial t = transpose(w);
    const SymmetryGroup gt = dual_group(g, w);
    print_group("dual group on " + t.to_string(), gt, elements);
    std::cout << "dual G/J: " << invariants_to_string(quotient_invariants(gt, j_subgroup(t))) << "\n";
  }
  return 0;
}

int run_form(const std::string& text, const std::vector<std::string>& sums, bool neg, bool sig,
             const std::string& iso) {
  FiniteQuadraticForm q = parse_form_expression(text);
  for (const auto& s : sums) q = direct_sum(q, parse_form_expression(s));
  if (neg) q = negate(q);
  std::cout << "form: " << q.to_string() << "\n";
  if (sig) std::cout << "gauss signature: " << gauss_signature(q) << " mod 8\n";
  if (!iso.empty()) {
    const bool ok = is_isomorphic(q, parse_form_expression(iso));
    std::cout << "isomorphic to " << iso << ": " << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
  }
  return 0;
}

int run_lattice(const std::string& name, const std::vector<std::string>& sums, long rescale_by,
                const std::string& op) {
  GramLattice l = parse_lattice_expression(name);
  for (const auto& s : sums) l = direct_sum(l, parse_lattice_expression(s));
  if (rescale_by != 1) l = rescale(l, Integer(rescale_by));
  std::cout << "rank " << l.rank() << ", gram " << l.gram().to_string() << "\n";
  if (op == "signature") {
    std::cout << "signature: " << signature(l).to_string() << "\n";
  } else if (op == "disc-group") {
    std::cout << "discriminant group: " << discriminant_group(l).group.to_string() << "\n";
  } else if (op == "disc-form") {
    const FiniteQuadraticForm q = discriminant_form(l);
    std::cout << "discriminant form: " << q.to_string() << "\n";
    std::cout << "gauss signature: " << gauss_signature(q) << " mod 8\n";
  } else if (op == "overlattices") {
    const auto over = overlattices(l);
    std::cout << over.size() - 1 << " proper even overlattice(s)\n";
    for (const auto& o : over)
      if (o.index > 1) std::cout << "  index " << o.index << ": gram " << o.lattice.gram().to_string() << "\n";
  }
  return 0;
}

int run_config(const std::string& file, const std::string& automorphism, const std::string& op) {
  const ExceptionalCase c = load_case(file);
  const CaseAutomorphism* spec = nullptr;
  for (const auto& a : c.automorphisms)
    if (a.name == automorphism || (automorphism.empty() && !spec)) spec = &a;
  if (!spec) throw SchemaError("no automorphism named '" + automorphism + "' in " + file);
  ConfigAutomorphism a = ConfigAutomorphism::from_cycles(spec->name, spec->cycles, c.cfg);
  const auto divisors = invariant_divisors(c.cfg, a);
  const IntMatrix gamma = gram_from_configuration(c.cfg, divisors);
  const SpanLattice span = span_lattice(gamma);
  std::cout << c.name << ", automorphism " << spec->name << ": " << divisors.size() << " invariant classes\n";
  if (op == "rank") {
    std::cout << "rank: " << span.rank << " (orbit formula " << rank_via_orbits(c.cfg, a) << ")\n";
  } else if (op == "lattice") {
    std::cout << "gram: " << span.lattice.gram().to_string() << "\n";
    std::cout << "signature: " << signature(span.lattice).to_string() << "\n";
  } else if (op == "form") {
    std::cout << "form: " << discriminant_form(span.lattice).to_string() << "\n";
  } else if (op == "minimal-gens") {
    std::vector<std::string> idx;
    for (auto i : minimal_generators(gamma)) {
      std::vector<std::string> ids;
      for (int n : divisors[i].nodes) ids.push_back(std::to_string(n));
      idx.push_back(std::to_string(i + 1) + ":" + join(ids, "+"));
    }
    std::cout << "minimal generators: " << join(idx, " ") << "\n";
  }
  return 0;
}

int run_verify(std::optional<int> order, std::optional<int> line, const std::string& data, const std::string& report) {
  const TableReport r = run_all(std::filesystem::path(data), RunOptions{order, line});
  if (report == "json")
    std::cout << r.to_json().dump(2) << "\n";
  else
    std::cout << r.to_text();
  return r.count(Status::Fail) == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K3 mirror symmetry verification: BHK transposes, discriminant forms and invariant lattices"};
  app.require_subcommand(1);
  int code = 0;

  auto* poly = app.add_subcommand("poly", "Parse a polynomial; print weights, atomic blocks and transpose");
  std::string poly_text;
  bool poly_t = false, poly_w = false, poly_d = false;
  poly->add_option("polynomial", poly_text, "e.g. x^2z+y^4+z^4+w^8")->required();
  poly->add_flag("--transpose", poly_t);
  poly->add_flag("--weights", poly_w);
  poly->add_flag("--decompose", poly_d);
  poly->callback([&] { code = run_poly(poly_text, poly_t, poly_w, poly_d); });

  auto* group = app.add_subcommand("group", "Diagonal symmetry groups of a polynomial");
  std::string group_poly;
  std::vector<std::string> group_gens;
  bool g_max = false, g_j = false, g_sl = false, g_dual = false, g_quot = false, g_el = false;
  group->add_option("polynomial", group_poly)->required();
  group->add_option("--gen", group_gens, "generator of G beyond J, e.g. 1/2,1/2,0,0 (repeatable)");
  group->add_flag("--max", g_max);
  group->add_flag("--j", g_j);
  group->add_flag("--sl", g_sl);
  group->add_flag("--dual", g_dual, "dual group of G on the transpose");
  group->add_flag("--quotient", g_quot, "invariant factors of G/J");
  group->add_flag("--elements", g_el, "list every element");
  group->callback([&] { code = run_group(group_poly, group_gens, g_max, g_j, g_sl, g_dual, g_quot, g_el); });

  auto* form = app.add_subcommand("form", "Finite quadratic form expressions");
  std::string form_text, form_iso;
  std::vector<std::string> form_sums;
  bool f_neg = false, f_sig = false;
  form->add_option("expression", form_text, "e.g. v+w_{2,2}^1")->required();
  form->add_option("--sum", form_sums, "add another form (repeatable)");
  form->add_flag("--negate", f_neg);
  form->add_flag("--signature", f_sig, "Gauss signature mod 8");
  form->add_option("--iso", form_iso, "test isomorphism with this form");
  form->callback([&] { code = run_form(form_text, form_sums, f_neg, f_sig, form_iso); });

  auto* lattice = app.add_subcommand("lattice", "Named lattices and their invariants");
  std::string lat_name, lat_op = "disc-form";
  std::vector<std::string> lat_sums;
  long lat_rescale = 1;
  lattice->add_option("--name", lat_name, "e.g. U+D_4+A_2 or <4>+A_3^3")->required();
  lattice->add_option("--sum", lat_sums, "add another lattice (repeatable)");
  lattice->add_option("--rescale", lat_rescale, "multiply the form by n");
  lattice->add_option("--op", lat_op)->check(CLI::IsMember({"signature", "disc-group", "disc-form", "overlattices"}));
  lattice->callback([&] { code = run_lattice(lat_name, lat_sums, lat_rescale, lat_op); });

  auto* config = app.add_subcommand("config", "Invariant lattice of a curve configuration");
  std::string cfg_file, cfg_auto, cfg_op = "rank";
  config->add_option("--file", cfg_file)->required()->check(CLI::ExistingFile);
  config->add_option("--automorphism", cfg_auto, "defaults to the first one listed");
  config->add_option("--op", cfg_op)->check(CLI::IsMember({"rank", "lattice", "form", "minimal-gens"}));
  config->callback([&] { code = run_config(cfg_file, cfg_auto, cfg_op); });

  auto* verify = app.add_subcommand("verify", "Verify the shipped tables, classes and configurations");
  std::optional<int> v_order, v_line;
  std::string v_data = default_data_dir(), v_report = "text";
  verify->add_option("--order", v_order)->check(CLI::IsMember({4, 8, 12}));
  verify->add_option("--line", v_line);
  verify->add_option("--data", v_data, "data directory (default: $K3MIRROR_DATA)");
  verify->add_option("--report", v_report)->check(CLI::IsMember({"text", "json"}));
  verify->callback([&] { code = run_verify(v_order, v_line, v_data, v_report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const k3m::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
