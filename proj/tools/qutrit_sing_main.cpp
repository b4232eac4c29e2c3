// qutrit-sing: singular hyperplane sections of the triple Segre product.
//
// Exit codes: 0 success, 2 input/schema error, 3 numeric or consistency
// failure, 4 perturbation semicontinuity breach.
#include <CLI11.hpp>
#include <iostream>

#include <qutrit_sing/perturb.hpp>
#include <qutrit_sing/report.hpp>

using namespace qsing;

namespace {

StateTensor load_base(const std::string& spec_arg) {
    // a catalog row id (optionally with parameters) or a state file path
    for (auto& nf : nurmiev_catalog())
        if (nf.id == spec_arg) {
            std::mt19937_64 rng(2);
            ParamSample p = sample_params(nf, rng);
            return build_state(nf, p.a, p.b, p.c);
        }
    return read_state_file(spec_arg);
}

int run_classify(const std::string& state_path, const std::string& format,
                 std::uint64_t seed) {
    StateTensor st = read_state_file(state_path);
    ClassifyOptions opt;
    opt.seed = seed;
    SectionClassification res = classify_state(st, opt);
    if (format == "text") {
        std::cout << classification_text(res);
    } else {
        OJson rep = classification_report(st, res, opt);
        rep["onion"] = onion_report(res);
        std::cout << rep.dump(2) << "\n";
    }
    return 0;
}

int run_catalog_cmd(const std::string& rows_arg, int samples, std::uint64_t seed,
                    const std::string& emit) {
    std::vector<std::string> only;
    if (!rows_arg.empty()) {
        std::stringstream ss(rows_arg);
        std::string tok;
        while (std::getline(ss, tok, ';')) {
            if (!tok.empty()) only.push_back(tok);
        }
        for (auto& id : only) catalog_row(id); // validate early
    }
    CatalogReport rep = run_catalog(samples, seed, only);
    if (emit == "markdown")
        std::cout << catalog_markdown(rep);
    else
        std::cout << catalog_report_json(rep).dump(2) << "\n";
    if (!rep.all_match) {
        std::cerr << "catalog: some rows failed\n";
        return 1;
    }
    return 0;
}

int run_perturb_cmd(const std::string& base_arg, const std::string& eps_str, int trials,
                    std::uint64_t seed, bool scan) {
    StateTensor base = load_base(base_arg);
    Rat eps = rat_from_string(eps_str);
    if (scan) {
        ScanReport rep = run_scan(base, eps, default_scan_directions());
        std::cout << scan_report_json(rep).dump(2) << "\n";
        if (!rep.semicontinuity_ok) {
            std::cerr << "perturb: semicontinuity violated\n";
            return 4;
        }
        return 0;
    }
    PerturbReport rep = run_perturb(base, eps, trials, seed);
    std::cout << perturb_report_json(rep).dump(2) << "\n";
    if (!rep.semicontinuity_ok) {
        std::cerr << "perturb: semicontinuity violated\n";
        return 4;
    }
    return 0;
}

int run_tangent(const std::string& state_path, const std::string& point_arg) {
    StateTensor st = read_state_file(state_path);
    int i, j, k;
    if (std::sscanf(point_arg.c_str(), "%d,%d,%d", &i, &j, &k) != 3 || i < 0 || i > 2 ||
        j < 0 || j > 2 || k < 0 || k > 2)
        throw SchemaError("point must be i,j,k with digits 0..2");
    std::array<std::array<GQ, 3>, 3> factors{};
    factors[0][std::size_t(i)] = GQ(1);
    factors[1][std::size_t(j)] = GQ(1);
    factors[2][std::size_t(k)] = GQ(1);
    TangencyReport rep = tangent_membership(st, ProjectivePoint::from_exact(factors));
    OJson out;
    out["point"] = {i, j, k};
    out["onHyperplane"] = rep.on_hyperplane;
    out["tangent"] = rep.tangent;
    out["pointPairing"] = rep.point_pairing.str();
    OJson dirs = OJson::array();
    for (auto& d : rep.direction_pairings) dirs.push_back(d.str());
    out["directionPairings"] = std::move(dirs);
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entanglement strata of three-qutrit states via hyperplane "
                 "sections of P2 x P2 x P2"};
    app.require_subcommand(1);

    std::string state_path, format = "json", rows, emit = "json";
    std::string base_arg, eps_str = "1/100", point_arg;
    int samples = 2, trials = 200;
    std::uint64_t seed = 1;
    bool scan = false;

    auto* classify = app.add_subcommand("classify", "classify one state's section");
    classify->add_option("--state", state_path, "state JSON file")->required();
    classify->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    classify->add_option("--seed", seed, "separating-form seed");

    auto* catalog = app.add_subcommand("catalog", "reproduce the normal-form tables");
    catalog->add_option("--rows", rows, "semicolon-separated row ids (default all)");
    catalog->add_option("--samples", samples, "samples per parametric row (min 2)");
    catalog->add_option("--seed", seed, "parameter-sampling seed");
    catalog->add_option("--emit", emit, "json or markdown")
        ->check(CLI::IsMember({"json", "markdown"}));

    auto* perturb = app.add_subcommand("perturb", "semicontinuity experiment");
    perturb->add_option("--base", base_arg, "catalog row id or state file")->required();
    perturb->add_option("--epsilon", eps_str, "rational perturbation size");
    perturb->add_option("--trials", trials, "number of random jitters");
    perturb->add_option("--seed", seed, "jitter seed");
    perturb->add_flag("--scan", scan, "directed scan instead of random jitters");

    auto* tangent = app.add_subcommand("tangent", "tangency of a hyperplane at a basis point");
    tangent->add_option("--state", state_path, "state JSON file")->required();
    tangent->add_option("--point", point_arg, "basis point i,j,k")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return run_classify(state_path, format, seed);
        if (catalog->parsed()) return run_catalog_cmd(rows, samples, seed, emit);
        if (perturb->parsed()) return run_perturb_cmd(base_arg, eps_str, trials, seed, scan);
        if (tangent->parsed()) return run_tangent(state_path, point_arg);
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ConstraintViolated& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const ConsistencyError& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
