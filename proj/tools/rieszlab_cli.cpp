// rieszlab command-line interface: trial generation, certification, Voronoi
// census, reference constants, torus equilibrium measures, coordinate
// ingestion, expansion fitting, and gap analysis.
//
// All CSV files carry a header row, 17-significant-digit decimals, and a
// deterministic row order.  RIESZLAB_THREADS (or --threads) caps the worker
// count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "rieszlab/analysis.hpp"
#include "rieszlab/constants.hpp"
#include "rieszlab/energy.hpp"
#include "rieszlab/errors.hpp"
#include "rieszlab/manifold.hpp"
#include "rieszlab/optimizer.hpp"
#include "rieszlab/parallel.hpp"
#include "rieszlab/stability.hpp"
#include "rieszlab/torus_measure.hpp"
#include "rieszlab/voronoi.hpp"

namespace {

using namespace rieszlab;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

Manifold manifold_from_flags(const std::string& name, double l, double a) {
    if (name == "sphere") return Manifold::sphere();
    if (name == "torus") return Manifold::torus(l, a);
    throw CLI::ValidationError("--manifold", "must be 'sphere' or 'torus'");
}

const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Proven: return "proven";
        case Provenance::Conjectured: return "conjectured";
        case Provenance::Fitted: return "fitted";
        case Provenance::Free: return "free";
    }
    return "?";
}

void print_catalog(const ExpansionCatalog& catalog) {
    std::cout << "expansion catalog s=" << catalog.s << "\n";
    for (const ExpansionTerm& t : catalog.terms) {
        std::cout << "  " << t.label;
        for (std::size_t pad = t.label.size(); pad < 10; ++pad) std::cout << ' ';
        if (std::isnan(t.coefficient))
            std::cout << "(free, no reference value)";
        else
            std::cout << fmt17(t.coefficient) << "  [" << provenance_name(t.provenance)
                      << (t.provenance == Provenance::Free ? ", fitted reference" : "")
                      << "]";
        if (!std::isnan(t.alt_value))
            std::cout << "  alt=" << fmt17(t.alt_value);
        std::cout << "\n";
    }
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------
struct GenerateArgs {
    std::string manifold_name = "sphere";
    double l = 3.0, a = 1.0;
    int n = 0;
    double s = 1.0;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string out;
};

int run_generate(const GenerateArgs& args) {
    const Manifold manifold = manifold_from_flags(args.manifold_name, args.l, args.a);
    const RieszParam param(args.s);
    const OptimizerSettings settings = OptimizerSettings::defaults(args.n);

    struct Slot {
        bool ok = false;
        TrialResult trial;
        StabilityCertificate certificate;
        std::string error;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(args.trials));

    parallel_for(static_cast<std::size_t>(args.trials), [&](std::size_t t) {
        Slot& slot = slots[t];
        try {
            slot.trial = generate_candidate(manifold, args.n, param,
                                            args.seed + static_cast<std::uint64_t>(t),
                                            settings);
            slot.certificate = certify(slot.trial.config, param);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    Library library;
    if (std::filesystem::exists(args.out)) library = Library::load(args.out);

    int converged = 0, stable = 0, failed = 0;
    int new_records = 0, merged = 0, discarded = 0;
    for (const Slot& slot : slots) {
        if (!slot.ok) {
            ++failed;
            std::cerr << "trial failed: " << slot.error << "\n";
            continue;
        }
        if (slot.trial.converged) ++converged;
        if (slot.certificate.stable) ++stable;
        switch (library.merge(slot.trial, param, slot.certificate)) {
            case MergeOutcome::NewRecord: ++new_records; break;
            case MergeOutcome::Merged: ++merged; break;
            case MergeOutcome::Discarded: ++discarded; break;
        }
    }
    library.save(args.out);

    std::cout << "manifold=" << args.manifold_name << " n=" << args.n << " s=" << args.s
              << " trials=" << args.trials << ": converged=" << converged
              << " stable=" << stable << " failed=" << failed << "\n"
              << "library: " << new_records << " new, " << merged << " merged, "
              << discarded << " discarded\n";
    if (auto lowest = library.lowest_energy(manifold, args.s, args.n))
        std::cout << "lowest energy: " << fmt17(*lowest) << "\n";
    std::cout << "saved " << library.records().size() << " record(s) to " << args.out
              << "\n";
    return failed == args.trials ? 1 : 0;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------
int run_certify(const std::string& in, bool relaxed) {
    Library library = Library::load(in);
    std::vector<const ConfigRecord*> order;
    for (const ConfigRecord& rec : library.records()) order.push_back(&rec);
    std::sort(order.begin(), order.end(), [](const ConfigRecord* x, const ConfigRecord* y) {
        return std::tie(x->n, x->energy) < std::tie(y->n, y->energy);
    });

    int stable_count = 0;
    for (const ConfigRecord* rec : order) {
        Configuration config{rec->manifold, rec->params};
        try {
            StabilityCertificate cert = certify(
                config, RieszParam(rec->s),
                relaxed ? CertifyMode::Relaxed : CertifyMode::Auto);
            if (cert.stable) ++stable_count;
            std::cout << "n=" << rec->n << " s=" << rec->s
                      << " occurrences=" << rec->occurrences
                      << " E=" << fmt17(rec->energy)
                      << " stable=" << (cert.stable ? "yes" : "no")
                      << " lambda*=" << fmt17(cert.lambda_star)
                      << " grad=" << fmt17(cert.grad_norm)
                      << (cert.relaxed ? " [relaxed]" : "");
            if (!cert.stable) std::cout << "  (" << cert.reason << ")";
            std::cout << "\n";
        } catch (const std::exception& e) {
            std::cout << "n=" << rec->n << " s=" << rec->s
                      << " E=" << fmt17(rec->energy) << " error: " << e.what() << "\n";
        }
    }
    std::cout << stable_count << "/" << order.size() << " records certified stable\n";
    return 0;
}

// ---------------------------------------------------------------------------
// voronoi
// ---------------------------------------------------------------------------
int run_voronoi(const std::string& in, int n, double s, bool s_given,
                const std::string& csv) {
    Library library = Library::load(in);
    const ConfigRecord* best = nullptr;
    for (const ConfigRecord& rec : library.records()) {
        if (!rec.manifold.is_sphere() || rec.n != n) continue;
        if (s_given && rec.s != s) continue;
        if (!best || rec.energy < best->energy) best = &rec;
    }
    if (!best) throw std::runtime_error("no sphere record with n=" + std::to_string(n) +
                                        " in " + in);

    Configuration config{best->manifold, best->params};
    const VoronoiDiagram diagram = spherical_voronoi(config);
    const DefectSummary census = defect_summary(diagram);
    const BoundCurves curves = bound_curves(n);

    std::cout << "record: n=" << n << " s=" << best->s << " E=" << fmt17(best->energy)
              << " occurrences=" << best->occurrences << "\n";
    std::cout << "total charge sum(6 - sides) = " << diagram.total_charge() << "\n";
    for (const auto& [sides, count] : census.counts)
        std::cout << "  " << sides << "-gons: " << count << "\n";
    std::cout << "hex fraction = " << fmt17(census.hex_fraction)
              << "  (twelve-pentagon upper bound " << fmt17(curves.upper)
              << ", minimal-scar line " << fmt17(curves.scar_line) << ")\n";

    if (!csv.empty()) {
        std::ofstream out = open_csv(csv);
        out << "cell,sides,alpha,beta,x,y,z\n";
        const std::vector<Vec3> points = embed(config);
        for (int i = 0; i < n; ++i) {
            const Vec3 p = points[static_cast<std::size_t>(i)];
            out << i << ',' << diagram.side_counts[static_cast<std::size_t>(i)] << ','
                << fmt17(config.alpha(i)) << ',' << fmt17(config.beta(i)) << ','
                << fmt17(p.x) << ',' << fmt17(p.y) << ',' << fmt17(p.z) << '\n';
        }
        std::cout << "wrote " << csv << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------
int run_constants(int s, bool s_given) {
    if (!s_given) {
        std::cout << "hexagonal lattice constant C = " << fmt17(ewald_constant())
                  << "\n";
        std::cout << "  factorization check |2C - 6 zeta(1/2) L3(1/2)| = "
                  << fmt17(std::fabs(2.0 * ewald_constant() -
                                     6.0 * riemann_zeta(0.5) * dirichlet_L3(0.5)))
                  << "\n";
        std::cout << "cs_coefficient(1) = " << fmt17(cs_coefficient(1.0)) << "\n";
        std::cout << "s=3 leading coefficient (sqrt(3)/(8 pi))^{3/2} zeta_hex(3) = "
                  << fmt17(std::pow(std::sqrt(3.0) / (8.0 * std::acos(-1.0)), 1.5) *
                           hex_zeta(3.0))
                  << "\n\n";
        for (int k = 0; k <= 3; ++k) {
            print_catalog(expansion_catalog(k));
            if (k != 3) std::cout << "\n";
        }
    } else {
        print_catalog(expansion_catalog(s));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// torus-measure
// ---------------------------------------------------------------------------
int run_torus_measure(double l, double a, int m, const std::string& csv) {
    const double continuum = landkof_energy(l, a);
    const DensityProfile profile = solve_equilibrium(l, a, m);
    const Manifold torus = Manifold::torus(l, a);

    std::cout << "torus l=" << l << " a=" << a << " m=" << m << "\n";
    std::cout << "closed-form equilibrium energy = " << fmt17(continuum) << "\n";
    std::cout << "discrete equilibrium energy    = " << fmt17(profile.energy) << "\n";
    std::cout << "relative excess                = "
              << fmt17((profile.energy - continuum) / continuum) << "\n";
    if (profile.constrained)
        std::cout << "note: nonnegativity fallback was engaged\n";
    std::cout << "second-order coefficient       = "
              << fmt17(second_term_coefficient(torus, &profile))
              << "  (sphere reference " << fmt17(cs_coefficient(1.0)) << ")\n";

    if (!csv.empty()) {
        std::ofstream out = open_csv(csv);
        out << "v,weight,density\n";
        for (int j = 0; j < m; ++j)
            out << fmt17(profile.v[static_cast<std::size_t>(j)]) << ','
                << fmt17(profile.weights[static_cast<std::size_t>(j)]) << ','
                << fmt17(profile.density[static_cast<std::size_t>(j)]) << '\n';
        std::cout << "wrote " << csv << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------
int run_ingest(const std::string& xyz, double s, const std::string& out) {
    Configuration config = canonical_align(ingest_xyz(xyz));
    const RieszParam param(s);
    const int n = config.n();

    const EnergyBreakdown breakdown = total_energy(config, param);
    const StabilityCertificate cert = certify(config, param);

    TrialResult trial;
    trial.config = std::move(config);
    trial.energy = breakdown.total;
    trial.grad_norm = cert.grad_norm;
    trial.seed = 0;
    const OptimizerSettings settings = OptimizerSettings::defaults(n);
    trial.converged = cert.grad_norm <=
                      settings.grad_final_tol * std::max(1.0, std::fabs(breakdown.total));

    Library library;
    if (std::filesystem::exists(out)) library = Library::load(out);
    const MergeOutcome outcome = library.merge(trial, param, cert);
    library.save(out);

    std::cout << "ingested " << n << " point(s) from " << xyz << "\n"
              << "energy = " << fmt17(breakdown.total) << ", grad = "
              << fmt17(cert.grad_norm) << ", stable = " << (cert.stable ? "yes" : "no")
              << "\n";
    switch (outcome) {
        case MergeOutcome::NewRecord: std::cout << "new record"; break;
        case MergeOutcome::Merged: std::cout << "merged into an existing record"; break;
        case MergeOutcome::Discarded:
            std::cout << "discarded (not stable and not the lowest energy)";
            break;
    }
    std::cout << "; library now holds " << library.records().size() << " record(s) in "
              << out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------
std::vector<std::pair<int, double>> load_fit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);
    std::vector<std::pair<int, double>> data;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        for (char& ch : line)
            if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
        std::istringstream iss(line);
        std::vector<std::string> tokens;
        for (std::string tok; iss >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        char* end = nullptr;
        const double nval = std::strtod(tokens[0].c_str(), &end);
        const bool numeric = end == tokens[0].c_str() + tokens[0].size();
        if (!numeric) {
            if (lineno == 1) continue;  // header row
            throw ParseError("not a number: " + tokens[0], lineno);
        }
        if (tokens.size() < 2)
            throw ParseError("expected 'n,energy'", lineno);
        double eval = 0.0;
        const char* b = tokens[1].c_str();
        end = nullptr;
        eval = std::strtod(b, &end);
        if (end != b + tokens[1].size())
            throw ParseError("not a number: " + tokens[1], lineno);
        data.emplace_back(static_cast<int>(std::llround(nval)), eval);
    }
    if (data.empty()) throw ValidationError("no data rows in " + path);
    return data;
}

int run_fit(const std::string& in, int s, int fix, std::vector<std::string> free_labels,
            const std::string& range, const std::string& csv) {
    const std::vector<std::pair<int, double>> data = load_fit_csv(in);

    ExpansionCatalog catalog = expansion_catalog(s);
    if (fix < 0) {
        // Default: hold exactly the leading run of established coefficients.
        std::size_t k = 0;
        while (k < catalog.terms.size() &&
               catalog.terms[k].provenance != Provenance::Free)
            ++k;
        catalog.terms.resize(k);
    } else {
        if (static_cast<std::size_t>(fix) > catalog.terms.size())
            throw FitError("--fix exceeds the catalog size");
        catalog.terms.resize(static_cast<std::size_t>(fix));
        for (const ExpansionTerm& t : catalog.terms)
            if (t.provenance == Provenance::Free)
                throw FitError("term '" + t.label +
                               "' has no established coefficient; lower --fix or list "
                               "it in --free");
    }

    int lo = s == 0 ? 501 : 1;  // paper-mirroring default ranges
    int hi = std::numeric_limits<int>::max();
    if (!range.empty()) {
        const std::size_t colon = range.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--range", "expected LO:HI");
        lo = std::stoi(range.substr(0, colon));
        hi = std::stoi(range.substr(colon + 1));
    }

    const FitResult result = fit_expansion(data, catalog, free_labels, lo, hi);

    for (std::size_t i = 0; i < result.fixed_labels.size(); ++i)
        std::cout << "held  " << result.fixed_labels[i] << " = "
                  << fmt17(result.fixed_values[i]) << "\n";
    for (std::size_t i = 0; i < result.free_labels.size(); ++i)
        std::cout << "fit   " << result.free_labels[i] << " = "
                  << fmt17(result.free_values[i]) << "\n";
    std::cout << "points used = " << result.data_n.size() << " (range " << result.n_lo
              << ".." << (result.n_hi == std::numeric_limits<int>::max()
                              ? std::string("inf")
                              : std::to_string(result.n_hi))
              << ")\n";
    std::cout << "max |residual| = " << fmt17(result.max_abs_residual) << "\n";
    std::cout << "basis condition estimate = " << fmt17(result.condition) << "\n";
    if (result.ill_conditioned)
        std::cout << "warning: basis is ill-conditioned on this data (condition > 1e12); "
                     "coefficients may be unreliable\n";

    if (!csv.empty()) {
        std::ofstream out = open_csv(csv);
        out << "n,residual\n";
        for (std::size_t i = 0; i < result.data_n.size(); ++i)
            out << result.data_n[i] << ',' << fmt17(result.residuals[i]) << '\n';
        std::cout << "wrote " << csv << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------
int run_gap(const std::string& in, double s, const std::string& normalizer_label,
            const std::string& manifold_name, double l, double a,
            const std::string& csv) {
    Library library = Library::load(in);
    const Manifold manifold = manifold_from_flags(manifold_name, l, a);

    // Prefer the catalog's term (with its coefficient) when one matches the
    // requested label; otherwise normalize by the bare basis function.
    ExpansionTerm normalizer;
    bool from_catalog = false;
    const double rounded = std::round(s);
    if (s == rounded && rounded >= 0.0 && rounded <= 3.0) {
        for (const ExpansionTerm& t : expansion_catalog(static_cast<int>(rounded)).terms)
            if (t.label == normalizer_label && !std::isnan(t.coefficient)) {
                normalizer = t;
                from_catalog = true;
                break;
            }
    }
    if (!from_catalog) {
        normalizer = parse_term_label(normalizer_label);
        std::cout << "note: '" << normalizer_label
                  << "' is not a catalog term for s=" << s
                  << "; normalizing by the bare basis value\n";
    }

    const GapSeries series = gap_series(library, manifold, s, normalizer);
    for (int n : series.excluded)
        std::cout << "warning: n=" << n
                  << " excluded (needs >= 2 records and a stable trial)\n";
    for (const GapPoint& p : series.points)
        std::cout << "n=" << p.n << " mean=" << fmt17(p.mean) << " sem=" << fmt17(p.sem)
                  << " lowest=" << fmt17(p.lowest) << " gap=" << fmt17(p.gap)
                  << " ratio=" << fmt17(p.ratio) << " trials=" << p.trials
                  << " records=" << p.records << "\n";

    if (!csv.empty()) {
        std::ofstream out = open_csv(csv);
        out << "n,mean,sem,lowest,gap,normalizer,ratio,trials,records\n";
        for (const GapPoint& p : series.points)
            out << p.n << ',' << fmt17(p.mean) << ',' << fmt17(p.sem) << ','
                << fmt17(p.lowest) << ',' << fmt17(p.gap) << ',' << fmt17(p.normalizer)
                << ',' << fmt17(p.ratio) << ',' << p.trials << ',' << p.records << '\n';
        std::cout << "wrote " << csv << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riesz energy laboratory: minimal point configurations on the "
                 "sphere and torus"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (default: all cores, or "
                                         "RIESZLAB_THREADS)");

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "run seeded optimization trials "
                                                        "and merge them into a library");
    generate->add_option("--manifold", gen.manifold_name, "sphere|torus")
        ->default_val("sphere");
    generate->add_option("--l", gen.l, "torus major radius");
    generate->add_option("--a", gen.a, "torus minor radius");
    generate->add_option("--n", gen.n, "number of points")->required();
    generate->add_option("--s", gen.s, "interaction exponent (0 = logarithmic)");
    generate->add_option("--trials", gen.trials, "number of seeded trials")
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen.seed, "base seed (trial t uses seed + t)");
    generate->add_option("--out", gen.out, "library file (JSONL, appended into)")
        ->required();

    std::string certify_in;
    bool certify_relaxed = false;
    CLI::App* certify_cmd = app.add_subcommand("certify", "re-certify every record of a "
                                                          "library");
    certify_cmd->add_option("--in", certify_in, "library file")->required();
    certify_cmd->add_flag("--relaxed", certify_relaxed, "use the relaxed spectral test");

    std::string vor_in, vor_csv;
    int vor_n = 0;
    double vor_s = 1.0;
    CLI::App* voronoi_cmd = app.add_subcommand("voronoi", "Voronoi defect census of the "
                                                          "best record at a given n");
    voronoi_cmd->add_option("--in", vor_in, "library file")->required();
    voronoi_cmd->add_option("--n", vor_n, "number of points")->required();
    CLI::Option* vor_s_opt = voronoi_cmd->add_option("--s", vor_s, "filter records by s");
    voronoi_cmd->add_option("--csv", vor_csv, "per-cell CSV output");

    int const_s = 0;
    CLI::App* constants_cmd = app.add_subcommand("constants", "print reference constants "
                                                              "and expansion catalogs");
    CLI::Option* const_s_opt =
        constants_cmd->add_option("--s", const_s, "catalog to print (0..3)")
            ->check(CLI::Range(0, 3));

    double tm_l = 3.0, tm_a = 1.0;
    int tm_m = 1000;
    std::string tm_csv;
    CLI::App* torus_cmd = app.add_subcommand("torus-measure", "equilibrium measure of a "
                                                              "torus and its energy");
    torus_cmd->add_option("--l", tm_l, "major radius")->required();
    torus_cmd->add_option("--a", tm_a, "minor radius")->required();
    torus_cmd->add_option("--m", tm_m, "grid cells around the tube")
        ->check(CLI::Range(16, 100000));
    torus_cmd->add_option("--csv", tm_csv, "density profile CSV output");

    std::string ing_xyz, ing_out;
    double ing_s = 1.0;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "import x y z coordinates into a "
                                                        "library");
    ingest_cmd->add_option("--xyz", ing_xyz, "coordinate file")->required();
    ingest_cmd->add_option("--s", ing_s, "interaction exponent");
    ingest_cmd->add_option("--out", ing_out, "library file")->required();

    std::string fit_in, fit_range, fit_csv;
    int fit_s = 1, fit_fix = -1;
    std::vector<std::string> fit_free;
    CLI::App* fit_cmd = app.add_subcommand("fit", "least-squares expansion fit on "
                                                  "(n, energy) data");
    fit_cmd->add_option("--in", fit_in, "CSV with n,energy rows")->required();
    fit_cmd->add_option("--s", fit_s, "catalog exponent (0..3)")->check(CLI::Range(0, 3));
    fit_cmd->add_option("--fix", fit_fix, "hold the first k catalog terms (default: the "
                                          "leading established run)");
    fit_cmd->add_option("--free", fit_free, "terms to solve for, e.g. N,sqrtN")
        ->required()
        ->delimiter(',');
    fit_cmd->add_option("--range", fit_range, "restrict to LO:HI in n");
    fit_cmd->add_option("--csv", fit_csv, "residual CSV output");

    std::string gap_in, gap_norm = "N^1.5", gap_csv, gap_manifold = "sphere";
    double gap_s = 1.0, gap_l = 3.0, gap_a = 1.0;
    CLI::App* gap_cmd = app.add_subcommand("gap", "average-vs-lowest energy gaps per n");
    gap_cmd->add_option("--in", gap_in, "library file")->required();
    gap_cmd->add_option("--s", gap_s, "interaction exponent");
    gap_cmd->add_option("--normalizer", gap_norm, "term label to divide the gap by");
    gap_cmd->add_option("--manifold", gap_manifold, "sphere|torus");
    gap_cmd->add_option("--l", gap_l, "torus major radius");
    gap_cmd->add_option("--a", gap_a, "torus minor radius");
    gap_cmd->add_option("--csv", gap_csv, "per-n CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) set_max_threads(threads);
        if (*generate) return run_generate(gen);
        if (*certify_cmd) return run_certify(certify_in, certify_relaxed);
        if (*voronoi_cmd)
            return run_voronoi(vor_in, vor_n, vor_s, vor_s_opt->count() > 0, vor_csv);
        if (*constants_cmd) return run_constants(const_s, const_s_opt->count() > 0);
        if (*torus_cmd) return run_torus_measure(tm_l, tm_a, tm_m, tm_csv);
        if (*ingest_cmd) return run_ingest(ing_xyz, ing_s, ing_out);
        if (*fit_cmd) return run_fit(fit_in, fit_s, fit_fix, fit_free, fit_range, fit_csv);
        if (*gap_cmd) return run_gap(gap_in, gap_s, gap_norm, gap_manifold, gap_l, gap_a,
                                     gap_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
