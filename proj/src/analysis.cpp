#include "rieszlab/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rieszlab {

namespace {

bool energies_match(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max(std::fabs(a), std::fabs(b));
}

bool fingerprints_match(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double tol = 1e-8 * std::max(std::fabs(a[i]), std::fabs(b[i])) + 1e-12;
        if (std::fabs(a[i] - b[i]) > tol) return false;
    }
    return true;
}

std::vector<double> sorted_point_energies(const Configuration& config, RieszParam param) {
    EnergyBreakdown breakdown = total_energy(config, param);
    std::sort(breakdown.point_energies.begin(), breakdown.point_energies.end());
    return std::move(breakdown.point_energies);
}

std::string hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hex_double(const std::string& text, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size())
        throw ParseError("bad hexadecimal float: " + text, line);
    return v;
}

// Full-consumption double parse; returns false on junk or trailing garbage.
bool parse_number(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + token.size() && end != begin && std::isfinite(out);
}

bool is_plain_integer(const std::string& token) {
    if (token.empty()) return false;
    for (char ch : token)
        if (ch < '0' || ch > '9') return false;
    return true;
}

}  // namespace

MergeOutcome Library::merge(const TrialResult& trial, RieszParam param,
                            const StabilityCertificate& certificate) {
    const Configuration& config = trial.config;
    const int n = config.n();

    bool lowest = true;
    for (const ConfigRecord& rec : records_) {
        if (rec.manifold == config.manifold && rec.s == param.s && rec.n == n &&
            rec.energy <= trial.energy) {
            lowest = false;
            break;
        }
    }
    if (!certificate.stable && !lowest) return MergeOutcome::Discarded;

    std::vector<double> fingerprint = sorted_point_energies(config, param);

    for (ConfigRecord& rec : records_) {
        if (!(rec.manifold == config.manifold) || rec.s != param.s || rec.n != n) continue;
        if (!energies_match(rec.energy, trial.energy)) continue;
        if (!fingerprints_match(rec.fingerprint, fingerprint)) continue;
        rec.occurrences += 1;
        rec.seeds.push_back(trial.seed);
        rec.stable = rec.stable || certificate.stable;
        if (trial.energy < rec.energy) {
            // Keep the lowest-energy copy as the representative of the state.
            rec.params = config.params;
            rec.energy = trial.energy;
            rec.grad_norm = certificate.grad_norm;
            rec.lambda_star = certificate.lambda_star;
            rec.relaxed = certificate.relaxed;
            rec.fingerprint = std::move(fingerprint);
        }
        return MergeOutcome::Merged;
    }

    ConfigRecord rec;
    rec.manifold = config.manifold;
    rec.s = param.s;
    rec.n = n;
    rec.seeds = {trial.seed};
    rec.params = config.params;
    rec.energy = trial.energy;
    rec.grad_norm = certificate.grad_norm;
    rec.lambda_star = certificate.lambda_star;
    rec.stable = certificate.stable;
    rec.relaxed = certificate.relaxed;
    rec.occurrences = 1;
    rec.fingerprint = std::move(fingerprint);
    records_.push_back(std::move(rec));
    return MergeOutcome::NewRecord;
}

std::optional<double> Library::lowest_energy(const Manifold& manifold, double s, int n) const {
    std::optional<double> best;
    for (const ConfigRecord& rec : records_)
        if (rec.manifold == manifold && rec.s == s && rec.n == n)
            if (!best || rec.energy < *best) best = rec.energy;
    return best;
}

void Library::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open library for writing: " + path);
    for (const ConfigRecord& rec : records_) {
        nlohmann::json j;
        j["manifold"] = rec.manifold.is_sphere() ? "sphere" : "torus";
        if (!rec.manifold.is_sphere()) {
            j["l"] = rec.manifold.major_radius();
            j["a"] = rec.manifold.minor_radius();
        }
        j["s"] = rec.s;
        j["n"] = rec.n;
        j["seeds"] = rec.seeds;
        j["params"] = rec.params;
        j["energy"] = rec.energy;
        j["energy_hex"] = hex_double(rec.energy);
        j["grad_norm"] = rec.grad_norm;
        j["lambda_star"] = rec.lambda_star;
        j["stable"] = rec.stable;
        j["relaxed"] = rec.relaxed;
        j["occurrences"] = rec.occurrences;
        out << j.dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Library Library::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open library: " + path);
    Library lib;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad library line: ") + e.what(), lineno);
        }
        try {
            ConfigRecord rec;
            const std::string kind = j.at("manifold").get<std::string>();
            if (kind == "sphere") {
                rec.manifold = Manifold::sphere();
            } else if (kind == "torus") {
                rec.manifold =
                    Manifold::torus(j.at("l").get<double>(), j.at("a").get<double>());
            } else {
                throw ParseError("unknown manifold kind: " + kind, lineno);
            }
            rec.s = j.at("s").get<double>();
            rec.n = j.at("n").get<int>();
            rec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
            rec.params = j.at("params").get<std::vector<double>>();
            rec.energy = j.at("energy").get<double>();
            if (j.contains("energy_hex"))
                rec.energy = parse_hex_double(j.at("energy_hex").get<std::string>(), lineno);
            rec.grad_norm = j.at("grad_norm").get<double>();
            rec.lambda_star = j.at("lambda_star").get<double>();
            rec.stable = j.at("stable").get<bool>();
            rec.relaxed = j.at("relaxed").get<bool>();
            rec.occurrences = j.at("occurrences").get<int>();
            if (rec.occurrences < 1)
                throw ValidationError("line " + std::to_string(lineno) +
                                      ": occurrences must be >= 1");
            if (rec.params.size() != 2 * static_cast<std::size_t>(rec.n))
                throw ValidationError("line " + std::to_string(lineno) +
                                      ": params length does not match n");

            // Rebuild the fingerprint and confirm that the stored energy is
            // reproducible from the stored parameters.
            Configuration config{rec.manifold, rec.params};
            const RieszParam param(rec.s);
            EnergyBreakdown breakdown = total_energy(config, param);
            if (std::fabs(breakdown.total - rec.energy) >
                1e-12 * std::max(1.0, std::fabs(rec.energy)))
                throw ValidationError("line " + std::to_string(lineno) +
                                      ": stored energy is not reproducible from params");
            std::sort(breakdown.point_energies.begin(), breakdown.point_energies.end());
            rec.fingerprint = std::move(breakdown.point_energies);
            lib.records_.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad library record: ") + e.what(), lineno);
        }
    }
    return lib;
}

Configuration ingest_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open coordinate file: " + path);
    Configuration config;
    config.manifold = Manifold::sphere();
    std::string line;
    int lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream iss(line);
        std::vector<std::string> tokens;
        for (std::string tok; iss >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (!seen_data && tokens.size() == 1 && is_plain_integer(tokens[0]))
            continue;  // leading count line
        if (tokens.size() != 3)
            throw ParseError("expected three coordinates, got " +
                                 std::to_string(tokens.size()),
                             lineno);
        double xyz[3];
        for (int c = 0; c < 3; ++c)
            if (!parse_number(tokens[static_cast<std::size_t>(c)], xyz[c]))
                throw ParseError("not a number: " + tokens[static_cast<std::size_t>(c)],
                                 lineno);
        seen_data = true;
        Vec3 p{xyz[0], xyz[1], xyz[2]};
        const double norm = p.norm();
        if (std::fabs(norm - 1.0) > 1e-6)
            throw ValidationError("line " + std::to_string(lineno) + ": point norm " +
                                  std::to_string(norm) + " is not within 1e-6 of 1");
        p = p / norm;
        double alpha = 0.0, beta = 0.0;
        config.manifold.angles_from_point(p, alpha, beta);
        config.params.push_back(alpha);
        config.params.push_back(beta);
    }
    if (config.params.empty()) throw ValidationError("no points in " + path);
    return config;
}

GapSeries gap_series(const Library& library, const Manifold& manifold, double s,
                     const ExpansionTerm& normalizer) {
    GapSeries out;
    out.s = s;
    std::map<int, std::vector<const ConfigRecord*>> groups;
    for (const ConfigRecord& rec : library.records())
        if (rec.manifold == manifold && rec.s == s) groups[rec.n].push_back(&rec);

    for (const auto& [n, recs] : groups) {
        if (recs.size() < 2) {
            out.excluded.push_back(n);
            continue;
        }
        double lowest = recs.front()->energy;
        for (const ConfigRecord* rec : recs) lowest = std::min(lowest, rec->energy);

        long trials = 0;
        double weighted_sum = 0.0;
        for (const ConfigRecord* rec : recs) {
            if (!rec->stable) continue;
            trials += rec->occurrences;
            weighted_sum += rec->occurrences * rec->energy;
        }
        if (trials == 0) {
            out.excluded.push_back(n);
            continue;
        }
        const double mean = weighted_sum / static_cast<double>(trials);
        double var_sum = 0.0;
        for (const ConfigRecord* rec : recs) {
            if (!rec->stable) continue;
            const double d = rec->energy - mean;
            var_sum += rec->occurrences * d * d;
        }
        const double sem =
            trials > 1 ? std::sqrt(var_sum / static_cast<double>(trials - 1)) /
                             std::sqrt(static_cast<double>(trials))
                       : 0.0;

        GapPoint p;
        p.n = n;
        p.mean = mean;
        p.sem = sem;
        p.lowest = lowest;
        // The mean of stable energies cannot fall below the overall minimum;
        // clamp the last-ulp rounding of the weighted average.
        p.gap = std::max(0.0, mean - lowest);
        p.normalizer = std::fabs(term_value(normalizer, n));
        p.ratio = p.gap / p.normalizer;
        p.trials = static_cast<int>(trials);
        p.records = static_cast<int>(recs.size());
        out.points.push_back(p);
    }
    return out;
}

double residual(double energy, int n, const ExpansionCatalog& catalog, int k) {
    if (k < 0 || k > static_cast<int>(catalog.terms.size()))
        throw std::invalid_argument("residual: k must be between 0 and the catalog size");
    double acc = energy;
    for (int i = 0; i < k; ++i) {
        const ExpansionTerm& term = catalog.terms[static_cast<std::size_t>(i)];
        if (term.provenance == Provenance::Free)
            throw std::invalid_argument("residual: coefficient of '" + term.label +
                                        "' is a fitted reference, not an established value");
        acc -= term_value(term, n);
    }
    return acc;
}

ExpansionTerm parse_term_label(const std::string& label) {
    ExpansionTerm term;
    term.label = label;
    term.coefficient = 1.0;
    term.provenance = Provenance::Free;
    if (label == "1") return term;
    if (label == "logN") {
        term.log_factor = true;
        return term;
    }
    if (label == "sqrtN") {
        term.power = 0.5;
        return term;
    }
    if (label == "N") {
        term.power = 1.0;
        return term;
    }
    if (label == "NlogN") {
        term.power = 1.0;
        term.log_factor = true;
        return term;
    }
    if (label.size() > 2 && label[0] == 'N' && label[1] == '^') {
        std::string body = label.substr(2);
        if (body.size() > 4 && body.substr(body.size() - 4) == "logN") {
            term.log_factor = true;
            body.resize(body.size() - 4);
        }
        double power = 0.0;
        if (!parse_number(body, power))
            throw FitError("bad exponent in term label: " + label);
        term.power = power;
        return term;
    }
    throw FitError("unrecognized term label: " + label);
}

FitResult fit_expansion(const std::vector<std::pair<int, double>>& data,
                        const ExpansionCatalog& catalog,
                        const std::vector<std::string>& free_labels, int n_lo, int n_hi) {
    if (free_labels.empty()) throw FitError("no free terms to fit");

    std::vector<ExpansionTerm> basis;
    basis.reserve(free_labels.size());
    for (const std::string& label : free_labels) basis.push_back(parse_term_label(label));

    std::vector<const ExpansionTerm*> fixed;
    for (const ExpansionTerm& term : catalog.terms) {
        if (std::find(free_labels.begin(), free_labels.end(), term.label) !=
            free_labels.end())
            continue;  // being solved for instead
        if (term.provenance == Provenance::Free) continue;  // reference only
        fixed.push_back(&term);
    }

    std::vector<std::pair<int, double>> rows;
    for (const auto& point : data)
        if (point.first >= n_lo && point.first <= n_hi) rows.push_back(point);
    std::sort(rows.begin(), rows.end());
    if (rows.size() < basis.size())
        throw FitError("fit range holds " + std::to_string(rows.size()) +
                       " points for " + std::to_string(basis.size()) + " free terms");

    const Eigen::Index nrows = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index ncols = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd A(nrows, ncols);
    Eigen::VectorXd y(nrows);
    for (Eigen::Index i = 0; i < nrows; ++i) {
        const double n = rows[static_cast<std::size_t>(i)].first;
        double held = 0.0;
        for (const ExpansionTerm* term : fixed) held += term_value(*term, n);
        y(i) = rows[static_cast<std::size_t>(i)].second - held;
        for (Eigen::Index c = 0; c < ncols; ++c)
            A(i, c) = basis_value(basis[static_cast<std::size_t>(c)], n);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double condition =
        smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < ncols) {
        std::ostringstream msg;
        msg << "rank-deficient basis on this data (rank " << qr.rank() << " of " << ncols
            << ", condition estimate " << condition << ")";
        throw FitError(msg.str());
    }
    const Eigen::VectorXd coef = qr.solve(y);
    const Eigen::VectorXd res = y - A * coef;

    FitResult result;
    for (const ExpansionTerm* term : fixed) {
        result.fixed_labels.push_back(term->label);
        result.fixed_values.push_back(term->coefficient);
    }
    result.free_labels = free_labels;
    result.free_values.assign(coef.data(), coef.data() + coef.size());
    result.n_lo = n_lo;
    result.n_hi = n_hi;
    result.data_n.reserve(rows.size());
    for (const auto& row : rows) result.data_n.push_back(row.first);
    result.residuals.assign(res.data(), res.data() + res.size());
    result.max_abs_residual = res.size() > 0 ? res.cwiseAbs().maxCoeff() : 0.0;
    result.condition = condition;
    result.ill_conditioned = condition > 1e12;
    return result;
}

}  // namespace rieszlab
