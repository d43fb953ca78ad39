#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rieszlab/constants.hpp"
#include "rieszlab/energy.hpp"
#include "rieszlab/manifold.hpp"
#include "rieszlab/optimizer.hpp"
#include "rieszlab/stability.hpp"

namespace rieszlab {

// ---------------------------------------------------------------------------
// Configuration library: deduplicated low-energy states with occurrence
// counts, persisted as one JSON object per line.
// ---------------------------------------------------------------------------

// One distinct state.  Two trials are considered the same state when their
// (manifold, s, n) match, their energies agree to 1e-9 relative, and their
// sorted per-point energy vectors agree componentwise to 1e-8 relative
// (1e-12 absolute floor).  The fingerprint is invariant under rigid motions
// and point relabeling, which is exactly the freedom the optimizer has.
struct ConfigRecord {
    Manifold manifold = Manifold::sphere();
    double s = 1.0;
    int n = 0;
    std::vector<std::uint64_t> seeds;  // every trial that reached this state
    std::vector<double> params;        // representative (lowest-energy) copy
    double energy = 0.0;
    double grad_norm = 0.0;
    double lambda_star = 0.0;
    bool stable = false;   // certificate verdict for the representative
    bool relaxed = false;  // which certificate test was used
    int occurrences = 1;

    // Sorted per-point energies; rebuilt on load, never serialized.
    std::vector<double> fingerprint;
};

enum class MergeOutcome { NewRecord, Merged, Discarded };

// In-memory record set.  Not thread-safe: writes go through a single owner
// (the CLI runs trials in parallel and merges the results in seed order,
// which the order-independent dedup makes reproducible anyway).
class Library {
public:
    const std::vector<ConfigRecord>& records() const { return records_; }
    std::vector<ConfigRecord>& records() { return records_; }

    // Admission rule: a trial enters the library when its certificate says
    // stable, or when it undercuts every energy already recorded for its
    // (manifold, s, n) group.  Anything else is Discarded.  Admitted trials
    // either merge into a matching record (occurrences + 1, seed appended,
    // representative swapped if the newcomer's energy is lower) or open a
    // new record.
    MergeOutcome merge(const TrialResult& trial, RieszParam param,
                       const StabilityCertificate& certificate);

    // Lowest recorded energy for a group, if any record exists.
    std::optional<double> lowest_energy(const Manifold& manifold, double s, int n) const;

    // Line-delimited JSON.  Energies are written both as decimal (for
    // humans) and as hexadecimal floating point (for exact round-trip);
    // load() prefers the hex field, recomputes every fingerprint, and
    // verifies that the stored energy is reproducible from the stored
    // parameters (ValidationError otherwise).  Malformed lines raise
    // ParseError with the 1-based line number.
    void save(const std::string& path) const;
    static Library load(const std::string& path);

private:
    std::vector<ConfigRecord> records_;
};

// ---------------------------------------------------------------------------
// External coordinate ingestion.
// ---------------------------------------------------------------------------

// Read one x y z triple per line (an optional single-integer count line at
// the top is tolerated, as are blank lines) and return the corresponding
// sphere configuration.  Points must lie within 1e-6 of the unit sphere and
// are normalized onto it; anything farther out raises ValidationError, and
// lines that are not three numbers raise ParseError with the line number.
Configuration ingest_xyz(const std::string& path);

// ---------------------------------------------------------------------------
// Occurrence-weighted averages and energy gaps.
// ---------------------------------------------------------------------------

struct GapPoint {
    int n = 0;
    double mean = 0.0;        // occurrence-weighted mean stable energy
    double sem = 0.0;         // weighted sample std dev / sqrt(total trials)
    double lowest = 0.0;      // lowest energy over all records at this n
    double gap = 0.0;         // mean - lowest, always >= 0
    double normalizer = 0.0;  // |normalizing term| evaluated at this n
    double ratio = 0.0;       // gap / normalizer
    int trials = 0;           // total occurrences behind the mean
    int records = 0;          // distinct records at this n
};

struct GapSeries {
    double s = 1.0;
    std::vector<GapPoint> points;  // ascending n
    std::vector<int> excluded;     // n values skipped (fewer than 2 records
                                   // or no stable record to average)
};

// Per-n gap between the average stable energy and the lowest observed
// energy, normalized by |term_value(normalizer, n)|.  A value of n enters
// the series only when the library holds at least two distinct records and
// at least one stable trial for it; skipped values are listed in excluded.
GapSeries gap_series(const Library& library, const Manifold& manifold, double s,
                     const ExpansionTerm& normalizer);

// ---------------------------------------------------------------------------
// Expansion residuals and least-squares fits.
// ---------------------------------------------------------------------------

// energy minus the first k catalog terms evaluated at n.  k = 0 returns the
// energy unchanged.  Throws std::invalid_argument if k exceeds the catalog
// or any of the first k terms is Free (reference-only coefficients must not
// be subtracted as if they were known).
double residual(double energy, int n, const ExpansionCatalog& catalog, int k);

// Grammar: "1" | "logN" | "sqrtN" | "N" | "NlogN" | "N^p" | "N^plogN" with p
// a decimal exponent.  Returns an ExpansionTerm with unit coefficient.
// Unrecognized labels raise FitError.
ExpansionTerm parse_term_label(const std::string& label);

struct FitResult {
    std::vector<std::string> fixed_labels;  // catalog terms subtracted first
    std::vector<double> fixed_values;       // their (held) coefficients
    std::vector<std::string> free_labels;   // basis actually solved for
    std::vector<double> free_values;        // solved coefficients
    int n_lo = 0, n_hi = 0;                 // fit range actually used
    std::vector<int> data_n;                // data abscissas inside the range
    std::vector<double> residuals;          // data - (fixed + fitted model)
    double max_abs_residual = 0.0;
    double condition = 0.0;        // singular-value ratio of the basis matrix
    bool ill_conditioned = false;  // condition above 1e12 (result kept)
};

// Linear least squares for the free coefficients after subtracting every
// non-Free catalog term whose label is not being solved for.  Free catalog
// terms not listed in free_labels are ignored entirely.  Solved by
// column-pivoted QR (never normal equations); rank deficiency raises
// FitError carrying the condition estimate.  Data outside [n_lo, n_hi] is
// dropped; fewer remaining points than free terms raises FitError.
FitResult fit_expansion(const std::vector<std::pair<int, double>>& data,
                        const ExpansionCatalog& catalog,
                        const std::vector<std::string>& free_labels, int n_lo, int n_hi);

}  // namespace rieszlab
