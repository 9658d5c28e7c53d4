#pragma once

// Observables built on casimir_pressure: temperature differences, gap
// sweeps and material-pair comparisons.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "casimir/dispersion.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

struct MaterialPair {
    Material first;
    Material second;

    std::string label() const { return first.name() + "-" + second.name(); }
};

/// The six unordered combinations of the Au, Cu and Al presets.
std::vector<MaterialPair> preset_pairs();

/// |F| at two temperatures for the same plates. `t_low` names the reference
/// temperature; delta = f_low_T - f_high_T and relative = delta / f_low_T.
struct DiffResult {
    double gap = 0.0;
    double t_low = 0.0;
    double t_high = 0.0;
    double f_low_T = 0.0;
    double f_high_T = 0.0;
    double delta = 0.0;
    double relative = 0.0;
    long m_used_low = 0;
    long m_used_high = 0;
};

/// Both pressures use the same solver options. Temperatures must be positive
/// and distinct; swapping them negates delta.
DiffResult temperature_difference(const PlateSystem& system, double t_low, double t_high,
                                  const SolverOptions& opts = {});

std::vector<DiffResult> relative_correction_curve(const MaterialPair& pair, std::span<const double> gaps,
                                                  double t_low, double t_high,
                                                  const SolverOptions& opts = {});

enum class GapSpacing { linear, logarithmic };

/// `count` gaps from `start` to `stop` inclusive.
struct GapGrid {
    double start = 0.0;
    double stop = 0.0;
    GapSpacing spacing = GapSpacing::linear;
    int count = 1;

    std::vector<double> values() const;
};

struct SweepSpec {
    std::vector<double> gaps;          // m
    std::vector<double> temperatures;  // K
    std::vector<MaterialPair> pairs;

    /// Throws DomainError on empty grids or non-positive values.
    void validate() const;
};

struct SweepRow {
    std::string pair;
    std::string material_1;
    std::string material_2;
    double gap_m = 0.0;
    double temperature_K = 0.0;
    double pressure_Pa = 0.0;  // |F|
    double tm_share = 0.0;
    double te_share = 0.0;
    long m_used = 0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepTable {
    SolverOptions solver;
    std::vector<SweepRow> rows;
};

/// One row per (pair, T, a), pairs in spec order, T and a ascending.
/// Cells run on `jobs` threads; the table does not depend on `jobs`.
SweepTable sweep(const SweepSpec& spec, const SolverOptions& opts = {}, unsigned jobs = 1);

void write_sweep_csv(std::ostream& out, const SweepTable& table);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

void write_diff_csv(std::ostream& out, const MaterialPair& pair, std::span<const DiffResult> rows,
                    const SolverOptions& opts);

struct GroupMember {
    std::string pair;
    double magnitude = 0.0;  // |F|, Pa
};

/// Group I: Al-Al. Group II: Al-Au, Al-Cu. Group III: Au-Au, Au-Cu, Cu-Cu.
struct PairGroup {
    std::string name;
    std::vector<GroupMember> members;
    double mean = 0.0;
};

/// Groups the requested preset pairs (all six by default); empty groups are
/// omitted. Non-preset names raise UnsupportedError.
std::vector<PairGroup> group_ordering(double gap, double kelvin,
                                      std::span<const std::pair<std::string, std::string>> pairs = {},
                                      const SolverOptions& opts = {});

}  // namespace casimir
