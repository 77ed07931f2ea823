#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cyclebound/critfind/critfind.hpp"
#include "cyclebound/cycledetect/cycledetect.hpp"
#include "cyclebound/milnorfiber/milnorfiber.hpp"
#include "cyclebound/polyalg/vector_field.hpp"

namespace cyclebound::analysis {

using critfind::CriticalPoint;
using cycles::LimitCycle;
using milnor::MilnorData;
using polyalg::VectorField;
using Json = nlohmann::ordered_json;

struct AnalysisConfig {
    critfind::SolveConfig solve;
    milnor::MilnorConfig milnor;
    cycles::CycleConfig cycles;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

// Every numeric setting, in a fixed key order.
Json config_echo(const AnalysisConfig& cfg);

enum class Verdict { inequality_holds, inequality_violated, inconclusive };

const char* verdict_name(Verdict v);
Verdict verdict_from_name(const std::string& s);

struct VerdictResult {
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> reasons;
};

// Pure in its inputs: inconclusive when any Milnor entry failed, is unstable
// or has a failed extraction; otherwise compares the count with the bound.
VerdictResult verdict(std::span<const MilnorData> milnor, std::size_t detected);

// Sum of l over the stable entries.
int bound_from(std::span<const MilnorData> milnor);

struct BoundResult {
    int bound = 0;
    std::vector<CriticalPoint> critical_points;
    std::vector<MilnorData> milnor;
};

// Throws whatever find_critical_points throws.
BoundResult homology_bound(const VectorField& v, const AnalysisConfig& cfg = {});

struct CpSummary {
    int id = 0;
    Point location;
    double det = 0.0;
    double trace = 0.0;
    bool nondegenerate = false;
    int index = 0;
    bool certified = false;
    bool on_boundary = false;
    double residual = 0.0;

    friend bool operator==(const CpSummary&, const CpSummary&) = default;
};

CpSummary summarize(const CriticalPoint& cp);

struct ResidenceRow {
    int cycle = 0;
    int cp_id = 0;
    double mean_speed = 0.0;
    double relative_variation = 0.0;

    friend bool operator==(const ResidenceRow&, const ResidenceRow&) = default;
};

struct ClassRow {
    int cycle = 0;
    int cp_id = 0;
    // Fiber level matched to the cycle (mean of |V - V(p)| along it).
    double eta = 0.0;
    bool in_tube = false;
    std::optional<int> component_index;
    std::optional<double> hausdorff;
    std::string error;

    friend bool operator==(const ClassRow&, const ClassRow&) = default;
};

struct EqualityHypothesis {
    bool submersion_ok_all = true;
    std::vector<int> failed_at;

    friend bool operator==(const EqualityHypothesis&, const EqualityHypothesis&) = default;
};

struct AnalysisReport {
    std::string system_name;
    Json config_echo;
    std::vector<CpSummary> critical_points;
    std::vector<MilnorData> milnor;
    int bound = 0;
    std::vector<LimitCycle> detected;
    std::vector<std::vector<int>> enclosure;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> reasons;
    EqualityHypothesis equality_hypothesis;
    std::vector<ResidenceRow> residence;
    std::vector<ClassRow> class_map;
    std::vector<std::string> notes;
    std::vector<std::string> figures;
    std::string timestamp;
};

bool operator==(const AnalysisReport& a, const AnalysisReport& b);

// Full pipeline. Never throws for numerical failures; they become an
// inconclusive verdict with reasons.
AnalysisReport compare(const VectorField& v, const AnalysisConfig& cfg = {});

// V + s * (a0 + a1 x + a2 y, b0 + b1 x + b2 y), coefficients uniform dyadic
// rationals in [-1, 1) from a seeded mt19937_64. s = 0 returns v unchanged.
VectorField morsify(const VectorField& v, double s, std::uint64_t seed);

struct MorsifyRow {
    double s = 0.0;
    std::uint64_t seed = 0;
    int k = -1;
    int bound = -1;
    int detected = -1;
    bool submersion_ok_all = false;
    bool k_changed = false;
    bool bound_changed = false;
    bool detected_changed = false;
    std::string error;

    bool any_change() const { return k_changed || bound_changed || detected_changed || !error.empty(); }
    friend bool operator==(const MorsifyRow&, const MorsifyRow&) = default;
};

// First row is the unperturbed system (s = 0); every other row is flagged
// against it.
std::vector<MorsifyRow> morsification_invariance(const VectorField& v, std::span<const double> s_values,
                                                 std::span<const std::uint64_t> seeds, const AnalysisConfig& cfg = {});

// JSON
Json to_json(const AnalysisReport& r, bool with_timestamp = true);
AnalysisReport report_from_json(const Json& j);
Json to_json(const MilnorData& m);
Json to_json(const LimitCycle& c);
Json to_json(const milnor::FiberCurve& f);
Json to_json(const std::vector<MorsifyRow>& rows);
Json critical_points_json(std::span<const CriticalPoint> cps);

// Phase portrait: sampled trajectories, critical points, cycles and the
// Milnor fibers at the top of each sweep.
void write_phase_portrait(std::ostream& os, const VectorField& v, const AnalysisReport& r,
                          const AnalysisConfig& cfg = {});

} // namespace cyclebound::analysis
