#pragma once

#include <optional>
#include <string>

#include "gapcert/normality.hpp"
#include "gapcert/process.hpp"

namespace gapcert {

enum class CondStatus { holds, fails, inconclusive };
enum class Direction { backward, forward };
enum class CqnVariant { full, primed, smooth };

struct QualOptions {
  double contact_tol = 1e-8;      // |h| tolerance for boundary-contact detection
  double delta_threshold = 1e-4;  // required strict-inequality margin
  int eps_grid = 6;               // geometric eps grid {S/10, S/20, ...}
  int directions = 64;            // C-sphere samples
  int a_samples_per_dim = 5;
  double geometry_tol = 1e-6;     // endpoint-cone activity tolerance
  double exemption_fraction = 0.0;  // window cells allowed to violate ("a.e.")
};

/// One condition's outcome with the achieved margin and its witnesses.
struct ConditionReport {
  std::string condition;
  CondStatus status = CondStatus::inconclusive;
  double margin = 0.0;  // achieved delta when it holds (infinity = vacuous)
  double eps_used = 0.0;
  std::vector<double> contact_instants;
  std::vector<std::string> witnesses;
};

struct QualificationReport {
  ConditionReport cna;
  ConditionReport cqn_b, cqn_f;
  ConditionReport tqn_b, tqn_f;
};

/// Condition for nondegenerate abnormality at the initial point.
ConditionReport check_cna(const ProblemSpec& p, const ExtendedProcess& proc,
                          const QualOptions& opts = {});

/// Window E(s,eps) (backward) / Gamma(s,eps) (forward): cells r in the window
/// whose extremal reachable-gradient pairing with (omega0, F) crosses zero,
/// for every listed constraint. Returns cell indices.
std::vector<int> active_window(const ProblemSpec& p, const ExtendedProcess& proc, double s,
                               double eps, Direction dir, const std::vector<int>& constraints);

ConditionReport check_cqn(const ProblemSpec& p, const ExtendedProcess& proc, Direction dir,
                          CqnVariant variant = CqnVariant::full, const QualOptions& opts = {});

ConditionReport check_tqn(const ProblemSpec& p, const ExtendedProcess& proc, Direction dir,
                          const QualOptions& opts = {});

QualificationReport check_all_qualifications(const ProblemSpec& p, const ExtendedProcess& proc,
                                             const QualOptions& opts = {});

enum class GapVerdictKind { no_gap_certified, gap_possible };

struct CompositeVerdict {
  GapVerdictKind kind = GapVerdictKind::gap_possible;
  std::string route;  // which premise chain fired
  bool any_inconclusive = false;
  std::optional<MultiplierSet> abnormality_certificate;
  std::string note;
};

/// NO-GAP-CERTIFIED via (CNa) and a backward or forward qualification chain,
/// or via a normality verdict; otherwise GAP-POSSIBLE (never "gap certain":
/// abnormality is necessary for a gap, not sufficient).
CompositeVerdict no_gap_verdict(const ProblemSpec& p, const ExtendedProcess& proc,
                                const QualificationReport& reports,
                                const NormalityVerdict* normality = nullptr);

const char* to_string(CondStatus s);
const char* to_string(GapVerdictKind k);
const char* to_string(NormalityKind k);

}  // namespace gapcert
