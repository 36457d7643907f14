#pragma once

#include <cstdint>

#include "pmet/check_report.hpp"
#include "pmet/determinize.hpp"

namespace pmet {

enum class MonadId { PowFin, Dist };

/// Verifies, on seeded random instances over the given space:
///   (i)   unit isometry: lifted distance of (unit x, unit y) equals d(x, y)
///         exactly, exhaustively over all pairs;
///   (ii)  multiplication nonexpansiveness: lifted distance after flattening
///         is at most the nested two-level lifted distance, within 1e-6;
///   (iii) the monad equations (unit laws and associativity) on random data.
/// Random weights are drawn on a dyadic grid so the equational laws can be
/// compared for exact equality.
CheckReport check_monad_metric_laws(MonadId monad, const PseudometricSpace& space, int instances,
                                    std::uint64_t rng_seed);

enum class SystemId { Nfa, Pa };

/// Two checks per instance for the determinization law of the given system:
///   (a) the pointwise evaluation inequality on random elements of FG[0,top]
///       (equality for the powerset law);
///   (b) direct metric nonexpansiveness: the lifted-GF distance of the images
///       is at most the lifted-FG distance of the arguments, within 1e-6.
CheckReport check_em_law_nonexpansive(SystemId system, const PseudometricSpace& space,
                                      const LiftParams& params, int instances,
                                      std::uint64_t rng_seed);

}  // namespace pmet
