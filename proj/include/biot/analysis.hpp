#pragma once

#include <string>
#include <vector>

#include "biot/assembly.hpp"
#include "biot/preconditioners.hpp"

namespace biot {

// Which divergence-coupling pair to probe. P1P0_CONTROL is a deliberately
// unstable equal-order pairing used as a negative control: its constant decays
// under refinement while the stable pairs stay bounded away from zero.
enum class InfSupPair { UP, VP, P1P0_CONTROL };

struct InfSupEstimate {
  InfSupPair pair = InfSupPair::UP;
  double h = 0.0;
  double gamma_h = 0.0;
};

// Smallest nonzero singular value of the coupling block, measured in the
// natural norms of the two spaces: solves B N_u^{-1} B^T q = sigma^2 N_p q
// densely and drops the kernel modes.
InfSupEstimate estimate_infsup(InfSupPair pair, const Mesh& mesh, const MaterialParams& params);

// max|lambda| / min|lambda| of the P-preconditioned operator. Pass prec =
// nullptr for the unpreconditioned spectrum.
double condition_number(const BlockOperator& op, const Preconditioner* prec,
                        EigMode mode = EigMode::DENSE, const EigOptions& opt = {});

struct MaterialEntry {
  std::string name;
  double xi_beta = 0.0;
};

// The bundled storage-times-augmentation table for representative rocks.
std::vector<MaterialEntry> materials_table();

// Parse "name,xi_beta" rows (header line required) for comparison against the
// bundled table.
std::vector<MaterialEntry> load_materials_csv(const std::string& path);

InfSupPair infsup_pair_from_string(const std::string& s);
std::string to_string(InfSupPair pair);

}  // namespace biot
