#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace superjet {

/// Result of one randomized property check.
struct CheckOutcome {
  std::string suite;
  std::string name;
  int cases = 0;
  int failures = 0;
  /// First failure, if any.
  std::string detail;

  bool passed() const noexcept { return failures == 0 && cases > 0; }
};

enum class Suite { core, supermap, numeric, all };

Suite parse_suite(const std::string& name);

/// Every check draws its data from an Rng seeded by (seed, check name), so a check's outcome does
/// not depend on which other checks run.
using CheckFunction = CheckOutcome (*)(std::uint64_t seed, int cases);

struct CheckEntry {
  const char* suite;
  const char* name;
  CheckFunction run;
};

const std::vector<CheckEntry>& registered_checks();

/// Runs the checks of a suite in registration order.
std::vector<CheckOutcome> run_verify(Suite suite, std::uint64_t seed, int cases);

/// Fixed-width table, one row per check, followed by a summary line.
std::string format_report(const std::vector<CheckOutcome>& outcomes);

// Individual checks (also used directly by the acceptance driver).
CheckOutcome check_phi_identity(std::uint64_t seed, int cases);
CheckOutcome check_geodesic_coefficients(std::uint64_t seed, int cases);
/// `pairs` random products per connection pair for multiplicativity.
CheckOutcome check_psi_automorphism(std::uint64_t seed, int cases, int pairs);
CheckOutcome check_psi_example(std::uint64_t seed, int cases);
CheckOutcome check_parse_print(std::uint64_t seed, int cases);

CheckOutcome check_bijection(std::uint64_t seed, int cases);
CheckOutcome check_connection_change(std::uint64_t seed, int cases);
CheckOutcome check_inner_hom(std::uint64_t seed, int cases);
/// `elements` random members of the (k+1)-st power of the diagonal ideal per morphism.
CheckOutcome check_diagonal(std::uint64_t seed, int cases, int elements);
CheckOutcome check_curry_round_trip(std::uint64_t seed, int cases);
CheckOutcome check_curry_parametrised(std::uint64_t seed, int cases);

CheckOutcome check_exp_closed_form(std::uint64_t seed, int cases);
CheckOutcome check_exp_order(std::uint64_t seed, int cases);
CheckOutcome check_chart_round_trip(std::uint64_t seed, int cases);
CheckOutcome check_transport(std::uint64_t seed, int cases);
CheckOutcome check_tangent(std::uint64_t seed, int cases);

}  // namespace superjet
