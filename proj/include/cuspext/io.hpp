#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "cuspext/profile.hpp"

namespace cuspext {

/// Two-column table with header "t,psi". Data rows are numbered from 1.
struct ProfileTable {
  std::vector<double> t;
  std::vector<double> psi;
};

/// Parses and validates a profile table. Throws ConfigError("row i: ...").
ProfileTable read_profile_table(std::istream& in);

/// kind must be Step or Tabulated.
CuspProfile read_profile_csv(std::istream& in, ProfileKind kind = ProfileKind::Tabulated);
CuspProfile load_profile_csv(const std::filesystem::path& path,
                             ProfileKind kind = ProfileKind::Tabulated);

/// Writes "t,psi" with round-trip precision.
void write_profile_csv(std::ostream& out, std::span<const double> t, std::span<const double> psi);

}  // namespace cuspext
