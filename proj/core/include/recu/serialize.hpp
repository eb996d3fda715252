#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "recu/network.hpp"

namespace recu {

enum class MatrixEncoding {
  dense,   // "A": [[...], ...] row-major
  sparse,  // "A_sparse": {"rows": R, "cols": C, "entries": [[i, j, v], ...]}
  automatic,
};

/// Dense layers up to this many entries are written in the dense encoding
/// when MatrixEncoding::automatic is requested.
inline constexpr long long kDenseEntryLimit = 1'000'000;

/// JSON document {"activation":"rho3","input_dim":d,"layers":[{"A":[[...]],"b":[...]}]}.
/// Doubles are printed in shortest round-trip form, so reading back is
/// bit-exact.
std::string serialize(const Network& net, MatrixEncoding encoding = MatrixEncoding::automatic);

/// Throws ParseError (with its location) on malformed documents, non-numeric
/// or non-finite entries and inconsistent shapes.
Network deserialize(std::string_view text);

void save_network(const Network& net, const std::filesystem::path& path,
                  MatrixEncoding encoding = MatrixEncoding::automatic);
Network load_network(const std::filesystem::path& path);

}  // namespace recu
