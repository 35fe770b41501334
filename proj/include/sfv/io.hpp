#pragma once

#include "sfv/pod.hpp"
#include "sfv/rom.hpp"

#include <filesystem>

namespace sfv {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a persisted artifact was produced under a different grid or
// basis configuration than the one it is being loaded into.
struct FingerprintError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All files are sequences of 64-bit little-endian values behind fixed magic
// tags; field blocks carry the grid geometry, variable tag, parameter vector
// and time so they are self-describing.
void write_field(std::ostream& os, const ScalarField& field,
                 const std::vector<double>& parameters, double time);

struct FieldRecord {
    ScalarField field;
    std::vector<double> parameters;
    double time;
};
FieldRecord read_field(std::istream& is, GridPtr expected_grid = nullptr);

void save_snapshot_set(const std::filesystem::path& path, const SnapshotSet& set);
SnapshotSet load_snapshot_set(const std::filesystem::path& path, GridPtr expected_grid = nullptr);

void save_basis(const std::filesystem::path& path, const PodBasis& basis);
PodBasis load_basis(const std::filesystem::path& path, GridPtr expected_grid = nullptr);

void save_operators(const std::filesystem::path& path, const ReducedOperators& ops);
ReducedOperators load_operators(const std::filesystem::path& path,
                                const Fingerprint* expected = nullptr);

}  // namespace sfv
