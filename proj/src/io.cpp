#include "sfv/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace sfv {

namespace {

static_assert(std::endian::native == std::endian::little,
              "on-disk format is little-endian; big-endian hosts need byte swaps");

constexpr char kFieldMagic[8] = {'S', 'F', 'V', 'R', 'O', 'M', '1', '\0'};
constexpr char kSetMagic[8] = {'S', 'F', 'V', 'S', 'E', 'T', '1', '\0'};
constexpr char kBasisMagic[8] = {'S', 'F', 'V', 'B', 'A', 'S', '1', '\0'};
constexpr char kOpsMagic[8] = {'S', 'F', 'V', 'O', 'P', 'S', '1', '\0'};

void write_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64_array(std::ostream& os, const std::vector<double>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::uint64_t read_u64(std::istream& is) {
    std::uint64_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw IoError("unexpected end of file");
    return v;
}

double read_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw IoError("unexpected end of file");
    return v;
}

std::vector<double> read_f64_array(std::istream& is, std::size_t n) {
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!is) throw IoError("unexpected end of file");
    return v;
}

void expect_magic(std::istream& is, const char (&magic)[8], const char* what) {
    char buf[8];
    is.read(buf, 8);
    if (!is || std::memcmp(buf, magic, 8) != 0)
        throw IoError(std::string("bad magic, not a ") + what + " file");
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
    write_u64(os, m.rows());
    write_u64(os, m.cols());
    write_f64_array(os, m.data());
}

DenseMatrix read_matrix(std::istream& is) {
    std::size_t rows = read_u64(is);
    std::size_t cols = read_u64(is);
    DenseMatrix m(rows, cols);
    m.data() = read_f64_array(is, rows * cols);
    return m;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    return is;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& field, const std::vector<double>& parameters,
                 double time) {
    const auto& g = field.grid();
    os.write(kFieldMagic, 8);
    write_u64(os, static_cast<std::uint64_t>(g.nx()));
    write_u64(os, static_cast<std::uint64_t>(g.ny()));
    write_f64(os, g.lx());
    write_f64(os, g.ly());
    write_u64(os, static_cast<std::uint64_t>(field.tag()));
    write_u64(os, parameters.size());
    write_f64_array(os, parameters);
    write_f64(os, time);
    write_f64_array(os, field.values());
}

FieldRecord read_field(std::istream& is, GridPtr expected_grid) {
    expect_magic(is, kFieldMagic, "field");
    int nx = static_cast<int>(read_u64(is));
    int ny = static_cast<int>(read_u64(is));
    double lx = read_f64(is);
    double ly = read_f64(is);
    FieldTag tag = field_tag_from_int(static_cast<int>(read_u64(is)));
    std::size_t nparams = read_u64(is);
    std::vector<double> params = read_f64_array(is, nparams);
    double time = read_f64(is);

    GridPtr grid;
    if (expected_grid) {
        StructuredGrid stored(nx, ny, lx, ly);
        if (!stored.same_as(*expected_grid))
            throw FingerprintError("field grid " + std::to_string(nx) + "x" + std::to_string(ny) +
                                   " does not match the expected grid");
        grid = expected_grid;
    } else {
        grid = std::make_shared<StructuredGrid>(nx, ny, lx, ly);
    }
    std::vector<double> values = read_f64_array(is, grid->num_cells());
    return {ScalarField(grid, std::move(values), tag), std::move(params), time};
}

void save_snapshot_set(const std::filesystem::path& path, const SnapshotSet& set) {
    auto os = open_out(path);
    os.write(kSetMagic, 8);
    write_u64(os, static_cast<std::uint64_t>(set.variable()));
    write_u64(os, set.count());
    for (const auto& s : set.snapshots()) write_field(os, s.field, s.parameters, s.time);
    if (!os) throw IoError("write failed: " + path.string());
}

SnapshotSet load_snapshot_set(const std::filesystem::path& path, GridPtr expected_grid) {
    auto is = open_in(path);
    expect_magic(is, kSetMagic, "snapshot set");
    FieldTag tag = field_tag_from_int(static_cast<int>(read_u64(is)));
    std::size_t count = read_u64(is);
    SnapshotSet set(tag);
    GridPtr grid = expected_grid;
    for (std::size_t k = 0; k < count; ++k) {
        FieldRecord rec = read_field(is, grid);
        grid = rec.field.grid_ptr();  // later snapshots must match the first
        set.add(std::move(rec.field), std::move(rec.parameters), rec.time);
    }
    return set;
}

void save_basis(const std::filesystem::path& path, const PodBasis& basis) {
    auto os = open_out(path);
    os.write(kBasisMagic, 8);
    write_u64(os, static_cast<std::uint64_t>(basis.variable));
    write_f64(os, basis.threshold);
    write_u64(os, basis.eigenvalues.size());
    write_f64_array(os, basis.eigenvalues);
    write_u64(os, basis.modes.size());
    for (const auto& mode : basis.modes) write_field(os, mode, {}, 0.0);
    if (!os) throw IoError("write failed: " + path.string());
}

PodBasis load_basis(const std::filesystem::path& path, GridPtr expected_grid) {
    auto is = open_in(path);
    expect_magic(is, kBasisMagic, "basis");
    PodBasis basis;
    basis.variable = field_tag_from_int(static_cast<int>(read_u64(is)));
    basis.threshold = read_f64(is);
    std::size_t n_eig = read_u64(is);
    basis.eigenvalues = read_f64_array(is, n_eig);
    std::size_t n_modes = read_u64(is);
    GridPtr grid = expected_grid;
    for (std::size_t k = 0; k < n_modes; ++k) {
        FieldRecord rec = read_field(is, grid);
        grid = rec.field.grid_ptr();
        basis.modes.push_back(std::move(rec.field));
    }
    return basis;
}

void save_operators(const std::filesystem::path& path, const ReducedOperators& ops) {
    auto os = open_out(path);
    os.write(kOpsMagic, 8);
    write_u64(os, static_cast<std::uint64_t>(ops.fingerprint.nx));
    write_u64(os, static_cast<std::uint64_t>(ops.fingerprint.ny));
    write_f64(os, ops.fingerprint.lx);
    write_f64(os, ops.fingerprint.ly);
    write_u64(os, ops.fingerprint.n_omega);
    write_u64(os, ops.fingerprint.n_psi);
    write_matrix(os, ops.mass);
    write_matrix(os, ops.cross_mass);
    write_matrix(os, ops.diffusion);
    write_matrix(os, ops.psi_poisson);
    write_u64(os, ops.convection.size());
    for (const auto& m : ops.convection) write_matrix(os, m);
    write_u64(os, ops.forcing.size());
    write_f64_array(os, ops.forcing);
    if (!os) throw IoError("write failed: " + path.string());
}

ReducedOperators load_operators(const std::filesystem::path& path, const Fingerprint* expected) {
    auto is = open_in(path);
    expect_magic(is, kOpsMagic, "reduced operators");
    ReducedOperators ops;
    ops.fingerprint.nx = static_cast<int>(read_u64(is));
    ops.fingerprint.ny = static_cast<int>(read_u64(is));
    ops.fingerprint.lx = read_f64(is);
    ops.fingerprint.ly = read_f64(is);
    ops.fingerprint.n_omega = read_u64(is);
    ops.fingerprint.n_psi = read_u64(is);
    if (expected && !(ops.fingerprint == *expected))
        throw FingerprintError("reduced operators were built under a different configuration");
    ops.mass = read_matrix(is);
    ops.cross_mass = read_matrix(is);
    ops.diffusion = read_matrix(is);
    ops.psi_poisson = read_matrix(is);
    std::size_t n_conv = read_u64(is);
    for (std::size_t k = 0; k < n_conv; ++k) ops.convection.push_back(read_matrix(is));
    std::size_t n_forcing = read_u64(is);
    ops.forcing = read_f64_array(is, n_forcing);
    return ops;
}

}  // namespace sfv
