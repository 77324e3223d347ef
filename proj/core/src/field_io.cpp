#include "gmalab/field_io.hpp"

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "snapshot layout assumes a little-endian host");

namespace gmalab {

namespace {

constexpr char kMagic[4] = {'G', 'M', 'L', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kKindScalar = 0;
constexpr std::uint32_t kKindForm = 1;

std::filesystem::path temp_sibling(const std::filesystem::path& target) {
    static std::atomic<unsigned> counter{0};
    std::filesystem::path tmp = target;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    return tmp;
}

void atomic_write_bytes(const std::filesystem::path& path, const char* data,
                        std::size_t size) {
    const std::filesystem::path tmp = temp_sibling(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(data, static_cast<std::streamsize>(size));
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void append_u32(std::string& buf, std::uint32_t v) {
    buf.append(reinterpret_cast<const char*>(&v), sizeof v);
}

void append_doubles(std::string& buf, const double* data, std::size_t count) {
    buf.append(reinterpret_cast<const char*>(data), count * sizeof(double));
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

struct Header {
    std::uint32_t kind = 0;
    int n = 0;
    int N = 0;
    std::size_t payload_offset = 0;
};

Header parse_header(const std::string& raw, const std::filesystem::path& path) {
    if (raw.size() < 20 || std::memcmp(raw.data(), kMagic, 4) != 0)
        throw std::runtime_error("not a field snapshot: " + path.string());
    std::uint32_t version, kind, n, N;
    std::memcpy(&version, raw.data() + 4, 4);
    std::memcpy(&kind, raw.data() + 8, 4);
    std::memcpy(&n, raw.data() + 12, 4);
    std::memcpy(&N, raw.data() + 16, 4);
    if (version != kVersion)
        throw std::runtime_error("unsupported snapshot version in " + path.string());
    if (kind != kKindScalar && kind != kKindForm)
        throw std::runtime_error("unknown field kind in " + path.string());
    return Header{kind, static_cast<int>(n), static_cast<int>(N), 20};
}

} // namespace

void atomic_write_text(const std::filesystem::path& path,
                       const std::string& content) {
    atomic_write_bytes(path, content.data(), content.size());
}

void write_potential(const std::filesystem::path& path,
                     const PotentialField& field) {
    std::string buf;
    buf.append(kMagic, 4);
    append_u32(buf, kVersion);
    append_u32(buf, kKindScalar);
    append_u32(buf, static_cast<std::uint32_t>(field.grid().n));
    append_u32(buf, static_cast<std::uint32_t>(field.grid().N));
    append_doubles(buf, field.values().data(), field.values().size());
    atomic_write_bytes(path, buf.data(), buf.size());
}

PotentialField read_potential(const std::filesystem::path& path) {
    const std::string raw = read_all(path);
    const Header h = parse_header(raw, path);
    if (h.kind != kKindScalar)
        throw std::runtime_error("expected a scalar field snapshot: " + path.string());
    const TorusGrid grid(h.n, h.N);
    const std::size_t expect = h.payload_offset + grid.npoints() * sizeof(double);
    if (raw.size() != expect)
        throw std::runtime_error("truncated scalar snapshot: " + path.string());
    std::vector<double> values(grid.npoints());
    std::memcpy(values.data(), raw.data() + h.payload_offset,
                values.size() * sizeof(double));
    return PotentialField(grid, std::move(values));
}

void write_form(const std::filesystem::path& path, const FormField& field) {
    const int n = field.grid().n;
    std::string buf;
    buf.append(kMagic, 4);
    append_u32(buf, kVersion);
    append_u32(buf, kKindForm);
    append_u32(buf, static_cast<std::uint32_t>(n));
    append_u32(buf, static_cast<std::uint32_t>(field.grid().N));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            const std::complex<double> z = field.background().mat()(j, k);
            const double pair[2] = {z.real(), z.imag()};
            append_doubles(buf, pair, 2);
        }
    for (std::size_t p = 0; p < field.grid().npoints(); ++p)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::complex<double> z = field.hess(p, j, k);
                const double pair[2] = {z.real(), z.imag()};
                append_doubles(buf, pair, 2);
            }
    atomic_write_bytes(path, buf.data(), buf.size());
}

FormField read_form(const std::filesystem::path& path) {
    const std::string raw = read_all(path);
    const Header h = parse_header(raw, path);
    if (h.kind != kKindForm)
        throw std::runtime_error("expected a form field snapshot: " + path.string());
    const TorusGrid grid(h.n, h.N);
    const std::size_t nn = static_cast<std::size_t>(h.n) * static_cast<std::size_t>(h.n);
    const std::size_t expect =
        h.payload_offset + (nn + grid.npoints() * nn) * 2 * sizeof(double);
    if (raw.size() != expect)
        throw std::runtime_error("truncated form snapshot: " + path.string());

    std::size_t off = h.payload_offset;
    const auto next_complex = [&raw, &off]() {
        double pair[2];
        std::memcpy(pair, raw.data() + off, sizeof pair);
        off += sizeof pair;
        return std::complex<double>(pair[0], pair[1]);
    };
    Eigen::MatrixXcd bg(h.n, h.n);
    for (int j = 0; j < h.n; ++j)
        for (int k = 0; k < h.n; ++k) bg(j, k) = next_complex();
    FormField field(grid, HermitianMatrix::from_matrix(bg));
    for (std::size_t p = 0; p < grid.npoints(); ++p)
        for (int j = 0; j < h.n; ++j)
            for (int k = 0; k < h.n; ++k)
                field.set_hess(p, j, k, next_complex());
    return field;
}

void write_potential_csv(const std::filesystem::path& path,
                         const PotentialField& field) {
    const TorusGrid& g = field.grid();
    std::ostringstream out;
    out.precision(17);
    for (int j = 1; j <= g.n; ++j) out << "x" << j << ",y" << j << ",";
    out << "value\n";
    for (std::size_t p = 0; p < field.size(); ++p) {
        const std::array<int, 6> idx = grid_indices(g, p);
        for (int t = 0; t < g.axes(); ++t)
            out << static_cast<double>(idx[static_cast<std::size_t>(t)]) / g.N
                << ",";
        out << field[p] << "\n";
    }
    atomic_write_text(path, std::move(out).str());
}

} // namespace gmalab
