#include "ndlimit/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ndlimit {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                          static_cast<unsigned char>((v >> 8) & 0xFF),
                          static_cast<unsigned char>((v >> 16) & 0xFF),
                          static_cast<unsigned char>((v >> 24) & 0xFF)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw std::runtime_error("snapshot: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("snapshot: truncated file");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

template <int NC>
void write_impl(const std::string& path, const Field<NC>& f) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
    os.write("DSPN", 4);
    put_u32(os, k_snapshot_version);
    put_u32(os, static_cast<std::uint32_t>(f.grid().n()));
    put_u32(os, static_cast<std::uint32_t>(NC));
    put_f64(os, f.grid().half_width());
    for (int c = 0; c < NC; ++c) {
        const cplx* data = f.component(c);
        for (std::size_t i = 0; i < f.points(); ++i) {
            put_f64(os, data[i].real());
            put_f64(os, data[i].imag());
        }
    }
    if (!os) throw std::runtime_error("snapshot: write failed for '" + path + "'");
}

SnapshotInfo read_header(std::istream& is, const std::string& path) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "DSPN", 4) != 0)
        throw std::runtime_error("snapshot: '" + path + "' is not a DSPN file");
    SnapshotInfo info;
    info.version = get_u32(is);
    if (info.version != k_snapshot_version)
        throw std::runtime_error("snapshot: unsupported version in '" + path + "'");
    info.n = get_u32(is);
    info.components = get_u32(is);
    info.half_width = get_f64(is);
    if (info.components != 2 && info.components != 4)
        throw std::runtime_error("snapshot: bad component count in '" + path + "'");
    return info;
}

template <int NC>
Field<NC> read_impl(std::istream& is, const SnapshotInfo& info) {
    GridSpec g(static_cast<int>(info.n), info.half_width);
    Field<NC> f(g);
    for (int c = 0; c < NC; ++c) {
        cplx* data = f.component(c);
        for (std::size_t i = 0; i < f.points(); ++i) {
            double re = get_f64(is);
            double im = get_f64(is);
            data[i] = cplx(re, im);
        }
    }
    return f;
}

}  // namespace

void write_snapshot(const std::string& path, const TwoSpinorField& f) {
    write_impl(path, f);
}
void write_snapshot(const std::string& path, const SpinorField& f) {
    write_impl(path, f);
}

SnapshotInfo read_snapshot_info(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open '" + path + "'");
    return read_header(is, path);
}

AnyField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("snapshot: cannot open '" + path + "'");
    SnapshotInfo info = read_header(is, path);
    if (info.components == 2) return read_impl<2>(is, info);
    return read_impl<4>(is, info);
}

}  // namespace ndlimit
