#include "catq/wig_io.hpp"

#include "catq/error.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

namespace catq {
namespace {

static_assert(std::endian::native == std::endian::little, "WIGv1 I/O assumes a little-endian host");

constexpr std::size_t kMagicLength = sizeof(kWigMagic) - 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
        throw io_error("truncated WIGv1 file: " + path);
    }
    return v;
}

}  // namespace

void write_wig(const std::string& path, const WignerGrid& w) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open " + path + " for writing");
    }
    out.write(kWigMagic, kMagicLength);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(w.q_axis.n));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(w.p_axis.n));
    put(out, w.q_axis.lo);
    put(out, w.q_axis.hi);
    put(out, w.p_axis.lo);
    put(out, w.p_axis.hi);
    for (int i = 0; i < w.q_axis.n; ++i) {
        for (int k = 0; k < w.p_axis.n; ++k) {
            put(out, w.values(i, k));
        }
    }
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

WignerGrid read_wig(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open " + path);
    }
    char magic[kMagicLength];
    if (!in.read(magic, kMagicLength) || std::memcmp(magic, kWigMagic, kMagicLength) != 0) {
        throw io_error("not a WIGv1 file: " + path);
    }
    WignerGrid w;
    w.q_axis.n = static_cast<int>(get<std::uint32_t>(in, path));
    w.p_axis.n = static_cast<int>(get<std::uint32_t>(in, path));
    w.q_axis.lo = get<double>(in, path);
    w.q_axis.hi = get<double>(in, path);
    w.p_axis.lo = get<double>(in, path);
    w.p_axis.hi = get<double>(in, path);
    if (w.q_axis.n < 1 || w.p_axis.n < 1 || static_cast<long long>(w.q_axis.n) * w.p_axis.n > (1LL << 28)) {
        throw io_error("implausible WIGv1 grid size in " + path);
    }
    w.values.resize(w.q_axis.n, w.p_axis.n);
    for (int i = 0; i < w.q_axis.n; ++i) {
        for (int k = 0; k < w.p_axis.n; ++k) {
            w.values(i, k) = get<double>(in, path);
        }
    }
    return w;
}

void write_wig_csv(const std::string& path, const WignerGrid& w) {
    std::ofstream out(path);
    if (!out) {
        throw io_error("cannot open " + path + " for writing");
    }
    out << "q,p,W\n" << std::setprecision(17);
    for (int i = 0; i < w.q_axis.n; ++i) {
        for (int k = 0; k < w.p_axis.n; ++k) {
            out << w.q_axis.at(i) << ',' << w.p_axis.at(k) << ',' << w.values(i, k) << '\n';
        }
    }
    if (!out) {
        throw io_error("write failed: " + path);
    }
}

}  // namespace catq
