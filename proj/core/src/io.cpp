#include "ridgekit/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ridgekit/errors.hpp"

namespace ridgekit {

const char* library_version() { return RIDGEKIT_VERSION; }

namespace {

static_assert(std::endian::native == std::endian::little, "raw TFR I/O assumes a little-endian host");

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t p = 0;
        while (p < cell.size() && cell[p] == ' ') ++p;
        out.push_back(cell.substr(p));
    }
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot read " + path);
    return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

}  // namespace

Signal read_signal_csv(const std::string& path, std::optional<double> fs) {
    auto in = open_in(path);
    std::string line;
    std::vector<double> t, x;
    bool header = false;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (first) {
            first = false;
            double v;
            if (!parse_double(cells[0], v)) {
                header = true;
                continue;
            }
        }
        if (header) {
            if (cells.size() < 2) throw IoError(path + ":" + std::to_string(lineno) + ": expected t,value");
            double a, b;
            if (!parse_double(cells[0], a) || !parse_double(cells[1], b))
                throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
            t.push_back(a);
            x.push_back(b);
        } else {
            double v;
            if (!parse_double(cells[0], v)) throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
            x.push_back(v);
        }
    }
    if (x.empty()) throw IoError(path + ": no samples");
    Signal s;
    s.samples = std::move(x);
    if (header) {
        s.t0 = t.front();
        if (fs) {
            s.fs = *fs;
        } else {
            if (t.size() < 2) throw IoError(path + ": cannot infer the sampling rate from one sample");
            const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
            if (!(dt > 0)) throw IoError(path + ": time column must increase");
            s.fs = 1.0 / dt;
        }
    } else {
        if (!fs) throw InvalidParameter(path + ": headerless input needs a sampling rate");
        s.fs = *fs;
    }
    s.validate();
    return s;
}

void write_signal_csv(const std::string& path, const Signal& s) {
    auto out = open_out(path);
    out << std::setprecision(17) << "t,value\n";
    for (std::size_t n = 0; n < s.size(); ++n) out << s.time(n) << ',' << s.samples[n] << '\n';
}

void write_tfr_raw(const std::string& path, const Tfr& R) {
    auto out = open_out(path, std::ios::binary);
    const auto N = static_cast<std::uint32_t>(R.rows());
    const auto M = static_cast<std::uint32_t>(R.cols());
    const double dxi = R.dxi;
    out.write(reinterpret_cast<const char*>(&N), 4);
    out.write(reinterpret_cast<const char*>(&M), 4);
    out.write(reinterpret_cast<const char*>(&dxi), 8);
    // std::complex<double> is laid out as (re, im)
    out.write(reinterpret_cast<const char*>(R.values.data().data()),
              static_cast<std::streamsize>(R.values.size() * sizeof(cplx)));
    if (!out) throw IoError("short write to " + path);
}

Tfr read_tfr_raw(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    std::uint32_t N = 0, M = 0;
    double dxi = 0;
    in.read(reinterpret_cast<char*>(&N), 4);
    in.read(reinterpret_cast<char*>(&M), 4);
    in.read(reinterpret_cast<char*>(&dxi), 8);
    if (!in) throw IoError(path + ": truncated header");
    Tfr R;
    R.values = Grid<cplx>(N, M);
    R.dxi = dxi;
    in.read(reinterpret_cast<char*>(R.values.data().data()), static_cast<std::streamsize>(R.values.size() * sizeof(cplx)));
    if (!in) throw IoError(path + ": truncated data");
    return R;
}

void write_tfr_magnitude_csv(const std::string& path, const Tfr& R) {
    auto out = open_out(path);
    out << std::setprecision(10) << "time_s";
    for (std::size_t c = 0; c < R.cols(); ++c) out << ',' << R.frequency_of_bin(static_cast<int>(c + 1));
    out << '\n';
    for (std::size_t n = 0; n < R.rows(); ++n) {
        out << R.t0 + static_cast<double>(n) * R.dt;
        for (std::size_t c = 0; c < R.cols(); ++c) out << ',' << std::abs(R.values(n, c));
        out << '\n';
    }
}

void write_ridges_csv(const std::string& path, const RidgeSet& c) {
    auto out = open_out(path);
    out << std::setprecision(12) << "time_s";
    for (std::size_t k = 1; k <= c.harmonics(); ++k) out << ",f" << k << "_hz";
    out << '\n';
    if (c.rows.empty()) return;
    const Ridge& f = c.fundamental();
    for (std::size_t l = 0; l < f.size(); ++l) {
        out << f.t0 + static_cast<double>(l) * f.dt;
        for (const Ridge& r : c.rows) out << ',' << r.hz(l);
        out << '\n';
    }
}

RidgeSet read_ridges_csv(const std::string& path, double dxi) {
    if (!(dxi > 0)) throw InvalidParameter("read_ridges_csv needs a positive frequency step");
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    const auto head = split(line);
    if (head.size() < 2 || head[0] != "time_s") throw IoError(path + ": expected header time_s,f1_hz,...");
    const std::size_t K = head.size() - 1;
    RidgeSet out;
    out.rows.resize(K);
    std::vector<double> times;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != K + 1) throw IoError(path + ":" + std::to_string(lineno) + ": wrong column count");
        double t;
        if (!parse_double(cells[0], t)) throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
        times.push_back(t);
        for (std::size_t k = 0; k < K; ++k) {
            double hz;
            if (!parse_double(cells[k + 1], hz)) throw IoError(path + ":" + std::to_string(lineno) + ": not a number");
            out.rows[k].bins.push_back(std::max(1, static_cast<int>(std::lround(hz / dxi))));
        }
    }
    if (times.empty()) throw IoError(path + ": no rows");
    const double dt = times.size() > 1 ? (times.back() - times.front()) / static_cast<double>(times.size() - 1) : 1.0;
    for (Ridge& r : out.rows) {
        r.dt = dt;
        r.dxi = dxi;
        r.t0 = times.front();
    }
    return out;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a_file(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h = fnv1a(buf, static_cast<std::size_t>(in.gcount()), h);
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

}  // namespace ridgekit
