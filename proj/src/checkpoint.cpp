#include "aopu/checkpoint.hpp"

#include "aopu/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace aopu {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'A', 'O', 'P', 'U', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    std::string_view take(std::size_t n) {
        need(n);
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool done() const noexcept { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw DataError("checkpoint: truncated data");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string_view model_kind_name(ModelKind kind) noexcept { return kind == ModelKind::Rvflnn ? "rvflnn" : "aopu"; }

ModelKind parse_model_kind(std::string_view name) {
    if (name == "aopu") return ModelKind::Aopu;
    if (name == "rvflnn") return ModelKind::Rvflnn;
    throw InvalidInput("unknown model kind '" + std::string(name) + "'");
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
    std::string out(kMagic, sizeof kMagic);
    put(out, kVersion);
    put(out, static_cast<std::uint32_t>(ckpt.kind));
    put(out, static_cast<std::uint64_t>(ckpt.w_tilde.rows()));
    put(out, static_cast<std::uint64_t>(ckpt.w_tilde.cols()));
    for (double v : ckpt.w_tilde.data()) put(out, v);
    put(out, static_cast<std::uint64_t>(ckpt.config_echo.size()));
    out += ckpt.config_echo;
    return out;
}

Checkpoint decode_checkpoint(std::string_view bytes) {
    Reader in(bytes);
    if (in.take(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) {
        throw DataError("checkpoint: bad magic");
    }
    if (const auto version = in.get<std::uint32_t>(); version != kVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    const auto kind = in.get<std::uint32_t>();
    if (kind != static_cast<std::uint32_t>(ModelKind::Aopu) && kind != static_cast<std::uint32_t>(ModelKind::Rvflnn)) {
        throw DataError("checkpoint: unknown model kind " + std::to_string(kind));
    }
    const auto rows = in.get<std::uint64_t>();
    const auto cols = in.get<std::uint64_t>();
    std::vector<double> data(rows * cols);
    for (double& v : data) v = in.get<double>();
    const auto echo_len = in.get<std::uint64_t>();
    std::string echo(in.take(echo_len));
    if (!in.done()) throw DataError("checkpoint: trailing bytes");
    return {static_cast<ModelKind>(kind), Matrix(rows, cols, std::move(data)), std::move(echo)};
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    const std::string bytes = encode_checkpoint(ckpt);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace aopu
