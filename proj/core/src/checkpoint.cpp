#include "primnav/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace primnav {

namespace {

constexpr char kMagic[] = "PRIMNAV-DQN";
constexpr std::size_t kMagicLen = 11;
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
  public:
    std::vector<std::uint8_t> bytes;

    void raw(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        bytes.insert(bytes.end(), b, b + n);
    }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void f64_block(const std::vector<double>& v) {
        u64(v.size());
        raw(v.data(), v.size() * sizeof(double));
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(s.data(), s.size());
    }
};

class Reader {
  public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    void raw(void* p, std::size_t n) {
        if (pos_ + n > bytes_.size())
            throw std::runtime_error("checkpoint load error: truncated file");
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, sizeof v);
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof v);
        return v;
    }
    std::vector<double> f64_block() {
        const std::uint64_t n = u64();
        if (n > bytes_.size() / sizeof(double) || pos_ + n * sizeof(double) > bytes_.size())
            throw std::runtime_error("checkpoint load error: truncated file");
        std::vector<double> v(n);
        raw(v.data(), n * sizeof(double));
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        std::string s(n, '\0');
        raw(s.data(), n);
        return s;
    }
    bool at_end() const { return pos_ == bytes_.size(); }

  private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> save_checkpoint(const QNetwork& network, const AdamState* adam,
                                          const std::map<std::string, std::string>& metadata) {
    Writer w;
    w.raw(kMagic, kMagicLen);
    w.u32(kFormatVersion);

    const auto arch = QNetwork::architecture();
    w.u32(static_cast<std::uint32_t>(arch.size()));
    for (const auto& shape : arch) {
        w.u32(static_cast<std::uint32_t>(shape.size()));
        for (std::size_t d : shape) w.u32(static_cast<std::uint32_t>(d));
    }

    w.u32(static_cast<std::uint32_t>(metadata.size()));
    for (const auto& [key, value] : metadata) {
        w.str(key);
        w.str(value);
    }

    w.f64_block(flatten(network.params()));

    w.u32(adam ? 1 : 0);
    if (adam) {
        w.f64_block(adam->first_moment);
        w.f64_block(adam->second_moment);
        w.u64(adam->step_count);
        w.f64(adam->learning_rate);
        w.f64(adam->beta1);
        w.f64(adam->beta2);
        w.f64(adam->epsilon_hat);
    }
    return w.bytes;
}

Checkpoint load_checkpoint(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    char magic[kMagicLen];
    r.raw(magic, kMagicLen);
    if (std::memcmp(magic, kMagic, kMagicLen) != 0)
        throw std::runtime_error("checkpoint load error: bad magic string");
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion)
        throw std::runtime_error("checkpoint load error: unsupported format version " +
                                 std::to_string(version));

    const auto expected = QNetwork::architecture();
    const std::uint32_t tensor_count = r.u32();
    if (tensor_count != expected.size())
        throw std::runtime_error("checkpoint load error: architecture fingerprint mismatch "
                                 "(tensor count)");
    for (const auto& shape : expected) {
        const std::uint32_t ndim = r.u32();
        if (ndim != shape.size())
            throw std::runtime_error(
                "checkpoint load error: architecture fingerprint mismatch (rank)");
        for (std::size_t d : shape) {
            if (r.u32() != d)
                throw std::runtime_error(
                    "checkpoint load error: architecture fingerprint mismatch (shape)");
        }
    }

    Checkpoint ckpt;
    ckpt.network = QNetwork::build(0);
    const std::uint32_t meta_count = r.u32();
    for (std::uint32_t i = 0; i < meta_count; ++i) {
        std::string key = r.str();
        ckpt.metadata[key] = r.str();
    }

    const std::vector<double> flat = r.f64_block();
    if (flat.size() != ckpt.network.parameter_count())
        throw std::runtime_error("checkpoint load error: parameter blob size mismatch");
    unflatten(flat, ckpt.network.params());

    if (r.u32() != 0) {
        AdamState adam;
        adam.first_moment = r.f64_block();
        adam.second_moment = r.f64_block();
        adam.step_count = r.u64();
        adam.learning_rate = r.f64();
        adam.beta1 = r.f64();
        adam.beta2 = r.f64();
        adam.epsilon_hat = r.f64();
        if (adam.first_moment.size() != flat.size() || adam.second_moment.size() != flat.size())
            throw std::runtime_error("checkpoint load error: optimizer state size mismatch");
        ckpt.adam = std::move(adam);
    }
    return ckpt;
}

void write_checkpoint_file(const std::string& path, const QNetwork& network,
                           const AdamState* adam,
                           const std::map<std::string, std::string>& metadata) {
    const auto bytes = save_checkpoint(network, adam, metadata);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open checkpoint file for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

Checkpoint read_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return load_checkpoint(bytes);
}

}  // namespace primnav
