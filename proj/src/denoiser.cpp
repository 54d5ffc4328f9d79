#include "pdg/denoiser.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace pdg {

namespace {

Tensor random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    Tensor t(rows, cols);
    const double s = 1.0 / std::sqrt(static_cast<double>(rows));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = s * rng.normal();
    return t;
}

} // namespace

DenoiserParams DenoiserParams::init(int d, Rng& rng) {
    if (d < 4 || d % 2 != 0) throw ConfigError("DenoiserParams: d must be even and >= 4");
    DenoiserParams p;
    p.d = d;
    const auto du = static_cast<std::size_t>(d);
    p.enc_co_w = random_matrix(3, du, rng);
    p.enc_co_b = Tensor(1, du);
    p.enc_ta_w = random_matrix(3, du, rng);
    p.enc_ta_b = Tensor(1, du);
    p.step_w1 = random_matrix(du, du, rng);
    p.step_b1 = Tensor(1, du);
    p.step_w2 = random_matrix(du, du, rng);
    p.step_b2 = Tensor(1, du);
    p.attn_wq = random_matrix(du, du, rng);
    p.attn_wk = random_matrix(du, du, rng);
    p.attn_wv = random_matrix(du, du, rng);
    p.head_w1 = random_matrix(du, du, rng);
    p.head_b1 = Tensor(1, du);
    p.head_w2 = Tensor(du, 1); // zero: untrained model outputs zero noise
    p.head_b2 = Tensor(1, 1);
    return p;
}

std::vector<std::pair<std::string, Tensor*>> DenoiserParams::entries() {
    return {
        {"enc_co_w", &enc_co_w}, {"enc_co_b", &enc_co_b}, {"enc_ta_w", &enc_ta_w},
        {"enc_ta_b", &enc_ta_b}, {"step_w1", &step_w1},   {"step_b1", &step_b1},
        {"step_w2", &step_w2},   {"step_b2", &step_b2},   {"attn_wq", &attn_wq},
        {"attn_wk", &attn_wk},   {"attn_wv", &attn_wv},   {"head_w1", &head_w1},
        {"head_b1", &head_b1},   {"head_w2", &head_w2},   {"head_b2", &head_b2},
    };
}

std::vector<std::pair<std::string, const Tensor*>> DenoiserParams::entries() const {
    std::vector<std::pair<std::string, const Tensor*>> out;
    for (auto& [name, t] : const_cast<DenoiserParams*>(this)->entries()) out.emplace_back(name, t);
    return out;
}

Tensor step_embedding(double t, int d) {
    if (d % 2 != 0) throw ConfigError("step_embedding: d must be even");
    if (d < 4) throw ConfigError("step_embedding: d must be >= 4");
    if (t < 0.0) throw ConfigError("step_embedding: t must be >= 0");
    const int w = d / 2;
    Tensor out(1, static_cast<std::size_t>(d));
    for (int i = 0; i < w; ++i) {
        const double freq = std::pow(10.0, 4.0 * i / (w - 1));
        out(0, static_cast<std::size_t>(i)) = std::sin(freq * t);
        out(0, static_cast<std::size_t>(w + i)) = std::cos(freq * t);
    }
    return out;
}

ParamVars ParamVars::lift(Tape& tape, const DenoiserParams& params) {
    ParamVars pv;
    for (const auto& [name, tensor] : params.entries()) pv.vars.emplace_back(name, tape.leaf(*tensor));
    return pv;
}

Var ParamVars::at(const std::string& name) const {
    for (const auto& [n, v] : vars)
        if (n == name) return v;
    throw Error("ParamVars: unknown parameter " + name);
}

Var step_vector(Tape& tape, const ParamVars& pv, double t, int d) {
    const Var emb = tape.leaf(step_embedding(t, d));
    const Var a1 = tape.add_rowvec(tape.matmul(emb, pv.at("step_w1")), pv.at("step_b1"));
    const Var h1 = tape.silu(a1);
    return tape.add_rowvec(tape.matmul(h1, pv.at("step_w2")), pv.at("step_b2"));
}

Var encode(Tape& tape, const ParamVars& pv, PointRole role, const std::vector<GeoPoint>& points,
           const std::vector<double>& values, Var p_t) {
    if (points.size() != values.size()) throw DimensionError("encode: point/value length mismatch");
    Tensor in(points.size(), 3);
    for (std::size_t i = 0; i < points.size(); ++i) {
        in(i, 0) = points[i].lon;
        in(i, 1) = points[i].lat;
        in(i, 2) = values[i];
    }
    const char* w = role == PointRole::condition ? "enc_co_w" : "enc_ta_w";
    const char* b = role == PointRole::condition ? "enc_co_b" : "enc_ta_b";
    const Var proj = tape.add_rowvec(tape.matmul(tape.leaf(std::move(in)), pv.at(w)), pv.at(b));
    return tape.add_rowvec(proj, p_t);
}

Var predict_noise(Tape& tape, const ParamVars& pv, Var h_ta, Var h_co, const ReceptiveMask& mask,
                  int d) {
    if (tape.value(h_ta).rows() != mask.n_ta || tape.value(h_co).rows() != mask.n_co)
        throw DimensionError("predict_noise: mask shape does not match inputs");
    const Var q = tape.matmul(h_ta, pv.at("attn_wq"));
    const Var k = tape.matmul(h_co, pv.at("attn_wk"));
    const Var v = tape.matmul(h_co, pv.at("attn_wv"));
    const Var scores = tape.scale(tape.matmul_nt(q, k), 1.0 / std::sqrt(static_cast<double>(d)));
    const Var attn = tape.softmax_masked(scores, mask);
    const Var ctx = tape.matmul(attn, v);
    const Var merged = tape.add(h_ta, ctx);
    const Var z1 = tape.silu(tape.add_rowvec(tape.matmul(merged, pv.at("head_w1")), pv.at("head_b1")));
    return tape.add_rowvec(tape.matmul(z1, pv.at("head_w2")), pv.at("head_b2"));
}

Var denoiser_forward(Tape& tape, const ParamVars& pv, const DenoiserParams& shape,
                     const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                     const std::vector<GeoPoint>& m_ta, const std::vector<double>& x_ta_noised,
                     int t, const ReceptiveMask& mask) {
    const Var p_t = step_vector(tape, pv, static_cast<double>(t), shape.d);
    const Var h_co = encode(tape, pv, PointRole::condition, m_co, x_co, p_t);
    const Var h_ta = encode(tape, pv, PointRole::target, m_ta, x_ta_noised, p_t);
    return predict_noise(tape, pv, h_ta, h_co, mask, shape.d);
}

// --- checkpoint io ----------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'P', 'D', 'G', '1'};

void write_u32le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64le(std::ostream& out, const double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], 8);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>((bits >> (8 * k)) & 0xff);
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

void read_f64le(std::istream& in, double* data, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        std::memcpy(&data[i], &bits, 8);
    }
}

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    nlohmann::json manifest;
    manifest["d"] = ckpt.params.d;
    manifest["D"] = ckpt.params.d; // attention dimension equals d
    manifest["schedule"] = {{"T", ckpt.T}, {"beta_start", ckpt.beta_start},
                            {"beta_end", ckpt.beta_end}};
    manifest["mask"] = {{"k_min", ckpt.k_min}, {"k_max", ckpt.k_max}};
    manifest["norm"] = {{"mean", ckpt.norm.mean}, {"std", ckpt.norm.std}};
    manifest["full_attention"] = ckpt.full_attention;
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto& [name, t] : ckpt.params.entries())
        tensors.push_back({{"name", name}, {"rows", t->rows()}, {"cols", t->cols()}});
    manifest["tensors"] = tensors;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("save_checkpoint: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    const std::string m = manifest.dump();
    write_u32le(out, static_cast<std::uint32_t>(m.size()));
    out.write(m.data(), static_cast<std::streamsize>(m.size()));
    for (const auto& [name, t] : ckpt.params.entries())
        write_f64le(out, t->data().data(), t->numel());
    if (!out) throw DataError("save_checkpoint: write failure on " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("load_checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("load_checkpoint: " + path + " is not a PDG1 checkpoint");
    const std::uint32_t mlen = read_u32le(in);
    std::string mtext(mlen, '\0');
    in.read(mtext.data(), mlen);
    if (!in) throw DataError("load_checkpoint: truncated manifest in " + path);

    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(mtext);
    } catch (const std::exception& e) {
        throw DataError(std::string("load_checkpoint: bad manifest: ") + e.what());
    }

    Checkpoint ckpt;
    const int d = manifest.at("d").get<int>();
    Rng dummy(1);
    ckpt.params = DenoiserParams::init(d, dummy);
    ckpt.T = manifest.at("schedule").at("T").get<int>();
    ckpt.beta_start = manifest.at("schedule").at("beta_start").get<double>();
    ckpt.beta_end = manifest.at("schedule").at("beta_end").get<double>();
    ckpt.k_min = manifest.at("mask").at("k_min").get<int>();
    ckpt.k_max = manifest.at("mask").at("k_max").get<int>();
    ckpt.norm.mean = manifest.at("norm").at("mean").get<double>();
    ckpt.norm.std = manifest.at("norm").at("std").get<double>();
    ckpt.full_attention = manifest.value("full_attention", false);

    auto entries = ckpt.params.entries();
    const auto& tensors = manifest.at("tensors");
    if (tensors.size() != entries.size())
        throw DataError("load_checkpoint: manifest lists " + std::to_string(tensors.size()) +
                        " tensors, expected " + std::to_string(entries.size()));
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& spec = tensors[i];
        if (spec.at("name").get<std::string>() != entries[i].first)
            throw DataError("load_checkpoint: tensor order mismatch at " + entries[i].first);
        const auto rows = spec.at("rows").get<std::size_t>();
        const auto cols = spec.at("cols").get<std::size_t>();
        *entries[i].second = Tensor(rows, cols);
        read_f64le(in, entries[i].second->data().data(), entries[i].second->numel());
    }
    if (!in) throw DataError("load_checkpoint: truncated tensor data in " + path);
    return ckpt;
}

} // namespace pdg
