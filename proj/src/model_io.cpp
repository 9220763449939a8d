#include "crfner/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <fstream>
#include <sstream>

namespace crfner {

namespace {

using Kind = ModelLoadError::Kind;

class Writer {
 public:
  template <typename T>
  void uint(T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u8(std::uint8_t v) { uint(v); }
  void u32(std::uint32_t v) { uint(v); }
  void u64(std::uint64_t v) { uint(v); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void boolean(bool v) { u8(v ? 1 : 0); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.append(s);
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (double v : m.data()) f64(v);
  }
  void raw(std::string_view s) { out_.append(s); }
  std::string& bytes() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  template <typename T>
  T uint() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }
  std::uint8_t u8() { return uint<std::uint8_t>(); }
  std::uint32_t u32() { return uint<std::uint32_t>(); }
  std::uint64_t u64() { return uint<std::uint64_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  bool boolean() {
    const auto v = u8();
    if (v > 1) throw ModelLoadError(Kind::malformed, "model file: bad boolean");
    return v == 1;
  }
  std::string str() {
    const auto n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  Matrix matrix() {
    const auto rows = u64(), cols = u64();
    if (cols != 0 && rows > remaining() / 8 / cols) throw ModelLoadError(Kind::malformed, "model file: bad matrix shape");
    Matrix m(rows, cols);
    for (double& v : m.data()) v = f64();
    return m;
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > remaining()) throw ModelLoadError(Kind::malformed, "model file: payload ends early");
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

void write_config(Writer& w, const FeatureConfig& c) {
  w.i32(c.context_window);
  w.boolean(c.use_affix);
  w.i32(c.affix_min);
  w.i32(c.affix_max);
  w.boolean(c.affix_nnp_only);
  w.boolean(c.use_pos);
  w.boolean(c.use_chunk);
  w.boolean(c.use_boundary);
  w.u8(static_cast<std::uint8_t>(c.last_word));
  w.boolean(c.use_digit);
  w.boolean(c.use_position);
  w.boolean(c.use_verb);
  w.u32(static_cast<std::uint32_t>(c.verb_tags.size()));
  for (const auto& t : c.verb_tags) w.str(t);
  w.boolean(c.use_capital);
  w.u32(static_cast<std::uint32_t>(c.gazetteers.size()));
  for (const auto& g : c.gazetteers) w.str(g);
  w.u8(static_cast<std::uint8_t>(c.gazetteer_match));
}

FeatureConfig read_config(Reader& r) {
  FeatureConfig c;
  c.context_window = r.i32();
  c.use_affix = r.boolean();
  c.affix_min = r.i32();
  c.affix_max = r.i32();
  c.affix_nnp_only = r.boolean();
  c.use_pos = r.boolean();
  c.use_chunk = r.boolean();
  c.use_boundary = r.boolean();
  const auto last = r.u8();
  if (last > 1) throw ModelLoadError(Kind::malformed, "model file: bad last-word mode");
  c.last_word = static_cast<LastWord>(last);
  c.use_digit = r.boolean();
  c.use_position = r.boolean();
  c.use_verb = r.boolean();
  c.verb_tags.clear();
  for (auto n = r.u32(); n > 0; --n) c.verb_tags.insert(r.str());
  c.use_capital = r.boolean();
  for (auto n = r.u32(); n > 0; --n) c.gazetteers.push_back(r.str());
  const auto match = r.u8();
  if (match > 1) throw ModelLoadError(Kind::malformed, "model file: bad gazetteer match mode");
  c.gazetteer_match = static_cast<GazetteerMatch>(match);
  return c;
}

constexpr std::size_t kHeaderSize = 7 + 4 + 8;

}  // namespace

std::string serialize_model(const Model& model) {
  model.check();
  Writer body;
  body.u32(static_cast<std::uint32_t>(model.labels.size()));
  for (const auto& l : model.labels) body.str(l);
  body.u32(static_cast<std::uint32_t>(model.features.size()));
  for (const auto& f : model.features.names()) body.str(f);
  body.matrix(model.unigram);
  body.matrix(model.transition);
  body.f64(model.l2_sigma);

  const TrainingMetadata& meta = model.metadata;
  body.u32(meta.iterations);
  body.f64(meta.final_objective);
  body.u64(meta.config_hash);
  body.u8(static_cast<std::uint8_t>(meta.stop_reason));
  body.u64(meta.objective_trace.size());
  for (double v : meta.objective_trace) body.f64(v);

  write_config(body, model.config);

  body.u32(static_cast<std::uint32_t>(model.gazetteers.size()));
  for (const Gazetteer& g : model.gazetteers) {
    body.str(g.name());
    body.boolean(g.fold_case());
    const auto entries = g.entries();
    body.u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& e : entries) {
      body.u32(static_cast<std::uint32_t>(e.size()));
      for (const auto& tok : e) body.str(tok);
    }
  }

  Writer out;
  out.raw(kModelMagic);
  out.u32(kModelFormatVersion);
  out.u64(body.bytes().size());
  out.raw(body.bytes());
  out.u32(crc32_of(out.bytes()));
  return std::move(out.bytes());
}

Model deserialize_model(std::string_view bytes) {
  if (bytes.size() < kModelMagic.size() || bytes.substr(0, kModelMagic.size()) != kModelMagic)
    throw ModelLoadError(Kind::bad_magic, "not a model file: bad magic");
  if (bytes.size() < kHeaderSize) throw ModelLoadError(Kind::truncated, "model file is truncated (header)");

  Reader header(bytes.substr(kModelMagic.size(), kHeaderSize - kModelMagic.size()));
  const auto version = header.u32();
  if (version != kModelFormatVersion)
    throw ModelLoadError(Kind::unsupported_version, "unsupported model format version " + std::to_string(version) +
                                                        " (this build reads version " +
                                                        std::to_string(kModelFormatVersion) + ")");
  const auto payload_size = header.u64();
  if (payload_size > bytes.size() || bytes.size() - kHeaderSize < payload_size + 4)
    throw ModelLoadError(Kind::truncated, "model file is truncated");
  const std::size_t checked = kHeaderSize + payload_size;
  if (bytes.size() != checked + 4) throw ModelLoadError(Kind::malformed, "model file has trailing bytes");
  Reader trailer(bytes.substr(checked));
  if (trailer.u32() != crc32_of(bytes.substr(0, checked)))
    throw ModelLoadError(Kind::checksum_mismatch, "model file checksum mismatch");

  Reader r(bytes.substr(kHeaderSize, payload_size));
  Model model;
  for (auto n = r.u32(); n > 0; --n) model.labels.push_back(r.str());
  for (auto n = r.u32(); n > 0; --n) {
    const std::string name = r.str();
    if (model.features.find(name)) throw ModelLoadError(Kind::malformed, "model file: duplicate feature '" + name + "'");
    model.features.intern(name);
  }
  model.unigram = r.matrix();
  model.transition = r.matrix();
  model.l2_sigma = r.f64();

  TrainingMetadata& meta = model.metadata;
  meta.iterations = r.u32();
  meta.final_objective = r.f64();
  meta.config_hash = r.u64();
  const auto reason = r.u8();
  if (reason > static_cast<std::uint8_t>(StopReason::gradient_zero))
    throw ModelLoadError(Kind::malformed, "model file: bad stop reason");
  meta.stop_reason = static_cast<StopReason>(reason);
  const auto trace = r.u64();
  if (trace > r.remaining() / 8) throw ModelLoadError(Kind::malformed, "model file: bad trace length");
  for (auto n = trace; n > 0; --n) meta.objective_trace.push_back(r.f64());

  model.config = read_config(r);

  for (auto n = r.u32(); n > 0; --n) {
    std::string name = r.str();
    const bool fold = r.boolean();
    Gazetteer g(std::move(name), fold);
    for (auto e = r.u32(); e > 0; --e) {
      std::vector<std::string> tokens;
      for (auto k = r.u32(); k > 0; --k) tokens.push_back(r.str());
      try {
        g.add(tokens);
      } catch (const UsageError& err) {
        throw ModelLoadError(Kind::malformed, std::string("model file: ") + err.what());
      }
    }
    model.gazetteers.push_back(std::move(g));
  }
  if (!r.done()) throw ModelLoadError(Kind::malformed, "model file: unexpected bytes after payload");

  try {
    model.check();
  } catch (const UsageError& err) {
    throw ModelLoadError(Kind::malformed, std::string("model file: ") + err.what());
  }
  return model;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelLoadError(Kind::io, "cannot open model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace crfner
