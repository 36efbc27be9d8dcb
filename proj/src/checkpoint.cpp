/*
   Copyright 2026 The LayoutGraph Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

#include "layoutgraph/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "layoutgraph/error.hpp"

namespace lg {

namespace {

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(const std::string& s) : s_(s) {}

  template <typename T>
  T le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  std::string bytes(std::size_t n) {
    need(n);
    std::string out = s_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  bool done() const { return pos_ == s_.size(); }

 private:
  void need(std::size_t n) const {
    if (n > s_.size() - pos_) throw ParseError("checkpoint: truncated container");
  }
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

const Tensor& Checkpoint::at(const std::string& name) const {
  for (const auto& [n, t] : entries)
    if (n == name) return t;
  throw NotFoundError("checkpoint: no entry '" + name + "'");
}

bool Checkpoint::contains(const std::string& name) const {
  for (const auto& e : entries)
    if (e.first == name) return true;
  return false;
}

std::string checkpoint_to_bytes(const Checkpoint& ck) {
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ck.entries.size()));
  const std::string meta = ck.meta.dump();
  put_le<std::uint64_t>(out, meta.size());
  out += meta;
  for (const auto& [name, t] : ck.entries) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_le<std::uint32_t>(out, 2);
    put_le<std::uint64_t>(out, t.rows());
    put_le<std::uint64_t>(out, t.cols());
  }
  for (const auto& e : ck.entries)
    for (double v : e.second.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Checkpoint checkpoint_from_bytes(const std::string& bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof(kCheckpointMagic)) != std::string(kCheckpointMagic, sizeof(kCheckpointMagic)))
    throw ParseError("checkpoint: bad magic");
  const auto version = r.le<std::uint32_t>();
  if (version != kCheckpointVersion) throw ParseError("checkpoint: unsupported version " + std::to_string(version));
  const auto count = r.le<std::uint32_t>();
  Checkpoint ck;
  try {
    ck.meta = nlohmann::json::parse(r.bytes(r.le<std::uint64_t>()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint: bad metadata: ") + e.what());
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> table;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.bytes(r.le<std::uint32_t>());
    const auto ndim = r.le<std::uint32_t>();
    if (ndim != 2) throw ParseError("checkpoint: entry '" + name + "' is not 2-D");
    const auto rows = r.le<std::uint64_t>();
    const auto cols = r.le<std::uint64_t>();
    if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) throw ParseError("checkpoint: entry too large");
    table.push_back({std::move(name), {rows, cols}});
  }
  for (auto& [name, shape] : table) {
    std::vector<double> data(shape.first * shape.second);
    for (double& v : data) v = std::bit_cast<double>(r.le<std::uint64_t>());
    ck.entries.emplace_back(name, Tensor(shape.first, shape.second, std::move(data)));
  }
  if (!r.done()) throw ParseError("checkpoint: trailing bytes");
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  const std::string bytes = checkpoint_to_bytes(ck);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return checkpoint_from_bytes(ss.str());
}

Checkpoint checkpoint_from_params(const ParamStore& store, nlohmann::json meta) {
  Checkpoint ck;
  ck.meta = std::move(meta);
  for (ParamId i = 0; i < store.size(); ++i) ck.entries.emplace_back(store.name(i), store.value(i));
  return ck;
}

void load_params(ParamStore& store, const Checkpoint& ck) {
  for (ParamId i = 0; i < store.size(); ++i) {
    const Tensor& t = ck.at(store.name(i));
    if (!t.same_shape(store.value(i)))
      throw ShapeError("checkpoint: shape mismatch for '" + store.name(i) + "'");
    store.value(i) = t;
  }
}

}  // namespace lg
