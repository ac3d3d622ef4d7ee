#include "rtf/forest_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>

namespace rtf {

namespace {

constexpr std::array<std::byte, 4> kMagic{std::byte{'R'}, std::byte{'T'}, std::byte{'F'}, std::byte{'1'}};

template <class UInt>
void put(std::vector<std::byte>& out, UInt v) {
  for (std::size_t k = 0; k < sizeof(UInt); ++k) out.push_back(static_cast<std::byte>((v >> (8 * k)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  template <class UInt>
  UInt get(const char* what) {
    if (bytes_.size() - pos_ < sizeof(UInt)) {
      throw Error(ErrorCode::ParseError, std::string("truncated input while reading ") + what, pos_);
    }
    UInt v = 0;
    for (std::size_t k = 0; k < sizeof(UInt); ++k) v |= static_cast<UInt>(std::to_integer<UInt>(bytes_[pos_ + k]) << (8 * k));
    pos_ += sizeof(UInt);
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

template <std::floating_point Scalar>
std::vector<std::byte> serialize(const RadixForest<Scalar>& forest) {
  std::vector<std::byte> out;
  const std::uint32_t n = forest.leaves();
  const std::uint32_t m = forest.cells();
  out.reserve(12 + 8 * (std::size_t{n} + 1) + 4 * std::size_t{m} + 8 * std::size_t{n});
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put(out, n);
  put(out, m);
  for (const Scalar c : forest.cdf().bounds()) put(out, std::bit_cast<std::uint64_t>(static_cast<double>(c)));
  for (const NodeRef ref : forest.table()) put(out, ref.bits());
  for (const ForestNode& node : forest.nodes()) {
    put(out, node.child[0].bits());
    put(out, node.child[1].bits());
  }
  return out;
}

RadixForest<double> deserialize(std::span<const std::byte> bytes) {
  if (bytes.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::ParseError, "missing RTF1 magic", 0);
  }
  Reader in(bytes.subspan(kMagic.size()));
  const auto n = in.get<std::uint32_t>("n");
  const auto m = in.get<std::uint32_t>("m");
  if (n == 0 || n > kMaxLeaves || m == 0) throw Error(ErrorCode::ParseError, "invalid header sizes", 4);
  const std::uint64_t expected = 8 * (std::uint64_t{n} + 1) + 4 * std::uint64_t{m} + 8 * std::uint64_t{n};
  if (in.remaining() != expected) {
    throw Error(ErrorCode::ParseError,
                in.remaining() < expected ? "truncated input" : "trailing bytes after forest data",
                kMagic.size() + in.pos() + std::min<std::uint64_t>(in.remaining(), expected));
  }

  std::vector<double> bounds(std::size_t{n} + 1);
  for (double& c : bounds) c = std::bit_cast<double>(in.get<std::uint64_t>("cdf"));
  std::vector<NodeRef> table(m);
  for (NodeRef& ref : table) ref = NodeRef::from_bits(in.get<std::uint32_t>("table"));
  std::vector<ForestNode> nodes(n);
  for (ForestNode& node : nodes) {
    node.child[0] = NodeRef::from_bits(in.get<std::uint32_t>("node"));
    node.child[1] = NodeRef::from_bits(in.get<std::uint32_t>("node"));
  }

  try {
    return RadixForest<double>(Cdf<double>::from_bounds(std::move(bounds)), std::move(nodes), std::move(table));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid cdf: ") + e.what(), 12);
  }
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

void write_forest(const std::filesystem::path& path, const RadixForest<double>& forest) {
  write_file(path, serialize(forest));
}

RadixForest<double> read_forest(const std::filesystem::path& path) { return deserialize(read_file(path)); }

template std::vector<std::byte> serialize(const RadixForest<float>&);
template std::vector<std::byte> serialize(const RadixForest<double>&);

}  // namespace rtf
