#include "idealred/variable.hpp"

#include <sstream>
#include <vector>

#include "idealred/errors.hpp"

namespace idealred {

VariableId VariableId::make(Family f, unsigned i, unsigned j, unsigned k) {
  if (i > 255 || j > 255 || k > 255) throw InvalidArgument("variable index above 255");
  return from_code((static_cast<std::uint32_t>(f) << 24) | (i << 16) | (j << 8) | k);
}

std::string VariableId::name() const {
  auto idx = [](std::string head, std::initializer_list<unsigned> parts) {
    for (unsigned p : parts) head += "_" + std::to_string(p);
    return head;
  };
  switch (family()) {
    case Family::X: return idx("X", {i(), j()});
    case Family::Lambda: return idx("L", {i(), j()});
    case Family::Xi: return idx("XI", {i(), j()});
    case Family::Y: return idx("Y", {i()});
    case Family::Z: return idx("Z", {i()});
    case Family::U:
      if (k() != 0) return idx("U", {i(), j(), k()});
      if (j() != 0) return idx("U", {i(), j()});
      return idx("U", {i()});
    case Family::Scalar:
      switch (static_cast<Scalar>(i())) {
        case Scalar::V: return "v";
        case Scalar::W: return "w";
        case Scalar::T: return "t";
        case Scalar::Delta: return "delta";
        case Scalar::Hom: return "z";
      }
  }
  return "?";
}

VariableId VariableId::parse(const std::string& name) {
  if (name == "v") return v();
  if (name == "w") return w();
  if (name == "t") return t();
  if (name == "delta") return delta();
  if (name == "z") return hom();
  std::vector<std::string> parts;
  std::stringstream ss(name);
  std::string item;
  while (std::getline(ss, item, '_')) parts.push_back(item);
  if (parts.size() < 2) throw InvalidArgument("unknown variable name '" + name + "'");
  std::vector<unsigned> nums;
  for (std::size_t a = 1; a < parts.size(); ++a) {
    try {
      std::size_t used = 0;
      unsigned long val = std::stoul(parts[a], &used);
      if (used != parts[a].size()) throw InvalidArgument("");
      nums.push_back(static_cast<unsigned>(val));
    } catch (const std::exception&) {
      throw InvalidArgument("bad index in variable name '" + name + "'");
    }
  }
  const std::string& h = parts[0];
  auto need = [&](std::size_t c) {
    if (nums.size() != c) throw InvalidArgument("wrong index count in variable name '" + name + "'");
  };
  if (h == "X") { need(2); return x(nums[0], nums[1]); }
  if (h == "L") { need(2); return lambda(nums[0], nums[1]); }
  if (h == "XI") { need(2); return xi(nums[0], nums[1]); }
  if (h == "Y") { need(1); return y(nums[0]); }
  if (h == "Z") { need(1); return z(nums[0]); }
  if (h == "U") {
    if (nums.empty() || nums.size() > 3) throw InvalidArgument("wrong index count in variable name '" + name + "'");
    nums.resize(3, 0);
    return u(nums[0], nums[1], nums[2]);
  }
  throw InvalidArgument("unknown variable family in '" + name + "'");
}

}  // namespace idealred
