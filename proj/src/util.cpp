#include "ptf/util.hpp"

#include <algorithm>

namespace ptf {

std::string u128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back((char)('0' + (int)(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string i128_to_string(__int128 v) {
  if (v < 0) return "-" + u128_to_string((unsigned __int128)(-v));
  return u128_to_string((unsigned __int128)v);
}

}  // namespace ptf
