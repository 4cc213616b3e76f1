#include "sfd/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace sfd {
namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double parse_number(const std::string& token, int line) {
  double value = 0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("line " + std::to_string(line) + ": not a number: '" + token + "'", line);
  if (!std::isfinite(value))
    throw ParseError("line " + std::to_string(line) + ": non-finite value", line);
  return value;
}

}  // namespace

BallFile parse_ball_file(std::istream& in) {
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::istringstream lines(bytes);
  std::vector<BallD> balls;
  std::string text;
  int line = 0;
  while (std::getline(lines, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream fields(text);
    std::vector<std::string> tokens{std::istream_iterator<std::string>(fields),
                                    std::istream_iterator<std::string>()};
    if (tokens.empty()) continue;
    if (tokens.size() != 5)
      throw ParseError("line " + std::to_string(line) + ": expected 5 fields 'x y z r w', got " +
                           std::to_string(tokens.size()),
                       line);
    std::array<double, 5> v{};
    for (int k = 0; k < 5; ++k) v[k] = parse_number(tokens[k], line);
    if (!(v[3] > 0))
      throw ParseError("line " + std::to_string(line) + ": radius must be positive", line);
    balls.push_back(BallD{Vector3(v[0], v[1], v[2]), v[3], v[4]});
  }
  if (balls.empty()) throw ParseError("no balls in input", line);
  return BallFile{BallSet(std::move(balls)), fnv1a(bytes)};
}

BallFile read_ball_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return parse_ball_file(in);
}

}  // namespace sfd
