#pragma once

// Plain-text ball files: one "x y z r w" line per ball, '#' starts a comment,
// blank lines are ignored.

#include <cstdint>
#include <istream>
#include <string>

#include "sfd/ball_set.hpp"

namespace sfd {

struct BallFile {
  BallSet balls;
  std::uint64_t digest = 0;  // FNV-1a of the raw bytes
};

BallFile parse_ball_file(std::istream& in);
BallFile read_ball_file(const std::string& path);

}  // namespace sfd
