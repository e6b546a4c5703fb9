#pragma once

#include <map>
#include <string>

#include "mcl/instance.hpp"

namespace mcl {

struct InstanceFile {
  Instance instance;
  std::map<std::string, std::string> meta;
};

// Parses the JSON instance format {n, C, u_star, meta?}. Symmetrizes and
// normalizes unless raw is set. Throws ParseError with line:column context.
InstanceFile parse_instance(const std::string& text, bool raw = false);
InstanceFile read_instance(const std::string& path, bool raw = false);

std::string format_instance(const Instance& inst,
                            const std::map<std::string, std::string>& meta = {});
void write_instance(const std::string& path, const Instance& inst,
                    const std::map<std::string, std::string>& meta = {});

}  // namespace mcl
