#pragma once

#include <cstdint>
#include <string>

#include "deadcore/config.hpp"
#include "deadcore/grid.hpp"

namespace deadcore::cli {

struct Context {
  Config cfg;
  std::string out = ".";
  std::uint64_t seed = 20240611;
  Exec exec = Exec::sequential;
};

int cmd_verify_exact(const Context& ctx);
int cmd_solve_radial(const Context& ctx);
int cmd_solve_grid(const Context& ctx);
int cmd_solve_henon(const Context& ctx);
int cmd_fit(const Context& ctx);
int cmd_liouville(const Context& ctx);
int cmd_blowup(const Context& ctx);

}  // namespace deadcore::cli
