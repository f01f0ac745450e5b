#include "advrc/figures.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "advrc/normkit.hpp"
#include "advrc/rng.hpp"

namespace advrc {

void write_constants_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "p_star,c1,c2,c2_lower,c2_upper\n";
  char buf[160];
  for (double q = 2.0; q <= 20.0 + 1e-9; q += 0.25) {
    const ConstantsReport c = constants(Exponent(q).dual());
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", q, c.c1, c.c2, c.c2_lower,
                  c.c2_upper);
    f << buf;
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_norm_comparison_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "p_star,identity_mt_2pstar,identity_m_pstar2,gaussian_mt_2pstar,gaussian_m_pstar2\n";
  Mat G(4, 4);
  rng::Engine eng(rng::derive(4242, "figure-gaussian"));
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) G(i, j) = eng.normal();
  const Mat I = Mat::Identity(4, 4);
  char buf[200];
  for (double q = 1.0; q <= 10.0 + 1e-9; q += 0.25) {
    const Exponent qs(q);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", q,
                  group_norm(I.transpose(), Exponent(2.0), qs), group_norm(I, qs, Exponent(2.0)),
                  group_norm(G.transpose(), Exponent(2.0), qs), group_norm(G, qs, Exponent(2.0)));
    f << buf;
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace advrc
