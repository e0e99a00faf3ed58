#include "vof/lp/debug_dump.hpp"

#include <cmath>
#include <ostream>

namespace vof::lp {
namespace {

void put(std::ostream& os, double v) {
  if (v == kInf) {
    os << "inf";
  } else if (v == -kInf) {
    os << "-inf";
  } else {
    os << v;
  }
}

}  // namespace

void dump_lp(const LinearProgram& lp, std::ostream& os) {
  const std::size_t n = lp.num_vars();
  os << "lp vars=" << n << " eq=" << lp.num_eq() << " ub=" << lp.num_ub()
     << "\n";
  os << "min";
  for (std::size_t j = 0; j < n; ++j) {
    os << ' ';
    put(os, lp.objective()[j]);
  }
  os << "\n";
  for (std::size_t i = 0; i < lp.num_eq(); ++i) {
    os << "eq" << i << ':';
    for (std::size_t j = 0; j < n; ++j) {
      os << ' ';
      put(os, lp.eq_row(i)[j]);
    }
    os << " = ";
    put(os, lp.eq_rhs(i));
    os << "\n";
  }
  for (std::size_t k = 0; k < lp.num_ub(); ++k) {
    os << "ub" << k << ':';
    for (std::size_t j = 0; j < n; ++j) {
      os << ' ';
      put(os, lp.ub_row(k)[j]);
    }
    os << " <= ";
    put(os, lp.ub_rhs(k));
    os << "\n";
  }
  os << "bounds:";
  for (std::size_t j = 0; j < n; ++j) {
    os << " [";
    put(os, lp.lower()[j]);
    os << ',';
    put(os, lp.upper()[j]);
    os << ']';
  }
  os << "\n";
}

}  // namespace vof::lp
