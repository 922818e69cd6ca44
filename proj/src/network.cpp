#include "ssdnn/network.hpp"

#include <iomanip>
#include <sstream>

namespace ssdnn {

std::string to_string(const NetworkSpec& spec) {
  std::ostringstream out;
  out << spec.input_dim << " -> [";
  for (std::size_t i = 0; i < spec.hidden_widths.size(); ++i)
    out << (i ? "," : "") << spec.hidden_widths[i];
  out << "] -> " << spec.output_dim;
  return out.str();
}

namespace {

std::string shortest(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

NoPowerLawFit::NoPowerLawFit(double b1_hat, double b2_hat)
    : NumericalError("bias estimation: raw bias averages B1=" + shortest(b1_hat) +
                     " and B2=" + shortest(b2_hat) +
                     " do not share a nonzero sign; no power law fits"),
      b1_hat_(b1_hat),
      b2_hat_(b2_hat) {}

}  // namespace ssdnn
