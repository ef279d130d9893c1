#include "doflab/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "doflab/errors.hpp"
#include "doflab/schemes.hpp"

namespace doflab {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string to_string(FormulaSession s) {
  switch (s) {
    case FormulaSession::downlink_zf:
      return "downlink-zf";
    case FormulaSession::uplink_zf:
      return "uplink-zf";
    case FormulaSession::avg_lower:
      return "avg-lower";
    case FormulaSession::gamma_d:
      return "gamma-d";
    case FormulaSession::wyner:
      return "wyner";
  }
  return "?";
}

FormulaSession parse_formula_session(const std::string& name) {
  for (auto s : {FormulaSession::downlink_zf, FormulaSession::uplink_zf, FormulaSession::avg_lower,
                 FormulaSession::gamma_d, FormulaSession::wyner}) {
    if (to_string(s) == name) return s;
  }
  throw DomainError("unknown formula session '" + name +
                    "' (expected downlink-zf, uplink-zf, avg-lower, gamma-d or wyner)");
}

PuDofValue evaluate_formula(FormulaSession session, int L, int Nc) {
  switch (session) {
    case FormulaSession::downlink_zf:
      return tau_d_zf(L, Nc);
    case FormulaSession::uplink_zf:
      return tau_u_zf(L, Nc);
    case FormulaSession::avg_lower:
      return tau_avg_lower(L, Nc);
    case FormulaSession::gamma_d:
      return gamma_d(L, Nc);
    case FormulaSession::wyner:
      if (L != 1) throw DomainError("wyner requires L = 1");
      return tau_wyner(Nc);
  }
  throw DomainError("unknown formula session");
}

void validate_sweep(const SweepSpec& spec) {
  if (spec.from > spec.to) throw DomainError("sweep range is empty");
  if (spec.sessions.empty()) throw DomainError("sweep needs at least one session");
  if (spec.vary == SweepParameter::budget) {
    if (spec.from < 1) throw DomainError("Nc sweep must start at 1 or above");
    if (spec.fixed_connectivity < 0) throw DomainError("fixed L must be >= 0");
  } else {
    if (spec.from < 0) throw DomainError("L sweep must start at 0 or above");
    if (spec.fixed_budget < 1) throw DomainError("fixed Nc must be >= 1");
  }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  std::vector<SweepRow> rows;
  for (int v = spec.from; v <= spec.to; ++v) {
    const int L = spec.vary == SweepParameter::connectivity ? v : spec.fixed_connectivity;
    const int Nc = spec.vary == SweepParameter::budget ? v : spec.fixed_budget;
    for (FormulaSession s : spec.sessions) {
      SweepRow row{L, Nc, s, true, Rational(0)};
      try {
        row.value = evaluate_formula(s, L, Nc);
      } catch (const DomainError&) {
        row.defined = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "L,Nc,session,value,decimal\n";
  for (const auto& r : rows) {
    os << r.connectivity << ',' << r.budget << ',' << to_string(r.session) << ',';
    if (r.defined) {
      os << r.value.to_string() << ',' << fixed4(r.value.to_double());
    } else {
      os << "NA,NA";
    }
    os << '\n';
  }
}

void write_sweep_svg(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  const double width = 640, height = 400, left = 60, right = 150, top = 20, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const int span = std::max(1, spec.to - spec.from);
  auto x_of = [&](int v) { return left + plot_w * (v - spec.from) / span; };
  auto y_of = [&](double d) { return top + plot_h * (1.0 - d); };
  const char* axis = spec.vary == SweepParameter::budget ? "Nc" : "L";

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
     << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
     << top + plot_h << "\" stroke=\"black\"/>\n";
  for (int v = spec.from; v <= spec.to; ++v) {
    os << "<text x=\"" << coord(x_of(v)) << "\" y=\"" << top + plot_h + 16
       << "\" text-anchor=\"middle\">" << v << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double d = t / 4.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << coord(y_of(d) + 4)
       << "\" text-anchor=\"end\">" << fixed4(d).substr(0, 4) << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\">" << axis << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + plot_h / 2 << "\" transform=\"rotate(-90 16 "
     << top + plot_h / 2 << ")\" text-anchor=\"middle\">puDoF</text>\n";

  for (std::size_t n = 0; n < spec.sessions.size(); ++n) {
    const FormulaSession s = spec.sessions[n];
    const char* color = kPalette[n % std::size(kPalette)];
    std::string points;
    for (const auto& r : rows) {
      if (r.session != s || !r.defined) continue;
      const int v = spec.vary == SweepParameter::budget ? r.budget : r.connectivity;
      if (!points.empty()) points += ' ';
      points += coord(x_of(v)) + ',' + coord(y_of(r.value.to_double()));
    }
    if (!points.empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
         << points << "\"/>\n";
    }
    const double ly = top + 16.0 * (n + 1);
    os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << left + plot_w + 32 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + plot_w + 38 << "\" y=\"" << ly << "\">" << to_string(s)
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace doflab
