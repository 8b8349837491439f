#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "blowuplab/common.hpp"
#include "blowuplab/functionals.hpp"
#include "blowuplab/harness.hpp"
#include "blowuplab/iteration.hpp"

namespace blowuplab {

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path);
  if (!out) throw contract_error("cannot open output file: " + path);
  out << content;
  if (!out) throw contract_error("failed writing output file: " + path);
}

// Sidecar listing what each column means plus one theory-overlay line; lands
// next to the CSV as <path>.meta.
inline void write_meta(const std::string& csv_path,
                       const std::vector<std::string>& column_notes,
                       const std::string& theory_line) {
  std::string text;
  for (const std::string& note : column_notes) text += "column: " + note + "\n";
  if (!theory_line.empty()) text += "theory: " + theory_line + "\n";
  write_text_file(csv_path + ".meta", text);
}

// Sidecar with the fully resolved configuration; lands as <path>.manifest.
inline void write_manifest(const std::string& csv_path,
                           const std::string& rendered_config) {
  write_text_file(csv_path + ".manifest", rendered_config);
}

inline void write_trace_csv(const std::string& path,
                            const FunctionalTrace& tr) {
  std::string text = "t,F0,F0_rate,F1,Ip,m,umax\n";
  for (const TraceRow& r : tr.rows)
    text += fmt_g(r.t) + "," + fmt_g(r.F0) + "," + fmt_g(r.F0_rate) + "," +
            fmt_g(r.F1) + "," + fmt_g(r.Ip) + "," + fmt_g(r.m) + "," +
            fmt_g(r.umax) + "\n";
  write_text_file(path, text);
}

inline void write_inequality_csv(const std::string& path,
                                 const InequalityReport& rep) {
  std::string text = "t,lhs,rhs,slack\n";
  for (const InequalityRow& r : rep.rows)
    text += fmt_g(r.t) + "," + fmt_g(r.lhs) + "," + fmt_g(r.rhs) + "," +
            fmt_g(r.slack) + "\n";
  write_text_file(path, text);
}

inline void write_sweep_csv(const std::string& path, const SweepResult& sw) {
  std::string text = "eps,T_est,T_lo,T_hi,status\n";
  for (const SweepPoint& pt : sw.points)
    text += fmt_g(pt.eps) + "," + fmt_g(pt.estimate.T_est) + "," +
            fmt_g(pt.estimate.T_lo) + "," + fmt_g(pt.estimate.T_hi) + "," +
            to_string(pt.status) + "\n";
  write_text_file(path, text);
}

inline void write_fit_csv(const std::string& path, const PowerLawFit& fit) {
  std::string text =
      "slope,intercept,r_squared,theory_exponent,relative_deviation\n";
  text += fmt_g(fit.slope) + "," + fmt_g(fit.intercept) + "," +
          fmt_g(fit.r_squared) + "," + fmt_g(fit.theory_exponent) + "," +
          fmt_g(fit.relative_deviation) + "\n";
  write_text_file(path, text);
}

struct LemmaRow {
  double t, ratio, slope_window;
};

inline void write_lemma_csv(const std::string& path,
                            const std::vector<LemmaRow>& rows) {
  std::string text = "t,ratio,slope_window\n";
  for (const LemmaRow& r : rows)
    text += fmt_g(r.t) + "," + fmt_g(r.ratio) + "," + fmt_g(r.slope_window) +
            "\n";
  write_text_file(path, text);
}

inline void write_iteration_csv(const std::string& path,
                                const IterationResult& it) {
  std::string text = "j,a_j,b_j,logD_j,envelope_logD\n";
  for (const IterationRow& r : it.rows)
    text += std::to_string(r.j) + "," + fmt_g(r.a) + "," + fmt_g(r.b) + "," +
            fmt_g(r.logD) + "," + fmt_g(r.envelope_logD) + "\n";
  write_text_file(path, text);
}

}  // namespace blowuplab
