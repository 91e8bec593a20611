#include "fel/fel.h"

#include <cstring>
#include <string>

#include "core/frame.hpp"
#include "core/gauge.hpp"
#include "core/homotopy.hpp"
#include "core/lower_bound.hpp"
#include "core/runner.hpp"

namespace {

thread_local std::string g_last_error;

fel_status status_of(const fel::Error& e) {
  switch (e.code()) {
    case fel::ErrorCode::invalid_argument:
      return FEL_EINVAL;
    case fel::ErrorCode::degenerate_input:
      return FEL_EDEGENERATE;
    case fel::ErrorCode::gauge_failure:
      return FEL_EGAUGE;
    case fel::ErrorCode::numeric_failure:
      return FEL_ENUMERIC;
    case fel::ErrorCode::io_failure:
      return FEL_EIO;
    case fel::ErrorCode::unreliable:
      return FEL_EUNRELIABLE;
  }
  return FEL_ENUMERIC;
}

template <typename Fn>
fel_status guarded(Fn&& fn) {
  try {
    fn();
    return FEL_OK;
  } catch (const fel::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FEL_ENUMERIC;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct fel_grid {
  fel::GridPtr grid;
};

struct fel_immersion {
  fel::Immersion imm;
};

extern "C" {

const char* fel_last_error(void) { return g_last_error.c_str(); }

void fel_string_free(char* s) { std::free(s); }

fel_status fel_moduli_reduce(double tau1, double tau2, double* out_tau1, double* out_tau2, char** word) {
  return guarded([&] {
    auto red = fel::reduce_to_moduli(tau1, tau2);
    if (out_tau1) *out_tau1 = red.tau.tau1;
    if (out_tau2) *out_tau2 = red.tau.tau2;
    if (word) *word = dup_string(red.word());
  });
}

fel_status fel_moduli_function(double tau2, double theta, double* out_f) {
  return guarded([&] {
    fel::require(out_f != nullptr, fel::ErrorCode::invalid_argument, "fel_moduli_function: null output");
    *out_f = fel::f_moduli(tau2, theta);
  });
}

fel_status fel_grid_create(int n1, int n2, double tau1, double tau2, fel_grid** out) {
  return guarded([&] {
    fel::require(out != nullptr, fel::ErrorCode::invalid_argument, "fel_grid_create: null output");
    *out = new fel_grid{fel::make_grid(n1, n2, fel::ModuliPoint{tau1, tau2})};
  });
}

void fel_grid_destroy(fel_grid* g) { delete g; }

fel_status fel_immersion_create(const fel_grid* grid, const char* spec_json, fel_immersion** out) {
  return guarded([&] {
    fel::require(grid && spec_json && out, fel::ErrorCode::invalid_argument,
                 "fel_immersion_create: null argument");
    fel::Json spec = fel::Json::parse(spec_json, nullptr, false);
    fel::require(!spec.is_discarded(), fel::ErrorCode::invalid_argument,
                 "fel_immersion_create: malformed JSON");
    fel::Json grid_spec{{"n1", grid->grid->n1()},
                        {"n2", grid->grid->n2()},
                        {"tau", {grid->grid->tau().tau1, grid->grid->tau().tau2}}};
    // rotational immersions derive tau from (R, r); other kinds take the handle's lattice
    *out = new fel_immersion{fel::immersion_from_config(spec, grid_spec)};
  });
}

void fel_immersion_destroy(fel_immersion* imm) { delete imm; }

int fel_immersion_dim(const fel_immersion* imm) { return imm ? imm->imm.dim() : 0; }

fel_status fel_immersion_samples(const fel_immersion* imm, double* buffer, size_t buffer_len) {
  return guarded([&] {
    fel::require(imm && buffer, fel::ErrorCode::invalid_argument, "fel_immersion_samples: null argument");
    fel::require(buffer_len >= imm->imm.phi.data.size(), fel::ErrorCode::invalid_argument,
                 "fel_immersion_samples: buffer too small");
    std::memcpy(buffer, imm->imm.phi.data.data(), imm->imm.phi.data.size() * sizeof(double));
  });
}

fel_status fel_frame_energy(const fel_immersion* imm, fel_energy_breakdown* out) {
  return guarded([&] {
    fel::require(imm && out, fel::ErrorCode::invalid_argument, "fel_frame_energy: null argument");
    auto cache = fel::build_geometry(imm->imm);
    auto frame = fel::coulomb_project(cache, fel::coordinate_frame(cache)).frame;
    auto b = fel::frame_energy(cache, frame);
    out->F = b.F;
    out->F_T = b.F_T;
    out->W = b.W;
    out->quarter_II2 = b.quarter_II2;
    out->gap = b.decomposition_gap;
  });
}

fel_status fel_verify_lower_bound(const fel_immersion* imm, char** report_json) {
  return guarded([&] {
    fel::require(imm && report_json, fel::ErrorCode::invalid_argument,
                 "fel_verify_lower_bound: null argument");
    auto gauged = fel::restore_conformal_gauge(imm->imm);
    auto cache = fel::build_geometry(gauged.immersion);
    auto rep = fel::verify_theorem_LB(gauged.immersion, cache, fel::coordinate_frame(cache));
    fel::Json j{{"F", rep.F},
                {"F_T", rep.F_T},
                {"W", rep.W},
                {"lhs_LB0", rep.lhs_LB0},
                {"rhs_LB0", rep.rhs_LB0},
                {"f", rep.f_value},
                {"tau", {rep.tau1, rep.tau2}},
                {"theta", rep.theta},
                {"in_omega", rep.in_omega},
                {"branch", rep.branch},
                {"fenchel_min", rep.fenchel_min},
                {"lb0_ok", rep.lb0_ok},
                {"fenchel_ok", rep.fenchel_ok},
                {"verdict", rep.verdict}};
    *report_json = dup_string(j.dump(2));
  });
}

fel_status fel_classify(const fel_immersion* imm, fel_class_label* out) {
  return guarded([&] {
    fel::require(imm && out, fel::ErrorCode::invalid_argument, "fel_classify: null argument");
    auto cache = fel::build_geometry(imm->imm);
    auto lab = fel::classify(imm->imm, cache);
    out->arf = lab.arf;
    out->q[0] = lab.q[0];
    out->q[1] = lab.q[1];
    out->margins[0] = lab.margins[0];
    out->margins[1] = lab.margins[1];
    std::snprintf(out->label, sizeof(out->label), "%s", lab.label.c_str());
  });
}

fel_status fel_run_config(const char* command, const char* config_json, const char* out_dir, int* out_code) {
  return guarded([&] {
    fel::require(config_json && out_dir && out_code, fel::ErrorCode::invalid_argument,
                 "fel_run_config: null argument");
    std::string err;
    *out_code = fel::run_config_text(command ? command : "", config_json, out_dir, &err);
    if (*out_code != 0 && !err.empty()) g_last_error = err;
  });
}

}  // extern "C"
