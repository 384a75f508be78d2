// SPDX-License-Identifier: MIT
//
// extern "C" wrapper: opaque handles over the C++ engine, error codes plus a
// thread-local message instead of exceptions.

#include "facta/facta.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "engine.hpp"
#include "lineage_io.hpp"

using namespace facta;

struct facta_instance {
  Instance inst;
};

struct facta_result {
  Report report;
  // Engaged by facta_compile: the tree plus (boolean only) annotations.
  std::optional<DTree> tree;
  std::optional<BanzhafRun> run;
  VarTable vars;  // names for DOT export (includes lifted fresh names)
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return FACTA_OK;
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FACTA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FACTA_ERR_INTERNAL, e.what());
  }
}

char* dup_text(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* facta_version(void) { return "0.1.0"; }

const char* facta_last_error(void) { return g_last_error.c_str(); }

int facta_load_file(const char* path, facta_instance** out) {
  if (!path || !out) return fail(FACTA_ERR_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = new facta_instance{load_lineage(path)};
    *out = handle;
  });
}

int facta_load_string(const char* text, const char* format,
                      facta_instance** out) {
  if (!text || !format || !out) return fail(FACTA_ERR_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = new facta_instance{load_lineage_string(text, format)};
    *out = handle;
  });
}

void facta_instance_free(facta_instance* inst) { delete inst; }

size_t facta_instance_variables(const facta_instance* inst) {
  return inst ? inst->inst.universe().size() : 0;
}

const char* facta_instance_kind(const facta_instance* inst) {
  if (!inst) return "";
  if (inst->inst.is_dnf()) return "dnf";
  return monoid_name(inst->inst.bnp().monoid);
}

int facta_attribution(const facta_instance* inst,
                      const facta_run_options* opts, facta_result** out) {
  if (!inst || !out) return fail(FACTA_ERR_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    RunOptions ro;
    if (opts) {
      ro.measure = opts->shapley ? Measure::Shapley : Measure::Banzhaf;
      if (opts->method && *opts->method) {
        std::optional<Method> m = parse_method(opts->method);
        if (!m)
          throw InputError(std::string("unknown method '") + opts->method +
                           "' (expected gradient|counts|oracle)");
        ro.method = *m;
      }
      ro.lift = !opts->no_lift;
      ro.timeout_secs = opts->timeout_secs;
    }
    auto res = new facta_result;
    try {
      res->report = run_attribution(inst->inst, ro);
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
  });
}

int facta_compile(const facta_instance* inst, int no_lift, double timeout_secs,
                  facta_result** out) {
  if (!inst || !out) return fail(FACTA_ERR_INPUT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const Instance& in = inst->inst;
    if (!in.is_dnf() && !monoid_idempotent(in.bnp().monoid))
      throw InputError(
          "SUM/COUNT lineage has no single-tree form (attribution is "
          "per-term); compile applies to dnf and MIN/MAX");
    auto res = new facta_result;
    try {
      res->vars = in.vars;  // compile interns fresh names into the copy
      CompileOptions copts;
      copts.lift = !no_lift;
      Deadline deadline = timeout_secs > 0
                              ? Deadline(std::chrono::milliseconds(
                                    static_cast<long long>(timeout_secs * 1000)))
                              : Deadline::unlimited();
      if (in.is_dnf())
        res->tree = compile_dnf(in.dnf(), res->vars, copts, deadline);
      else
        res->tree = compile_bnp(in.bnp(), res->vars, copts, deadline);
      res->report.source = in.source;
      res->report.kind = in.is_dnf() ? "dnf" : "aggregate";
      if (!in.is_dnf()) res->report.monoid = monoid_name(in.bnp().monoid);
      res->report.method = "compile";
      res->report.measure = "";
      res->report.lifted = !no_lift;
      res->report.universe_size = in.universe().size();
      res->report.tree = tree_stats(*res->tree);
      if (in.is_dnf()) {
        res->run = gradient_banzhaf(*res->tree, in.universe(), deadline);
        res->report.root_probability = res->run->root_probability;
      }
    } catch (...) {
      delete res;
      throw;
    }
    *out = res;
  });
}

int facta_result_csv(const facta_result* res, char** out_text) {
  if (!res || !out_text) return fail(FACTA_ERR_INPUT, "null argument");
  *out_text = nullptr;
  return guarded([&] { *out_text = dup_text(report_csv(res->report)); });
}

int facta_result_json(const facta_result* res, char** out_text) {
  if (!res || !out_text) return fail(FACTA_ERR_INPUT, "null argument");
  *out_text = nullptr;
  return guarded([&] { *out_text = dup_text(report_json(res->report)); });
}

int facta_result_dot(const facta_result* res, char** out_text) {
  if (!res || !out_text) return fail(FACTA_ERR_INPUT, "null argument");
  *out_text = nullptr;
  return guarded([&] {
    if (!res->tree)
      throw InputError("result carries no tree (use facta_compile)");
    *out_text = dup_text(
        dot_export(*res->tree, res->vars, res->run ? &*res->run : nullptr));
  });
}

void facta_result_free(facta_result* res) { delete res; }

void facta_free_text(char* text) { std::free(text); }

int facta_generate(const facta_generate_params* params, char** out_text) {
  if (!params || !out_text) return fail(FACTA_ERR_INPUT, "null argument");
  *out_text = nullptr;
  return guarded([&] {
    GeneratorParams p;
    p.vars = params->vars;
    p.clauses = params->clauses;
    p.width = params->width;
    p.duplication = params->duplication;
    if (params->monoid && *params->monoid) {
      std::optional<MonoidKind> m = parse_monoid(params->monoid);
      if (!m)
        throw InputError(std::string("unknown monoid '") + params->monoid +
                         "' (expected sum|count|min|max)");
      p.monoid = m;
    }
    if (params->value_min != 0 || params->value_max != 0) {
      p.value_min = params->value_min;
      p.value_max = params->value_max;
    }
    p.seed = params->seed;
    *out_text = dup_text(generate(p));
  });
}

}  // extern "C"
