#pragma once

#include <string>
#include <vector>

#include "cwikel/covering.hpp"
#include "cwikel/inversion.hpp"
#include "cwikel/orlicz.hpp"
#include "cwikel/rank_approx.hpp"
#include "cwikel/sampled_function.hpp"

namespace cwikel {

enum class GridEncoding { Csv, Binary };

/// Grid files start with a single-line JSON header
///   {"dim":2,"domain":"torus","half_width":3.14159,"resolution":64,
///    "measure":"normalized","encoding":"csv"}
/// followed by the values in storage order: one per line for csv, raw
/// little-endian doubles for binary.
void write_grid(const std::string& path, const SampledFunction& f,
                GridEncoding encoding = GridEncoding::Csv);
SampledFunction read_grid(const std::string& path);

std::string format_number(double v);

/// CSV with columns t_left,t_right,value.
std::string step_function_csv(const StepFunction& g);
StepFunction parse_step_function_csv(const std::string& text);

/// JSON array of {center, side, j_value, family}.
std::string covering_json(const Covering& cov);
Covering parse_covering_json(const std::string& text);

/// JSON object with the cells of K: cube, basis dimension, monomials,
/// monomial coefficients and the Delta cell list.
std::string finite_rank_operator_json(const FiniteRankOperator& k);

/// CSV k,mu_k,(k+1)*mu_k.
std::string spectrum_csv(const std::vector<double>& mu);
/// CSV n,q_n,fit,residual.
std::string growth_csv(const GrowthRecord& rec);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace cwikel
