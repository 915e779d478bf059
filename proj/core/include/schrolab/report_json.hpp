#pragma once

#include <nlohmann/json.hpp>

#include "schrolab/czd.hpp"
#include "schrolab/experiments.hpp"
#include "schrolab/kernel_analysis.hpp"
#include "schrolab/spaces.hpp"
#include "schrolab/weights.hpp"

namespace schrolab {

using Json = nlohmann::ordered_json;

// Non-finite doubles are written as the strings "inf", "-inf" and "nan".
Json json_number(double v);

Json serialize(const Domain& domain);
Json serialize(const Point& p, int dim);
Json serialize(const Ball& ball, int dim);
Json serialize(const EnvelopeFit& fit);
Json serialize(const BallSampleSpec& spec);

/// Inline field values; intended for small grids only.
Json serialize(const GridFunction& f, std::size_t max_values = 4096);

Json serialize(const RHReport& r, int dim);
Json serialize(const DoublingReport& r);
Json serialize_summary(const CriticalRadiusField& field);
Json serialize(const RhoRegularityReport& r);
Json serialize(const CriticalCovering& c, int dim);
Json serialize(const BmoReport& r, int dim);
Json serialize(const JnFit& r);
Json serialize(const ApReport& r, int dim);
Json serialize(const OpennessScan& r);
Json serialize(const PowerCheck& r);
Json serialize(const KernelBoundReport& r);
Json serialize(const HormanderSums& r);
Json serialize(const CZCubes& c, int dim);
Json serialize(const NormEstimate& e, bool with_trace = false);
Json serialize(const RefinementTable& t);
Json serialize(const WeakTypeReport& r);
Json serialize(const LaclaimFit& r);

}  // namespace schrolab
