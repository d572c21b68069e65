#pragma once

// CSV renderings of the analysis tables. Numbers use the shortest decimal
// form that round-trips; undefined values are written as empty fields.

#include <string>

#include "tradedfa/dfa.hpp"
#include "tradedfa/intraday.hpp"
#include "tradedfa/mfdfa.hpp"

namespace tradedfa {

std::string curve_csv(const FluctuationCurve& curve);                 // q,s,F,valid_boxes
std::string pattern_csv(const IntradayPattern& pattern);              // bin,mean_tau,contributing_days
std::string pattern_fit_csv(const IntradayPattern& pattern,
                            const PatternPolyFit& fit);               // bin,mean_tau,polyfit_value
std::string hurst_csv(const GeneralizedHurst& h);                     // q,h,h_stderr
std::string mass_csv(const MassExponents& m);                         // q,tau
std::string spectrum_csv(const SingularitySpectrum& sp);              // q,alpha,f_alpha

}  // namespace tradedfa
