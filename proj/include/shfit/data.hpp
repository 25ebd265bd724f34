#pragma once
#include <iosfwd>
#include <string>
#include <vector>

#include "shfit/dates.hpp"

namespace shfit {

enum class Schema { belgium, france };

// One parsed CSV row. Column meaning depends on the schema:
//   belgium: c1 = TOTAL_IN, c2 = NEW_IN, c3 = NEW_OUT   (all daily)
//   france:  c1 = hosp,     c2 = rad,    c3 = dc        (rad/dc cumulative)
struct RawRecord {
    Date date;
    std::string region;
    double c1 = 0, c2 = 0, c3 = 0;
};

struct RawRecordSet {
    Schema schema = Schema::belgium;
    std::vector<RawRecord> rows;
};

// Daily observed triple (H_o, E_o, L_o) on a contiguous date index.
// l may go negative after reconciliation; that is kept as-is.
struct ObservedSeries {
    Date start_date;
    std::vector<double> h, e, l;
    std::string label;

    long size() const { return long(h.size()); }
    Date date_at(long t) const { return start_date.plus_days(t); }
    long index_of(const Date& d) const { return d - start_date; }
};

RawRecordSet parse_belgium_csv(std::istream& in);
RawRecordSet parse_france_csv(std::istream& in);

// Per-date sums over all region rows. France: l = first difference of the
// summed cumulative rad + dc, first day dropped, e left as zeros (the source
// has no admissions column). Output is NOT yet reconciled.
ObservedSeries aggregate_national(const RawRecordSet& records);

// Rebuild the flow the source does not observe directly from the stock-flow
// identity. belgium: l(t) := -h(t) + h(t-1) + e(t); france:
// e(t) := h(t) - h(t-1) + l(t). Flows at the start date are set to 0 by
// convention. Idempotent.
ObservedSeries reconcile_flows(const ObservedSeries& series, Schema schema);

// Canonical series CSV `date,H,E,L`, shortest round-trip float formatting.
std::string series_to_csv(const ObservedSeries& series);
ObservedSeries series_from_csv(std::istream& in, const std::string& label = "");

// Shortest decimal string that parses back to exactly this double.
std::string format_double(double v);

}  // namespace shfit
