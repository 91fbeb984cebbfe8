#include "codevo/commit_sampler.hpp"

#include "codevo/error.hpp"

namespace codevo {

std::string_view to_string(DateUnit unit) { return unit == DateUnit::Year ? "year" : "month"; }

std::vector<Date> boundary_dates(DateUnit unit, SamplingWindow window) {
  if (window.start_year > window.end_year) {
    throw Error(ErrorCode::InvalidArgument, "window start " + std::to_string(window.start_year) + " after end " +
                                                std::to_string(window.end_year));
  }
  std::vector<Date> dates;
  for (int y = window.start_year; y <= window.end_year; ++y) {
    if (unit == DateUnit::Year) {
      dates.push_back(make_date(y, 1, 1));
    } else {
      for (unsigned m = 1; m <= 12; ++m) dates.push_back(make_date(y, m, 1));
    }
  }
  return dates;
}

SamplingWindow default_window(Date today) {
  const int year = year_of(today);
  return {year - 4, year};
}

std::vector<CommitSample> sample(std::span<const CommitRef> commits, std::span<const Date> boundaries) {
  std::vector<CommitSample> samples;
  samples.reserve(boundaries.size());
  std::size_t next = 0;  // first commit not yet eligible
  for (const Date b : boundaries) {
    const auto cutoff = end_of_day(b);
    while (next < commits.size() && commits[next].committer_date.utc <= cutoff) ++next;
    if (next == 0) continue;
    samples.push_back({b, commits[next - 1]});
  }
  if (samples.empty()) throw Error(ErrorCode::NoSamples, "no commit at or before any boundary date");
  return samples;
}

}  // namespace codevo
