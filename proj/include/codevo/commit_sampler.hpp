#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "codevo/dates.hpp"
#include "codevo/repo_access.hpp"

namespace codevo {

enum class DateUnit { Year, Month };

std::string_view to_string(DateUnit unit);

struct SamplingWindow {
  int start_year = 0;
  int end_year = 0;

  friend bool operator==(const SamplingWindow&, const SamplingWindow&) = default;
};

struct CommitSample {
  Date boundary;
  CommitRef commit;
};

/// Jan 1 (Year) or every month's 1st (Month) from start_year through
/// end_year, ascending. Throws InvalidArgument when start_year > end_year.
std::vector<Date> boundary_dates(DateUnit unit, SamplingWindow window);

/// The five calendar years ending with `today`'s year.
SamplingWindow default_window(Date today);

/// For each boundary, the last commit committed at or before the end of that
/// day (UTC). Boundaries before the first commit are dropped; quiet periods
/// repeat the previous commit. Throws NoSamples if nothing is eligible.
///
/// `commits` must be ascending by committer date, `boundaries` ascending.
std::vector<CommitSample> sample(std::span<const CommitRef> commits, std::span<const Date> boundaries);

}  // namespace codevo
