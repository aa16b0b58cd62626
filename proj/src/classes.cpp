#include "ordinal/classes.hpp"

#include <algorithm>
#include <cmath>

#include "ordinal/error.hpp"

namespace ordinal {

namespace {

using ClassList = std::vector<std::vector<const char*>>;

const ClassList& order4_classes() {
  static const ClassList table = {
      {"1234"},       {"1243", "2134"}, {"1324"},       {"1342", "3124"},
      {"1423", "2314"}, {"1432", "2143", "3214"},     {"2341", "3412", "4123"},
      {"2413"},       {"2431", "4213"}, {"3142"},       {"3241", "4132"},
      {"3421", "4312"}, {"4231"},       {"4321"},
  };
  return table;
}

const ClassList& order5_classes() {
  static const ClassList table = {
      {"12345"}, {"14325"}, {"21354"}, {"21453", "31254"}, {"25314"}, {"41352"}, {"45312"}, {"52341"},
      {"54321"},
      {"12543", "32145"}, {"13245", "12435"}, {"13425", "14235"}, {"15243", "32415"}, {"15342", "42315"},
      {"15432", "43215"}, {"21345", "12354"}, {"21435", "13254"}, {"21543", "32154"}, {"23145", "12534"},
      {"23415", "15234"}, {"24153", "31524"}, {"24315", "15324"}, {"24513", "35124"}, {"24531", "53124"},
      {"25134", "23514"}, {"25341", "52314"}, {"25413", "35214"}, {"25431", "53214"}, {"31245", "12453"},
      {"31425", "14253"}, {"31542", "42153"}, {"32514", "25143"}, {"32541", "52143"}, {"35142", "42513"},
      {"35241", "52413"}, {"41235", "13452"}, {"41253", "31452"}, {"41325", "14352"}, {"41523", "34152"},
      {"41532", "43152"}, {"42135", "13542"}, {"42351", "51342"}, {"45231", "53412"}, {"51324", "24351"},
      {"51423", "34251"}, {"51432", "43251"}, {"53142", "42531"}, {"53241", "52431"}, {"54123", "34521"},
      {"54132", "43521"}, {"54213", "35421"}, {"54231", "53421"}, {"54312", "45321"}, {"43125", "14532"},
      {"34125", "14523"}, {"13524", "24135"}, {"51243", "32451"}, {"43512", "45132"},
      {"35412", "52134", "45213", "23541"},
      {"23451", "45123", "34512", "51234"},
      {"21534", "23154", "15423", "34215"},
  };
  return table;
}

EquivalenceClassTable from_strings(int n, const ClassList& list, EquivalenceClassTable::Source source) {
  std::vector<std::vector<std::uint64_t>> groups;
  groups.reserve(list.size());
  for (const auto& names : list) {
    std::vector<std::uint64_t> g;
    for (const char* s : names) g.push_back(lex_rank(OrdinalPattern::parse(s)));
    groups.push_back(std::move(g));
  }
  return EquivalenceClassTable(n, std::move(groups), source);
}

}  // namespace

EquivalenceClassTable::EquivalenceClassTable(int n, std::vector<std::vector<std::uint64_t>> classes, Source source)
    : n_(n), classes_(std::move(classes)), source_(source) {
  if (n < 2 || n > kMaxDistributionOrder) throw OrderError("class tables need 2 <= n <= 10");
  const std::uint64_t total = factorial(n);
  constexpr auto kUnassigned = static_cast<std::size_t>(-1);
  class_index_.assign(total, kUnassigned);
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    auto& group = classes_[c];
    if (group.empty()) throw ValueError("equivalence class " + std::to_string(c) + " is empty");
    std::sort(group.begin(), group.end());
    for (auto r : group) {
      if (r >= total) throw ValueError("class member rank out of range");
      if (class_index_[r] != kUnassigned) {
        throw ValueError("pattern " + lex_unrank(n, r).to_string() + " appears in more than one class");
      }
      class_index_[r] = c;
    }
  }
  for (std::uint64_t r = 0; r < total; ++r) {
    if (class_index_[r] == kUnassigned) {
      throw ValueError("pattern " + lex_unrank(n, r).to_string() + " is not covered by any class");
    }
    const auto rc = lex_rank(reverse_complement(lex_unrank(n, r)));
    if (class_index_[rc] != class_index_[r]) {
      throw ValueError("class of " + lex_unrank(n, r).to_string() + " is not closed under reverse-complement");
    }
  }
  std::sort(classes_.begin(), classes_.end());
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    for (auto r : classes_[c]) class_index_[r] = c;
  }
}

std::size_t EquivalenceClassTable::class_of(const OrdinalPattern& pattern) const {
  if (pattern.order() != n_) throw OrderMismatch("pattern order does not match class table order");
  return class_of(lex_rank(pattern));
}

bool EquivalenceClassTable::refines(const EquivalenceClassTable& coarser) const {
  if (coarser.order() != n_) throw OrderMismatch("class tables have different orders");
  for (const auto& group : classes_) {
    const auto target = coarser.class_of(group.front());
    for (auto r : group) {
      if (coarser.class_of(r) != target) return false;
    }
  }
  return true;
}

std::string to_string(EquivalenceClassTable::Source source) {
  return source == EquivalenceClassTable::Source::appendix_data ? "appendix_data" : "rc_closure";
}

EquivalenceClassTable equivalence_classes(int n) {
  switch (n) {
    case 3: {
      auto t = rc_closure(3);
      return EquivalenceClassTable(3, t.classes(), EquivalenceClassTable::Source::appendix_data);
    }
    case 4: return from_strings(4, order4_classes(), EquivalenceClassTable::Source::appendix_data);
    case 5: return from_strings(5, order5_classes(), EquivalenceClassTable::Source::appendix_data);
    default: throw OrderError("equivalence classes are tabulated for n = 3, 4, 5 only");
  }
}

EquivalenceClassTable rc_closure(int n) {
  if (n < 2 || n > 7) throw OrderError("rc_closure supports 2 <= n <= 7");
  const std::uint64_t total = factorial(n);
  std::vector<bool> done(total, false);
  std::vector<std::vector<std::uint64_t>> groups;
  for (std::uint64_t r = 0; r < total; ++r) {
    if (done[r]) continue;
    const auto rc = lex_rank(reverse_complement(lex_unrank(n, r)));
    done[r] = done[rc] = true;
    groups.push_back(rc == r ? std::vector<std::uint64_t>{r} : std::vector<std::uint64_t>{r, rc});
  }
  return EquivalenceClassTable(n, std::move(groups), EquivalenceClassTable::Source::rc_closure);
}

EquivalenceClassTable class_table_for(int n) {
  if (n >= 3 && n <= 5) return equivalence_classes(n);
  return rc_closure(n);
}

ClassValidation validate_classes(const PatternDistribution& dist, const EquivalenceClassTable& classes,
                                 double tolerance) {
  if (dist.order() != classes.order()) throw OrderMismatch("class table order does not match distribution order");
  if (!(tolerance >= 0.0)) throw RangeError("tolerance must be >= 0");
  ClassValidation out;
  out.tolerance = tolerance;
  out.spreads.reserve(classes.size());
  for (const auto& group : classes.classes()) {
    double lo = dist.weight(group.front());
    double hi = lo;
    for (auto r : group) {
      lo = std::min(lo, dist.weight(r));
      hi = std::max(hi, dist.weight(r));
    }
    out.spreads.push_back(hi - lo);
    out.max_spread = std::max(out.max_spread, hi - lo);
  }
  out.passed = out.max_spread <= tolerance;
  return out;
}

}  // namespace ordinal
