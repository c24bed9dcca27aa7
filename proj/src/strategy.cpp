#include "specqc/strategy.hpp"

#include "specqc/printer.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace specqc {

std::optional<std::string> Strategy::set_option(const std::string& key, const std::string&) {
  return "Strategy " + name() + " has no option '" + key + "'";
}

StrategySet StrategySet::defaults() {
  StrategySet s;
  for (auto* make : {make_fixed_strategy, make_search_strategy, make_finite_strategy, make_trivial_strategy,
                     make_direct_strategy, make_random_strategy}) {
    auto strategy = make();
    const bool on = strategy->enabled_by_default();
    s.add(std::move(strategy), on);
  }
  return s;
}

StrategySet::StrategySet(const StrategySet& other) { *this = other; }

StrategySet& StrategySet::operator=(const StrategySet& other) {
  if (this == &other) return *this;
  entries_.clear();
  for (const auto& e : other.entries_) entries_.push_back(Entry{e.strategy->clone(), e.enabled});
  return *this;
}

void StrategySet::add(std::unique_ptr<Strategy> s, bool enabled) { entries_.push_back(Entry{std::move(s), enabled}); }

Strategy* StrategySet::find(const std::string& name) {
  for (auto& e : entries_) {
    if (e.strategy->name() == name) return e.strategy.get();
  }
  return nullptr;
}

const Strategy* StrategySet::find(const std::string& name) const {
  return const_cast<StrategySet*>(this)->find(name);
}

bool StrategySet::enable(const std::string& name, bool on) {
  for (auto& e : entries_) {
    if (e.strategy->name() == name) {
      e.enabled = on;
      return true;
    }
  }
  return false;
}

bool StrategySet::enabled(const std::string& name) const {
  for (const auto& e : entries_) {
    if (e.strategy->name() == name) return e.enabled;
  }
  return false;
}

std::vector<std::string> StrategySet::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.strategy->name());
  return out;
}

std::vector<Strategy*> StrategySet::active() const {
  std::vector<Strategy*> out;
  for (const auto& e : entries_) {
    if (e.enabled) out.push_back(e.strategy.get());
  }
  return out;
}

std::string StrategySet::listing() const {
  std::string enabled = "Enabled strategies:\n";
  std::string disabled;
  for (const auto& e : entries_) {
    const std::string line = "  " + e.strategy->name() + " " + e.strategy->synopsis() + "\n";
    if (e.enabled) {
      enabled += line;
    } else {
      disabled += line;
    }
  }
  if (!disabled.empty()) enabled += "\nDisabled strategies (add with -s <name>):\n" + disabled;
  return enabled;
}

std::vector<Bind> distinct_binds(const std::vector<ProofObligation>& pos) {
  std::vector<Bind> out;
  std::set<std::string> seen;
  for (const auto& po : pos) {
    for (auto& b : collect_type_binds(*po.expr)) {
      if (seen.insert(b.key).second) out.push_back(std::move(b));
    }
  }
  return out;
}

std::optional<std::string> fixed_create(const std::vector<ProofObligation>& pos, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return "Cannot write " + tmp.string();
    out << "-- Fixed strategy bind values: <bind> = <set expression>\n";
    for (const auto& b : distinct_binds(pos)) out << "-- " << b.key << " = {}\n";
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      fs::remove(tmp, ignored);
      return "Cannot write " + tmp.string();
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    return "Cannot create " + path + ": " + ec.message();
  }
  return std::nullopt;
}

}  // namespace specqc
