#include "amc/random_amas.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace amc {

namespace {

int clampi(int v, int lo, int hi) { return std::min(std::max(v, lo), hi); }

int draw(std::mt19937_64& rng, int n) {
  return n <= 1 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

bool chance(std::mt19937_64& rng, int percent) { return draw(rng, 100) < percent; }

}  // namespace

Amas random_amas(const RandomAmasParams& params) {
  std::mt19937_64 rng(params.seed);
  const int na = clampi(params.agents, 1, 8);
  const int ns = clampi(params.states_per_agent, 1, 9);
  const int npriv = clampi(params.private_events, 0, 6);
  const int nshared = na >= 2 ? clampi(params.shared_events, 0, 6) : 0;
  const int nprops = clampi(params.props, 0, 8);

  Amas a;
  a.agents.resize(na);
  for (AgentId i = 0; i < na; ++i) a.agents[i].name = "a" + std::to_string(i);

  for (AgentId i = 0; i < na; ++i)
    for (int j = 0; j < npriv; ++j) {
      a.event_names.push_back("p" + std::to_string(i) + "_" + std::to_string(j));
      a.event_owners.push_back({i});
    }
  for (int j = 0; j < nshared; ++j) {
    int size = 2 + draw(rng, na - 1);
    std::vector<AgentId> pool(na);
    for (AgentId i = 0; i < na; ++i) pool[i] = i;
    for (int k = 0; k < size; ++k) std::swap(pool[k], pool[k + draw(rng, na - k)]);
    std::vector<AgentId> owners(pool.begin(), pool.begin() + size);
    std::sort(owners.begin(), owners.end());
    a.event_names.push_back("s" + std::to_string(j));
    a.event_owners.push_back(std::move(owners));
  }
  // Make sure nobody is left without an event to own.
  for (AgentId i = 0; i < na; ++i) {
    bool owns = false;
    for (const auto& owners : a.event_owners)
      owns = owns || std::binary_search(owners.begin(), owners.end(), i);
    if (!owns) {
      a.event_names.push_back("tick" + std::to_string(i));
      a.event_owners.push_back({i});
    }
  }

  for (int p = 0; p < nprops; ++p) {
    a.prop_names.push_back("r" + std::to_string(p));
    a.prop_owner.push_back(draw(rng, na));
  }

  for (AgentId i = 0; i < na; ++i) {
    AgentSpec& ag = a.agents[i];
    std::vector<EventId> owned;
    for (EventId e = 0; e < a.event_count(); ++e)
      if (std::binary_search(a.event_owners[e].begin(), a.event_owners[e].end(), i))
        owned.push_back(e);

    for (LocalState l = 0; l < ns; ++l) ag.state_names.push_back(std::to_string(l));
    ag.init = 0;
    ag.repertoire.resize(ns);
    ag.available.resize(ns);
    ag.transitions.resize(ns);
    ag.valuation.resize(ns);

    std::vector<std::vector<EventId>> avail_rows(ns);
    for (LocalState l = 0; l < ns; ++l) {
      auto& avail = avail_rows[l];
      for (EventId e : owned)
        if (chance(rng, 55)) avail.push_back(e);
      if (avail.empty()) avail.push_back(owned[draw(rng, static_cast<int>(owned.size()))]);
    }
    // Every owned event must be usable somewhere, or the owner table would
    // disagree with actual usage.
    for (EventId e : owned) {
      bool used = false;
      for (const auto& row : avail_rows)
        used = used || std::binary_search(row.begin(), row.end(), e);
      if (!used) {
        auto& row = avail_rows[draw(rng, ns)];
        row.insert(std::lower_bound(row.begin(), row.end(), e), e);
      }
    }

    for (LocalState l = 0; l < ns; ++l) {
      std::vector<EventId> avail = std::move(avail_rows[l]);
      ag.available[l] = avail;  // already sorted: owned is ascending
      for (EventId e : avail) ag.transitions[l].emplace_back(e, draw(rng, ns));

      if (avail.size() >= 2 && chance(rng, params.explicit_percent)) {
        std::vector<EventId> mixed = avail;
        for (size_t k = 0; k + 1 < mixed.size(); ++k)
          std::swap(mixed[k], mixed[k + draw(rng, static_cast<int>(mixed.size() - k))]);
        std::vector<Choice> row;
        for (EventId e : mixed) {
          if (row.empty() || chance(rng, 50)) row.push_back(Choice{{e}});
          else row.back().events.push_back(e);
        }
        for (auto& c : row) std::sort(c.events.begin(), c.events.end());
        // Canonical row order, so printing and re-parsing is the identity
        // even when the grouping degenerates to all singletons.
        std::sort(row.begin(), row.end(),
                  [](const Choice& x, const Choice& y) { return x.events < y.events; });
        ag.repertoire[l] = std::move(row);
      } else {
        ag.repertoire[l] = lift_simple(avail);
      }
    }
  }

  for (PropId p = 0; p < nprops; ++p) {
    AgentSpec& ag = a.agents[a.prop_owner[p]];
    bool anywhere = false;
    for (LocalState l = 0; l < ns; ++l)
      if (chance(rng, 40)) {
        ag.valuation[l].push_back(p);
        anywhere = true;
      }
    if (!anywhere) ag.valuation[draw(rng, ns)].push_back(p);
  }
  for (AgentId i = 0; i < na; ++i)
    for (auto& row : a.agents[i].valuation) std::sort(row.begin(), row.end());

  validate(a);
  return a;
}

PathFormulaPtr random_path_formula(std::mt19937_64& rng, int atoms, int depth) {
  if (depth <= 0 || draw(rng, 4) == 0) {
    int r = draw(rng, atoms + 1);
    return r == atoms ? path_true() : path_prop(r);
  }
  switch (draw(rng, 7)) {
    case 0: return path_not(random_path_formula(rng, atoms, depth - 1));
    case 1:
      return path_and(random_path_formula(rng, atoms, depth - 1),
                      random_path_formula(rng, atoms, depth - 1));
    case 2:
      return path_or(random_path_formula(rng, atoms, depth - 1),
                     random_path_formula(rng, atoms, depth - 1));
    case 3: return path_next(random_path_formula(rng, atoms, depth - 1));
    case 4:
      return path_until(random_path_formula(rng, atoms, depth - 1),
                        random_path_formula(rng, atoms, depth - 1));
    case 5: return path_eventually(random_path_formula(rng, atoms, depth - 1));
    default: return path_always(random_path_formula(rng, atoms, depth - 1));
  }
}

StateFormulaPtr random_reducible_formula(std::mt19937_64& rng,
                                         const std::vector<AgentId>& coalition,
                                         const std::vector<PropId>& props) {
  auto atom = [&]() {
    return props.empty() ? path_true() : path_prop(props[draw(rng, static_cast<int>(props.size()))]);
  };
  PathFormulaPtr body;
  switch (draw(rng, 6)) {
    case 0: body = path_eventually(atom()); break;
    case 1: body = path_always(atom()); break;
    case 2: body = path_until(atom(), atom()); break;
    case 3: body = path_eventually(path_and(atom(), atom())); break;
    case 4: body = path_always(path_or(atom(), atom())); break;
    default: body = path_or(path_always(atom()), path_eventually(atom())); break;
  }
  return state_coalition(coalition, body);
}

}  // namespace amc
