#include "kbsc/observation.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace kbsc {

namespace {

Estimate unobservable_closure(const PlantSpec& model, const SupervisionProfile& profile,
                              std::size_t i, std::vector<StateId> seed) {
  std::vector<bool> in(model.state_count(), false);
  std::deque<StateId> queue;
  for (StateId q : seed) {
    if (!in[index(q)]) {
      in[index(q)] = true;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (EventId e : model.events()) {
      if (profile.observes(i, e)) continue;
      auto edge = model.step(q, e);
      if (edge && !in[index(edge->target)]) {
        in[index(edge->target)] = true;
        queue.push_back(edge->target);
      }
    }
  }
  Estimate out;
  for (std::size_t q = 0; q < in.size(); ++q)
    if (in[q]) out.push_back(StateId(q));
  return out;
}

}  // namespace

std::optional<std::size_t> Observer::find(const Estimate& estimate) const {
  auto it = std::find(states.begin(), states.end(), estimate);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

Observer project(const PlantSpec& model, const SupervisionProfile& profile, std::size_t i) {
  if (i >= profile.supervisors())
    throw Error("supervisor index " + std::to_string(i + 1) + " out of range");
  Observer obs;
  obs.supervisor = i;
  std::map<Estimate, std::size_t> ids;
  auto intern = [&](Estimate est) {
    auto [it, fresh] = ids.emplace(est, obs.states.size());
    if (fresh) {
      obs.states.push_back(std::move(est));
      obs.delta.emplace_back(model.event_count());
    }
    return std::make_pair(it->second, fresh);
  };

  std::deque<std::size_t> queue{intern(unobservable_closure(model, profile, i, {model.initial()})).first};
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (EventId e : model.events_by_name()) {
      if (!profile.observes(i, e)) continue;
      std::vector<StateId> post;
      for (StateId q : obs.states[s]) {
        if (auto edge = model.step(q, e)) post.push_back(edge->target);
      }
      if (post.empty()) continue;
      auto [t, fresh] = intern(unobservable_closure(model, profile, i, std::move(post)));
      obs.delta[s][index(e)] = t;
      if (fresh) queue.push_back(t);
    }
  }
  return obs;
}

std::optional<std::size_t> Composite::run(const EventString& s) const {
  std::size_t w = 0;
  for (EventId e : s) {
    auto next = step(w, e);
    if (!next) return std::nullopt;
    w = *next;
  }
  return w;
}

Composite compose(const PlantSpec& model, std::vector<Observer> observers) {
  if (observers.empty()) throw Error("composition needs at least one observer");
  Composite c;
  c.observers = std::move(observers);
  std::map<World, std::size_t> ids;
  auto intern = [&](World w, const EventString& via) {
    auto [it, fresh] = ids.emplace(w, c.worlds.size());
    if (fresh) {
      c.worlds.push_back(std::move(w));
      c.delta.emplace_back(model.event_count());
      c.witness.push_back(via);
    }
    return std::make_pair(it->second, fresh);
  };

  World start{model.initial(), std::vector<std::size_t>(c.observers.size(), 0)};
  std::deque<std::size_t> queue{intern(start, {}).first};
  while (!queue.empty()) {
    std::size_t w = queue.front();
    queue.pop_front();
    for (EventId e : model.events_by_name()) {
      auto edge = model.step(c.worlds[w].plant, e);
      if (!edge) continue;
      World next{edge->target, c.worlds[w].estimates};
      for (std::size_t i = 0; i < c.observers.size(); ++i) {
        const Observer& obs = c.observers[i];
        if (obs.delta[next.estimates[i]].size() <= index(e)) continue;
        if (auto t = obs.delta[next.estimates[i]][index(e)]) next.estimates[i] = *t;
      }
      EventString via = c.witness[w];
      via.push_back(e);
      auto [v, fresh] = intern(std::move(next), via);
      c.delta[w][index(e)] = v;
      if (fresh) queue.push_back(v);
    }
  }

  // Legal worlds: breadth-first along legal transitions only, which also
  // yields the least legal witness for each of them.
  c.legal.assign(c.worlds.size(), false);
  c.legal[0] = true;
  c.witness[0] = {};
  std::deque<std::size_t> legal_queue{0};
  while (!legal_queue.empty()) {
    std::size_t w = legal_queue.front();
    legal_queue.pop_front();
    for (EventId e : model.events_by_name()) {
      auto edge = model.step(c.worlds[w].plant, e);
      if (!edge || !edge->legal) continue;
      std::size_t v = *c.delta[w][index(e)];
      if (c.legal[v]) continue;
      c.legal[v] = true;
      c.witness[v] = c.witness[w];
      c.witness[v].push_back(e);
      legal_queue.push_back(v);
    }
  }
  return c;
}

Composite compose(const PlantSpec& model, const SupervisionProfile& profile) {
  std::vector<Observer> observers;
  for (std::size_t i = 0; i < profile.supervisors(); ++i)
    observers.push_back(project(model, profile, i));
  return compose(model, std::move(observers));
}

}  // namespace kbsc
