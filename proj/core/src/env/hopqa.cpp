#include "agentrl/env/hopqa.hpp"

#include <algorithm>

#include "agentrl/common/error.hpp"
#include "agentrl/common/rng.hpp"
#include "agentrl/env/internal.hpp"

namespace agentrl {
namespace {

constexpr const char* kRelations[] = {"father", "mother",  "mentor", "founder",
                                      "ruler",  "keeper",  "owner",  "teacher",
                                      "patron", "guide"};
constexpr int kRelationCount = std::size(kRelations);

constexpr const char* kSyllables[] = {"ba",  "cor", "dan", "el",  "fir", "gol",
                                      "har", "il",  "jor", "kel", "lum", "mar",
                                      "nor", "ol",  "pra", "rin", "sol", "tam",
                                      "ur",  "vex", "wil", "yor", "zan", "qu"};
constexpr int kSyllableCount = std::size(kSyllables);

std::string fresh_entity(RngStream& rng, std::vector<std::string>& taken) {
  for (;;) {
    std::string name;
    int parts = rng.next_int(2, 3);
    for (int i = 0; i < parts; ++i)
      name += kSyllables[rng.next_below(kSyllableCount)];
    if (std::find(taken.begin(), taken.end(), name) == taken.end()) {
      taken.push_back(name);
      return name;
    }
  }
}

void add_unique(std::vector<Triple>& facts, Triple t) {
  if (std::find(facts.begin(), facts.end(), t) == facts.end())
    facts.push_back(std::move(t));
}

}  // namespace

HopqaInstance build_hopqa_instance(int difficulty, uint64_t gen_seed) {
  if (difficulty < 1 || difficulty > 3)
    throw Error(ErrorCode::kValidation,
                "hopqa difficulty must be in [1,3], got " +
                    std::to_string(difficulty));
  RngStream rng(derive_seed(gen_seed, internal::kHopqaSeedTag));
  const int hops = difficulty;

  HopqaInstance inst;
  std::vector<int> rel_picks;
  while (static_cast<int>(rel_picks.size()) < hops) {
    int r = static_cast<int>(rng.next_below(kRelationCount));
    if (std::find(rel_picks.begin(), rel_picks.end(), r) == rel_picks.end())
      rel_picks.push_back(r);
  }
  for (int r : rel_picks) inst.chain_relations.emplace_back(kRelations[r]);

  std::vector<std::string> taken;
  for (int i = 0; i <= hops; ++i)
    inst.chain_entities.push_back(fresh_entity(rng, taken));
  std::vector<std::string> pool;
  int pool_size = rng.next_int(6, 8);
  for (int i = 0; i < pool_size; ++i)
    pool.push_back(fresh_entity(rng, taken));

  for (int i = 0; i < hops; ++i)
    inst.facts.push_back({inst.chain_entities[i], inst.chain_relations[i],
                          inst.chain_entities[i + 1]});

  // Wrong-trail edges from chain entities. Objects come from the pool only:
  // a distractor can never point back into the chain, so the chain stays the
  // unique path to the answer. Skipping relation r_{i+1} at e_i keeps each
  // chain search unambiguous.
  for (int i = 0; i <= hops; ++i) {
    for (int r = 0; r < hops; ++r) {
      if (i < hops && r == i) continue;
      if (rng.next_bool(0.6))
        add_unique(inst.facts,
                   {inst.chain_entities[i], inst.chain_relations[r],
                    pool[rng.next_below(pool.size())]});
    }
  }

  // Pool-to-pool edges so wrong trails stay alive for a few hops.
  int n_extra = rng.next_int(4, 7);
  for (int i = 0; i < n_extra; ++i) {
    std::string rel = rng.next_bool(0.7)
                          ? inst.chain_relations[rng.next_below(hops)]
                          : kRelations[rng.next_below(kRelationCount)];
    add_unique(inst.facts, {pool[rng.next_below(pool.size())], rel,
                            pool[rng.next_below(pool.size())]});
  }

  std::string q = inst.chain_entities[0];
  for (int i = 0; i < hops; ++i)
    q = "the " + inst.chain_relations[i] + " of " + q;
  inst.question = "what is " + q;
  return inst;
}

std::vector<std::string> hopqa_search(const HopqaInstance& inst,
                                      const std::string& relation,
                                      const std::string& entity) {
  std::vector<std::string> results;
  for (const auto& t : inst.facts) {
    if (t.subject == entity && t.relation == relation)
      results.push_back(t.object);
    if (static_cast<int>(results.size()) == kHopqaMaxResults) break;
  }
  return results;
}

}  // namespace agentrl
