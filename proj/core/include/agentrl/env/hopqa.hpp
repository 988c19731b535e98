#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace agentrl {

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const Triple&) const = default;
};

// A multi-hop retrieval task: exactly one relation chain of `hops` steps
// leads from the question entity to the answer. Distractor triples point
// only at pool entities that never rejoin the chain, so no shorter path to
// the answer exists.
struct HopqaInstance {
  std::vector<Triple> facts;                 // store order = result order
  std::vector<std::string> chain_relations;  // application order r1..rk
  std::vector<std::string> chain_entities;   // e0..ek; back() is the answer
  std::string question;

  const std::string& answer() const { return chain_entities.back(); }
  int hops() const { return static_cast<int>(chain_relations.size()); }
};

inline constexpr int kHopqaMaxResults = 5;

HopqaInstance build_hopqa_instance(int difficulty, uint64_t gen_seed);

// Matching objects for "search <relation> of <entity>", capped at
// kHopqaMaxResults, in fact-store order.
std::vector<std::string> hopqa_search(const HopqaInstance& inst,
                                      const std::string& relation,
                                      const std::string& entity);

}  // namespace agentrl
