#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sketchwork/lens.hpp"

namespace sketchwork {

/// A scripted change to one model. Deletions are applied first; deleting a
/// node deletes its incident edges. References to missing elements and
/// inserts of taken ids are ignored, so an edit stays applicable when the
/// model shrinks.
struct Edit {
  struct NewEdge {
    Id src;
    Id tgt;
    Id type;
    auto operator<=>(const NewEdge&) const = default;
  };
  std::set<Id> delete_nodes;
  std::set<Id> delete_edges;
  std::map<Id, Id> insert_nodes;  // id -> type
  std::map<Id, NewEdge> insert_edges;

  bool empty() const;
  bool operator==(const Edit&) const = default;
};

TypedInstance apply_edit(const TypedInstance& x, const Edit& edit);
/// x -> apply_edit(x, edit), keeping surviving ids.
UpdateSpan edit_update(const TypedInstance& x, const Edit& edit);

enum class EditKind { insert, remove, mixed };

using LawRng = std::mt19937_64;

/// Draws ids prefix0, prefix1, ... skipping anything in `taken`.
class IdSource {
 public:
  explicit IdSource(std::string prefix) : prefix_(std::move(prefix)) {}
  void reserve(const TypedInstance& x);
  Id next();

 private:
  std::string prefix_;
  std::uint64_t counter_ = 0;
  std::set<Id> taken_;
};

/// A random edit of the given kind whose result is legal for mult and inj
/// declarations, given a legal x. At most `max_nodes`/`max_edges` elements
/// in the result.
Edit random_edit(LawRng& rng, const TypedInstance& x, EditKind kind, IdSource& ids,
                 std::size_t max_nodes, std::size_t max_edges);

/// A random legal instance with at most the given number of elements.
TypedInstance random_legal_instance(LawRng& rng, const MetamodelPtr& m, std::size_t max_nodes,
                                    std::size_t max_edges, IdSource& ids);

/// One law instance: a start model on the left (or on the right when
/// backward) translated to the other side, then edits. falt_balt applies
/// its second edit to the translated model.
struct LawCase {
  std::string law;
  bool backward = false;
  TypedInstance start;
  std::vector<Edit> edits;

  /// Start nodes plus inserted nodes.
  std::size_t size() const;
};

/// Laws checked by check_laws, in report order.
const std::vector<std::string>& law_names();

/// Failure description, or nullopt when the law holds on the case. Also
/// knows "putput_mixed", which composes an arbitrary pair of edits.
std::optional<std::string> evaluate_law(const ViewSpanLens& lens, const LawCase& c);

/// For a weak invertibility case: whether propagating the round-tripped
/// update yields a different corr than the original propagation.
bool round_trip_changes_corr(const ViewSpanLens& lens, const LawCase& c);

/// Whether the case's models and edit results are legal.
bool case_is_legal(const ViewSpanLens& lens, const LawCase& c);

/// Greedily removes elements while the law keeps failing.
LawCase shrink_case(const ViewSpanLens& lens, LawCase c);

struct HarnessConfig {
  std::uint64_t seed = 1;
  std::size_t cases = 500;
  std::size_t max_nodes = 20;
  std::size_t max_edges = 30;
  bool stop_at_first_failure = true;
};

struct LawOutcome {
  std::string law;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::optional<LawCase> counterexample;
  std::string message;
  /// fbf/bfb only: passing cases whose round trip still changed the corr.
  std::size_t corr_differences = 0;

  bool passed() const { return failures == 0; }
};

struct LawReport {
  std::vector<LawOutcome> laws;
  double seconds = 0;

  bool passed() const;
};

/// Runs one law the way check_laws does. Laws outside law_names(), such as
/// "putput_mixed_fwd", get their own seed stream.
LawOutcome check_law(const ViewSpanLens& lens, const HarnessConfig& config,
                     const std::string& law);

/// Runs `cases` generated cases per law (all laws when `only` is empty) and
/// shrinks the first counterexample of each failing law.
LawReport check_laws(const ViewSpanLens& lens, const HarnessConfig& config,
                     const std::vector<std::string>& only = {});

}  // namespace sketchwork
