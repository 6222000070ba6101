#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "personaprobe/snapshot.hpp"

// GUI state understanding downstream of the structured snapshot: strip
// non-informative widgets, flag ephemeral ones, render a canonical textual
// state document, and cache near-duplicate states.

namespace pprobe {

inline constexpr std::size_t kDocSignatureDim = 128;
inline constexpr double kCacheThreshold = 0.99;

struct DocRecord {
    int ref = 0;              // index in reading order; operation targets
    std::string type;         // widget kind name
    std::string label;        // original label or coordinate fallback
    std::string value;        // live value ("" for stateless widgets)
    bool interactable = false;  // false while the widget is still hidden
    bool transient = false;
    Bounds bounds;            // live bounds
};

struct GuiStateDoc {
    std::string screen_id;
    std::vector<DocRecord> records;

    // Parallel to records: the backing widget ids. Internal plumbing for
    // ref<->widget resolution; never part of the canonical bytes.
    std::vector<std::string> widget_ids;

    // Unit-norm feature vector over (type, label tokens, transient flag) of
    // every record. Values are deliberately excluded so value-only updates of
    // one screen stay near-identical.
    std::vector<double> signature;

    // Canonical serialization: same state in, same bytes out.
    std::string bytes;

    int ref_of(std::string_view widget_id) const {
        for (std::size_t i = 0; i < widget_ids.size(); ++i) {
            if (widget_ids[i] == widget_id) return static_cast<int>(i);
        }
        return -1;
    }
};

// Drops decoration widgets and non-interactable static text; interactable
// widgets always survive.
RawGuiSnapshot filter_static(const RawGuiSnapshot& snapshot);

// Flags as transient everything the model declares transient plus everything
// gated behind a reveal (revealed_by set). Idempotent.
RawGuiSnapshot mark_transient(const RawGuiSnapshot& snapshot);

// Canonical document in reading order (y, then x, then id). Unlabeled
// widgets get the coordinate fallback descriptor. Expects the snapshot to be
// filtered and transient-marked already.
GuiStateDoc textualize(const RawGuiSnapshot& snapshot);

// Convenience: filter -> mark -> textualize.
GuiStateDoc perceive(const RawGuiSnapshot& snapshot);

// Near-duplicate state store. Lookup returns the stored document with the
// highest cosine similarity when that similarity exceeds the threshold.
class PersistenceCache {
  public:
    explicit PersistenceCache(double threshold = kCacheThreshold);

    std::optional<GuiStateDoc> lookup(const std::vector<double>& sig) const;
    void insert(const std::vector<double>& sig, GuiStateDoc doc);

    std::size_t size() const { return entries_.size(); }
    double threshold() const { return threshold_; }

  private:
    double threshold_;
    std::vector<std::pair<std::vector<double>, GuiStateDoc>> entries_;
};

}  // namespace pprobe
