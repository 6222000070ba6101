#include "personaprobe/perception.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "personaprobe/hashing.hpp"
#include "personaprobe/metrics.hpp"

namespace pprobe {

namespace {

std::vector<double> doc_signature(const std::vector<DocRecord>& records) {
    std::vector<double> sig(kDocSignatureDim, 0.0);
    for (const auto& r : records) {
        sig[fnv1a64("type:" + r.type) % kDocSignatureDim] += 1.0;
        for (const auto& token : whitespace_tokens(r.label)) {
            sig[fnv1a64(token) % kDocSignatureDim] += 1.0;
        }
        sig[fnv1a64(r.transient ? "transient:1" : "transient:0") %
            kDocSignatureDim] += 1.0;
    }
    double norm = 0.0;
    for (double x : sig) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        sig[0] = 1.0;  // empty document: fixed unit vector
        return sig;
    }
    for (double& x : sig) x /= norm;
    return sig;
}

}  // namespace

RawGuiSnapshot filter_static(const RawGuiSnapshot& snapshot) {
    RawGuiSnapshot out = snapshot;
    out.widgets.clear();
    for (const auto& w : snapshot.widgets) {
        if (w.kind == WidgetKind::kDecoration) continue;
        if (w.kind == WidgetKind::kStaticText) continue;
        out.widgets.push_back(w);
    }
    return out;
}

RawGuiSnapshot mark_transient(const RawGuiSnapshot& snapshot) {
    RawGuiSnapshot out = snapshot;
    for (auto& w : out.widgets) {
        if (!w.revealed_by.empty()) w.transient = true;
    }
    return out;
}

GuiStateDoc textualize(const RawGuiSnapshot& snapshot) {
    std::vector<const SnapWidget*> ordered;
    ordered.reserve(snapshot.widgets.size());
    for (const auto& w : snapshot.widgets) ordered.push_back(&w);
    std::sort(ordered.begin(), ordered.end(),
              [](const SnapWidget* a, const SnapWidget* b) {
                  if (a->bounds.y != b->bounds.y) return a->bounds.y < b->bounds.y;
                  if (a->bounds.x != b->bounds.x) return a->bounds.x < b->bounds.x;
                  return a->id < b->id;
              });

    GuiStateDoc doc;
    doc.screen_id = snapshot.screen_id;
    int ref = 0;
    for (const SnapWidget* w : ordered) {
        DocRecord r;
        r.ref = ref++;
        r.type = std::string(widget_kind_name(w->kind));
        r.label = w->label.empty() ? fallback_descriptor(w->kind, w->bounds)
                                   : w->label;
        r.value = w->live_value;
        r.interactable = w->interactable && !w->hidden;
        r.transient = w->transient;
        r.bounds = w->bounds;
        doc.records.push_back(std::move(r));
        doc.widget_ids.push_back(w->id);
    }

    nlohmann::ordered_json body;
    body["screen_id"] = doc.screen_id;
    nlohmann::ordered_json widgets = nlohmann::ordered_json::array();
    for (const auto& r : doc.records) {
        nlohmann::ordered_json rec;
        rec["ref"] = r.ref;
        rec["type"] = r.type;
        rec["label"] = r.label;
        rec["value"] = r.value;
        rec["interactable"] = r.interactable;
        rec["transient"] = r.transient;
        rec["bounds"] = {r.bounds.x, r.bounds.y, r.bounds.w, r.bounds.h};
        widgets.push_back(std::move(rec));
    }
    body["widgets"] = std::move(widgets);
    doc.bytes = body.dump();
    doc.signature = doc_signature(doc.records);
    return doc;
}

GuiStateDoc perceive(const RawGuiSnapshot& snapshot) {
    return textualize(mark_transient(filter_static(snapshot)));
}

PersistenceCache::PersistenceCache(double threshold) : threshold_(threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        raise(ErrorCode::kInvalidArgument,
              "cache threshold must lie in (0, 1]");
    }
}

std::optional<GuiStateDoc> PersistenceCache::lookup(
    const std::vector<double>& sig) const {
    const GuiStateDoc* best = nullptr;
    double best_sim = -2.0;
    for (const auto& [stored_sig, doc] : entries_) {
        const double sim = cosine(stored_sig, sig);
        if (sim > best_sim) {
            best_sim = sim;
            best = &doc;
        }
    }
    if (best && best_sim > threshold_) return *best;
    return std::nullopt;
}

void PersistenceCache::insert(const std::vector<double>& sig, GuiStateDoc doc) {
    entries_.emplace_back(sig, std::move(doc));
}

}  // namespace pprobe
