#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "personaprobe/app_model.hpp"
#include "personaprobe/error.hpp"
#include "personaprobe/hashing.hpp"
#include "personaprobe/metrics.hpp"
#include "personaprobe/perception.hpp"
#include "personaprobe/simulator.hpp"

using namespace pprobe;

namespace {

const char* kModelFiles[] = {
    PPROBE_SOURCE_DIR "/models/alarm_clock.json",
    PPROBE_SOURCE_DIR "/models/sticky_notes.json",
    PPROBE_SOURCE_DIR "/models/pocket_shop.json",
};

SnapWidget make_widget(const std::string& id, WidgetKind kind,
                       const std::string& label, int x, int y,
                       const std::string& revealed_by = "") {
    SnapWidget w;
    w.id = id;
    w.kind = kind;
    w.label = label;
    w.bounds = Bounds{x, y, 100, 40};
    w.hidden = !revealed_by.empty();
    w.interactable = is_interactable_kind(kind);
    w.revealed_by = revealed_by;
    return w;
}

RawGuiSnapshot demo_snapshot() {
    RawGuiSnapshot snap;
    snap.screen_id = "demo";
    snap.widgets = {
        make_widget("w_art", WidgetKind::kDecoration, "swirl", 0, 0),
        make_widget("w_banner", WidgetKind::kStaticText, "welcome", 10, 10),
        make_widget("w_save", WidgetKind::kButton, "Save", 10, 60),
        make_widget("w_secret", WidgetKind::kMenuItem, "secret", 10, 110,
                    "w_save"),
        make_widget("w_name", WidgetKind::kInputField, "name", 10, 160),
    };
    return snap;
}

// The same eight-per-page windowing the simulator applies, rebuilt from the
// screen declaration so every screen and page can be perceived directly.
RawGuiSnapshot window_of(const ScreenSpec& screen, std::size_t page) {
    RawGuiSnapshot snap;
    snap.screen_id = screen.id;
    snap.page = static_cast<int>(page);
    const std::size_t begin = page * kScreenWindow;
    const std::size_t end =
        std::min(screen.widgets.size(), begin + kScreenWindow);
    for (std::size_t i = begin; i < end; ++i) {
        const WidgetSpec& w = screen.widgets[i];
        SnapWidget s;
        s.id = w.id;
        s.kind = w.kind;
        s.label = w.label;
        s.bounds = w.bounds;
        s.transient = w.transient;
        s.hidden = !w.revealed_by.empty();
        s.core = w.core;
        s.interactable = is_interactable_kind(w.kind);
        s.revealed_by = w.revealed_by;
        s.input_rule = w.input_rule;
        snap.widgets.push_back(std::move(s));
    }
    return snap;
}

double cos_sig(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> random_unit(DetRng& rng) {
    std::vector<double> v(kDocSignatureDim);
    double norm = 0.0;
    for (auto& x : v) {
        x = static_cast<double>(rng.bounded(1000)) / 500.0 - 1.0;
        norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        v[0] = 1.0;
        return v;
    }
    for (auto& x : v) x /= norm;
    return v;
}

}  // namespace

TEST_CASE("filtering drops decorations and static text, keeps the rest") {
    const RawGuiSnapshot filtered = filter_static(demo_snapshot());
    REQUIRE(filtered.widgets.size() == 3);
    CHECK(filtered.widgets[0].id == "w_save");
    CHECK(filtered.widgets[1].id == "w_secret");
    CHECK(filtered.widgets[2].id == "w_name");
    CHECK(filtered.screen_id == "demo");
}

TEST_CASE("transient marking flags reveal-gated widgets and is idempotent") {
    RawGuiSnapshot snap = demo_snapshot();
    snap.widgets[2].transient = true;  // declared transient stays transient

    const RawGuiSnapshot once = mark_transient(snap);
    CHECK(once.widgets[2].transient);          // declared
    CHECK(once.widgets[3].transient);          // reveal-gated
    CHECK_FALSE(once.widgets[4].transient);    // plain field untouched

    const RawGuiSnapshot twice = mark_transient(once);
    for (std::size_t i = 0; i < twice.widgets.size(); ++i) {
        CHECK(twice.widgets[i].transient == once.widgets[i].transient);
    }
}

TEST_CASE("documents list widgets in reading order with stable refs") {
    RawGuiSnapshot snap;
    snap.screen_id = "order";
    snap.widgets = {
        make_widget("w_c", WidgetKind::kButton, "c", 50, 200),
        make_widget("w_b", WidgetKind::kButton, "b", 400, 100),
        make_widget("w_a", WidgetKind::kButton, "a", 20, 100),
        make_widget("w_tie2", WidgetKind::kButton, "t2", 50, 300),
        make_widget("w_tie1", WidgetKind::kButton, "t1", 50, 300),
    };
    const GuiStateDoc doc = textualize(snap);
    REQUIRE(doc.records.size() == 5);
    CHECK(doc.widget_ids ==
          std::vector<std::string>{"w_a", "w_b", "w_c", "w_tie1", "w_tie2"});
    for (int i = 0; i < 5; ++i) CHECK(doc.records[i].ref == i);
    CHECK(doc.ref_of("w_c") == 2);
    CHECK(doc.ref_of("w_missing") == -1);
}

TEST_CASE("unlabeled widgets read as their kind and position") {
    RawGuiSnapshot snap;
    snap.screen_id = "s";
    snap.widgets = {make_widget("w_x", WidgetKind::kButton, "", 40, 60)};
    const GuiStateDoc doc = textualize(snap);
    CHECK(doc.records[0].label == "button at (40,60)");
}

TEST_CASE("hidden widgets stay in the document but are not interactable") {
    const GuiStateDoc doc = perceive(demo_snapshot());
    const int secret = doc.ref_of("w_secret");
    REQUIRE(secret >= 0);
    CHECK_FALSE(doc.records[secret].interactable);
    CHECK(doc.records[secret].transient);
    const int save = doc.ref_of("w_save");
    REQUIRE(save >= 0);
    CHECK(doc.records[save].interactable);
}

TEST_CASE("canonical bytes are reproducible and value-sensitive") {
    const GuiStateDoc a = perceive(demo_snapshot());
    const GuiStateDoc b = perceive(demo_snapshot());
    CHECK(a.bytes == b.bytes);
    CHECK(a.signature == b.signature);

    RawGuiSnapshot with_value = demo_snapshot();
    with_value.widgets[4].live_value = "maria";
    const GuiStateDoc c = perceive(with_value);
    CHECK(c.bytes != a.bytes);
}

TEST_CASE("value-only updates leave the signature identical") {
    RawGuiSnapshot before = demo_snapshot();
    RawGuiSnapshot after = demo_snapshot();
    after.widgets[4].live_value = "abcdef";
    after.widgets[4].bounds.w += 6 * 9;  // live growth

    const GuiStateDoc da = perceive(before);
    const GuiStateDoc db = perceive(after);
    CHECK(da.signature == db.signature);
    CHECK(cos_sig(da.signature, db.signature) == doctest::Approx(1.0));
}

TEST_CASE("revealing a gated widget keeps the state signature identical") {
    RawGuiSnapshot hidden_state = demo_snapshot();
    RawGuiSnapshot revealed_state = demo_snapshot();
    revealed_state.widgets[3].hidden = false;

    const GuiStateDoc before = perceive(hidden_state);
    const GuiStateDoc after = perceive(revealed_state);
    CHECK(before.signature == after.signature);

    PersistenceCache cache;
    cache.insert(before.signature, before);
    const auto hit = cache.lookup(after.signature);
    REQUIRE(hit.has_value());
    CHECK(hit->bytes == before.bytes);
}

TEST_CASE("the cache returns the best match only above the threshold") {
    GuiStateDoc doc_a;
    doc_a.screen_id = "a";
    GuiStateDoc doc_b;
    doc_b.screen_id = "b";

    std::vector<double> sig_a(kDocSignatureDim, 0.0);
    sig_a[0] = 1.0;
    std::vector<double> sig_b(kDocSignatureDim, 0.0);
    sig_b[1] = 1.0;

    PersistenceCache cache;
    CHECK(cache.threshold() == kCacheThreshold);
    CHECK_FALSE(cache.lookup(sig_a).has_value());  // empty cache

    cache.insert(sig_a, doc_a);
    cache.insert(sig_b, doc_b);
    CHECK(cache.size() == 2);

    const auto hit = cache.lookup(sig_a);
    REQUIRE(hit.has_value());
    CHECK(hit->screen_id == "a");
    // Slightly perturbed but still above 0.99 similarity.
    std::vector<double> near = sig_a;
    near[2] = 0.05;
    const auto near_hit = cache.lookup(near);
    REQUIRE(near_hit.has_value());
    CHECK(near_hit->screen_id == "a");

    // Orthogonal probe: similarity 0, no match.
    std::vector<double> far(kDocSignatureDim, 0.0);
    far[3] = 1.0;
    CHECK_FALSE(cache.lookup(far).has_value());
}

TEST_CASE("the threshold comparison is strictly greater-than") {
    GuiStateDoc doc;
    doc.screen_id = "exact";
    std::vector<double> sig(kDocSignatureDim, 0.0);
    sig[0] = 1.0;

    PersistenceCache at_one(1.0);
    at_one.insert(sig, doc);
    // An identical signature scores exactly 1.0, which does not exceed 1.0.
    CHECK_FALSE(at_one.lookup(sig).has_value());

    PersistenceCache below(0.999999);
    below.insert(sig, doc);
    CHECK(below.lookup(sig).has_value());
}

TEST_CASE("cache decisions match a linear-scan oracle on random signatures") {
    DetRng rng(13579);
    PersistenceCache cache;
    std::vector<std::vector<double>> stored;
    for (int i = 0; i < 100; ++i) {
        GuiStateDoc doc;
        doc.screen_id = "state_" + std::to_string(i);
        auto sig = random_unit(rng);
        cache.insert(sig, doc);
        stored.push_back(std::move(sig));
    }

    int hits = 0;
    for (int probe = 0; probe < 100; ++probe) {
        std::vector<double> q;
        if (rng.bounded(2) == 0) {
            // Perturb a stored signature so some probes land above 0.99.
            q = stored[rng.bounded(stored.size())];
            for (int k = 0; k < 3; ++k) {
                q[rng.bounded(q.size())] +=
                    (static_cast<double>(rng.bounded(100)) - 50.0) / 2500.0;
            }
        } else {
            q = random_unit(rng);
        }

        int best = -1;
        double best_sim = -2.0;
        for (std::size_t i = 0; i < stored.size(); ++i) {
            const double sim = cos_sig(stored[i], q);
            if (sim > best_sim) {
                best_sim = sim;
                best = static_cast<int>(i);
            }
        }

        const auto got = cache.lookup(q);
        if (best_sim > kCacheThreshold) {
            REQUIRE(got.has_value());
            CHECK(got->screen_id == "state_" + std::to_string(best));
            ++hits;
        } else {
            CHECK_FALSE(got.has_value());
        }
    }
    CHECK(hits > 0);  // the probe mix must actually exercise the hit path
}

TEST_CASE("invalid cache thresholds are rejected") {
    CHECK_THROWS_AS(PersistenceCache(0.0), Error);
    CHECK_THROWS_AS(PersistenceCache(-0.5), Error);
    CHECK_THROWS_AS(PersistenceCache(1.5), Error);
}

TEST_CASE("perception never drops an interactable widget on any screen") {
    for (const char* path : kModelFiles) {
        const AppModel app = load_app_model_file(path);
        for (const auto& screen : app.screens) {
            const std::size_t pages =
                (screen.widgets.size() + kScreenWindow - 1) / kScreenWindow;
            for (std::size_t page = 0; page < std::max<std::size_t>(pages, 1);
                 ++page) {
                const RawGuiSnapshot snap = window_of(screen, page);
                const GuiStateDoc doc = perceive(snap);
                const std::set<std::string> present(doc.widget_ids.begin(),
                                                    doc.widget_ids.end());
                for (const auto& w : snap.widgets) {
                    CAPTURE(screen.id);
                    CAPTURE(w.id);
                    if (is_interactable_kind(w.kind)) {
                        CHECK(present.count(w.id) == 1);
                    } else {
                        CHECK(present.count(w.id) == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("perceiving a live simulator snapshot yields the reading order") {
    const AppModel app =
        load_app_model_file(PPROBE_SOURCE_DIR "/models/alarm_clock.json");
    SimulatorState sim(&app, 3);
    const GuiStateDoc doc = perceive(sim.current_snapshot());

    // The banner is static text; the five interactive widgets remain, sorted
    // top to bottom.
    CHECK(doc.widget_ids ==
          std::vector<std::string>{"w_filter", "w_alarm_switch",
                                   "w_alarm_item", "w_add", "w_sound_link"});
    CHECK(doc.records[1].value == "on");  // live toggle state
    CHECK(doc.records[1].type == "toggle");
}
