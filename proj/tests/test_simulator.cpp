#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "personaprobe/app_model.hpp"
#include "personaprobe/error.hpp"
#include "personaprobe/hashing.hpp"
#include "personaprobe/simulator.hpp"

using namespace pprobe;

namespace {

// A compact rig covering every effect type, guard, reveal, and bug trigger.
const char* kRigJson = R"json({
  "app_id": "probe_rig",
  "core_task": "exercise every interaction path",
  "entry_screen": "s1",
  "screens": [
    {"id": "s1", "widgets": [
      {"id": "w_tgl", "kind": "toggle", "label": "power", "bounds": [10, 10, 100, 40],
       "actions": {"toggle": [{"type": "toggle_var", "var": "power", "initial": "1"}]}},
      {"id": "w_go", "kind": "button", "label": "next", "bounds": [10, 60, 100, 40],
       "actions": {"click": [{"type": "goto", "target": "s2"}]}},
      {"id": "w_any", "kind": "input_field", "label": "notes", "bounds": [10, 110, 100, 40],
       "input_rule": {"charset": "[a-z]", "max_len": 6, "short_len": 3},
       "actions": {"input": [
         {"type": "accept_input", "validate": "accept_all"},
         {"type": "tag", "value": "typed:dark", "when": {"var": "power", "equals": "0"}}]}},
      {"id": "w_strict", "kind": "input_field", "label": "code", "bounds": [1000, 160, 70, 40],
       "input_rule": {"charset": "[0-9]", "max_len": 4, "short_len": 2},
       "actions": {"input": [{"type": "accept_input", "validate": "reject_invalid"}]}},
      {"id": "w_count", "kind": "button", "label": "count", "bounds": [10, 210, 100, 40],
       "actions": {"click": [{"type": "incr_var", "var": "count"}]}},
      {"id": "w_clear", "kind": "button", "label": "clear", "bounds": [10, 260, 100, 40],
       "actions": {"click": [{"type": "clear_vars", "vars": ["count", "field:w_any"]}]}},
      {"id": "w_reveal", "kind": "button", "label": "open menu", "bounds": [10, 310, 100, 40],
       "actions": {"click": [{"type": "set_var", "var": "menu", "value": "1"}]}},
      {"id": "w_secret", "kind": "menu_item", "label": "secret", "bounds": [10, 360, 100, 40],
       "revealed_by": "w_reveal",
       "actions": {"click": [{"type": "set_var", "var": "secret_used", "value": "1"}]}}
    ]},
    {"id": "s2", "widgets": [
      {"id": "w_banner", "kind": "static_text", "label": "second", "bounds": [10, 10, 100, 40]},
      {"id": "w_back", "kind": "button", "label": "back", "bounds": [10, 60, 100, 40],
       "actions": {"click": [{"type": "goto", "target": "s1"}]}},
      {"id": "w_boom", "kind": "button", "label": "boom", "bounds": [10, 110, 100, 40],
       "actions": {"click": [{"type": "set_var", "var": "boomed", "value": "1"}]}}
    ]}
  ],
  "bugs": [
    {"id": "cb_boom", "kind": "crash", "symptom": "pressing boom crashes",
     "trigger": {"type": "point", "screen": "s2", "widget": "w_boom", "action": "click"}},
    {"id": "fb_badcode", "kind": "functional", "symptom": "garbled code accepted",
     "trigger": {"type": "point", "screen": "s1", "widget": "w_strict", "action": "input",
                 "input_class": "invalid"}},
    {"id": "fb_long", "kind": "functional", "symptom": "long note misrenders",
     "trigger": {"type": "point", "screen": "s1", "widget": "w_any", "action": "input",
                 "input_class": "valid_long"}},
    {"id": "fb_combo", "kind": "functional", "symptom": "counting in the dark misrenders",
     "trigger": {"type": "sequence", "tags": ["toggle:w_tgl:off", "click:w_count"],
                 "anchored": false}},
    {"id": "fb_firstmove", "kind": "functional", "symptom": "menu-first hides the toolbar",
     "trigger": {"type": "sequence", "tags": ["click:w_reveal"], "anchored": true}}
  ]
})json";

// Eleven widgets on one screen: two snapshot pages (8 + 3).
std::string pager_json() {
    std::string widgets;
    for (int i = 0; i < 11; ++i) {
        if (i) widgets += ",";
        widgets += "{\"id\": \"b" + std::to_string(i) +
                   "\", \"kind\": \"button\", \"label\": \"item " +
                   std::to_string(i) + "\", \"bounds\": [10, " +
                   std::to_string(10 + 50 * i) +
                   ", 100, 40], \"actions\": {\"click\": [{\"type\": "
                   "\"set_var\", \"var\": \"hit" +
                   std::to_string(i) + "\", \"value\": \"1\"}]}}";
    }
    return "{\"app_id\": \"pager\", \"core_task\": \"scroll around\", "
           "\"entry_screen\": \"long\", \"screens\": [{\"id\": \"long\", "
           "\"widgets\": [" + widgets + "]}]}";
}

GuiEvent click(const std::string& w) {
    GuiEvent e;
    e.action = ActionType::kClick;
    e.widget_id = w;
    return e;
}

GuiEvent toggle(const std::string& w) {
    GuiEvent e;
    e.action = ActionType::kToggle;
    e.widget_id = w;
    return e;
}

GuiEvent input(const std::string& w, const std::string& text) {
    GuiEvent e;
    e.action = ActionType::kInput;
    e.widget_id = w;
    e.text = text;
    return e;
}

GuiEvent scroll(const std::string& direction) {
    GuiEvent e;
    e.action = ActionType::kScroll;
    e.direction = direction;
    return e;
}

const SnapWidget* find_snap(const RawGuiSnapshot& snap, const std::string& id) {
    for (const auto& w : snap.widgets) {
        if (w.id == id) return &w;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("a fresh session starts on the entry screen with toggles declared") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);
    CHECK(sim.current_screen() == "s1");
    CHECK_FALSE(sim.crashed());
    CHECK(sim.session_events().empty());
    CHECK(sim.triggered_bugs().empty());
    REQUIRE(sim.variables().count("power"));
    CHECK(sim.variables().at("power") == "1");

    const RawGuiSnapshot snap = sim.current_snapshot();
    CHECK(snap.screen_id == "s1");
    CHECK(snap.page == 0);
    CHECK(snap.widgets.size() == 8);
    const SnapWidget* tgl = find_snap(snap, "w_tgl");
    REQUIRE(tgl);
    CHECK(tgl->live_value == "on");
}

TEST_CASE("clicking a navigation widget logs its tag before the transition") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);
    const StepOutcome out = sim.apply_event(click("w_go"));
    CHECK(out.accepted);
    CHECK(out.state_changed);
    CHECK_FALSE(out.input_stored);
    CHECK(sim.current_screen() == "s2");
    REQUIRE(out.new_snapshot.has_value());
    CHECK(out.new_snapshot->screen_id == "s2");
    CHECK(sim.session_events() ==
          std::vector<std::string>{"click:w_go", "goto:s2"});
}

TEST_CASE("toggling flips the variable and the tag names the new state") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    StepOutcome out = sim.apply_event(toggle("w_tgl"));
    CHECK(out.accepted);
    CHECK(sim.variables().at("power") == "0");
    CHECK(sim.session_events().back() == "toggle:w_tgl:off");
    CHECK(find_snap(*out.new_snapshot, "w_tgl")->live_value == "off");

    out = sim.apply_event(toggle("w_tgl"));
    CHECK(sim.variables().at("power") == "1");
    CHECK(sim.session_events().back() == "toggle:w_tgl:on");
    CHECK(find_snap(*out.new_snapshot, "w_tgl")->live_value == "on");
}

TEST_CASE("accepted text is retained and guarded effects respect their guard") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    // power == 1: the guarded tag must stay silent.
    StepOutcome out = sim.apply_event(input("w_any", "ab"));
    CHECK(out.accepted);
    CHECK(out.input_stored);
    CHECK(sim.variables().at("field:w_any") == "ab");
    CHECK(sim.session_events() ==
          std::vector<std::string>{"input:w_any:valid_short"});

    // power == 0: the guard now holds, so the custom tag follows the auto tag.
    sim.apply_event(toggle("w_tgl"));
    out = sim.apply_event(input("w_any", "xy"));
    CHECK(out.accepted);
    const auto& ev = sim.session_events();
    REQUIRE(ev.size() == 4);
    CHECK(ev[1] == "toggle:w_tgl:off");
    CHECK(ev[2] == "input:w_any:valid_short");
    CHECK(ev[3] == "typed:dark");
    CHECK(sim.variables().at("field:w_any") == "xy");
}

TEST_CASE("a rejecting field refuses invalid text without accepting the event") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    StepOutcome out = sim.apply_event(input("w_strict", "77a"));
    CHECK_FALSE(out.accepted);
    CHECK_FALSE(out.input_stored);
    CHECK_FALSE(out.state_changed);
    CHECK(sim.session_events().empty());
    CHECK(sim.variables().count("field:w_strict") == 0);
    CHECK(sim.variables().count("activated:w_strict") == 0);
    // The rejected event never reaches bug evaluation, so a point bug keyed
    // to invalid text on a rejecting field is unreachable.
    CHECK(sim.triggered_bugs().empty());

    out = sim.apply_event(input("w_strict", "77"));
    CHECK(out.accepted);
    CHECK(sim.variables().at("field:w_strict") == "77");
    CHECK(sim.session_events().back() == "input:w_strict:valid_long");
}

TEST_CASE("fields grow with their content and clamp at the canvas edge") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    CHECK(find_snap(sim.current_snapshot(), "w_any")->bounds.w == 100);
    sim.apply_event(input("w_any", "abc"));
    CHECK(find_snap(sim.current_snapshot(), "w_any")->bounds.w == 100 + 3 * 9);

    // w_strict sits at x=1000 with width 70; four digits would grow it to
    // 106 but the canvas is 1080 wide, so it clamps to 80.
    sim.apply_event(input("w_strict", "1234"));
    CHECK(find_snap(sim.current_snapshot(), "w_strict")->bounds.w ==
          kCanvasWidth - 1000);
}

TEST_CASE("counters increment from empty and clear_vars erases state") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    sim.apply_event(click("w_count"));
    sim.apply_event(click("w_count"));
    CHECK(sim.variables().at("count") == "2");

    sim.apply_event(input("w_any", "ab"));
    sim.apply_event(click("w_clear"));
    CHECK(sim.variables().count("count") == 0);
    CHECK(sim.variables().count("field:w_any") == 0);

    sim.apply_event(click("w_count"));
    CHECK(sim.variables().at("count") == "1");
}

TEST_CASE("hidden widgets reject events until their revealer has fired") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    const SnapWidget* secret = find_snap(sim.current_snapshot(), "w_secret");
    REQUIRE(secret);
    CHECK(secret->hidden);

    try {
        sim.apply_event(click("w_secret"));
        FAIL("expected an error for a hidden widget");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kHiddenWidget);
    }

    sim.apply_event(click("w_reveal"));
    CHECK_FALSE(find_snap(sim.current_snapshot(), "w_secret")->hidden);
    const StepOutcome out = sim.apply_event(click("w_secret"));
    CHECK(out.accepted);
    CHECK(sim.variables().at("secret_used") == "1");
}

TEST_CASE("events addressed at absent widgets raise a dedicated error") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);
    try {
        sim.apply_event(click("w_nowhere"));
        FAIL("expected an error for an unknown widget");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kUnknownWidget);
    }
}

TEST_CASE("unsupported actions are rejected taps, not errors") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    CHECK_FALSE(sim.apply_event(click("w_any")).accepted);   // input-only
    CHECK_FALSE(sim.apply_event(toggle("w_go")).accepted);   // click-only
    CHECK_FALSE(sim.apply_event(input("w_count", "x")).accepted);

    sim.apply_event(click("w_go"));
    CHECK_FALSE(sim.apply_event(click("w_banner")).accepted);  // static text
    CHECK(sim.session_events() ==
          std::vector<std::string>{"click:w_go", "goto:s2"});
}

TEST_CASE("a crash bug ends the session permanently") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);
    sim.apply_event(click("w_go"));

    const StepOutcome out = sim.apply_event(click("w_boom"));
    CHECK(out.accepted);
    REQUIRE(out.crash.has_value());
    CHECK(*out.crash == "cb_boom");
    CHECK_FALSE(out.new_snapshot.has_value());
    CHECK(sim.crashed());
    CHECK(sim.triggered_bugs().count("cb_boom") == 1);

    CHECK_THROWS_AS(sim.current_snapshot(), Error);
    try {
        sim.apply_event(click("w_back"));
        FAIL("expected the crashed session to refuse further events");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::kSessionCrashed);
    }
}

TEST_CASE("point bugs keyed to an input class fire only for that class") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState sim(&app, 7);

    StepOutcome out = sim.apply_event(input("w_any", "ab"));
    CHECK(out.functional_hits.empty());

    out = sim.apply_event(input("w_any", "abcd"));
    CHECK(out.functional_hits == std::vector<std::string>{"fb_long"});

    // Already triggered: a second long input reports nothing new.
    out = sim.apply_event(input("w_any", "abcde"));
    CHECK(out.functional_hits.empty());
    CHECK(sim.triggered_bugs().count("fb_long") == 1);
}

TEST_CASE("sequence bugs match in-order, not necessarily adjacent, tags") {
    const AppModel app = load_app_model_json(kRigJson);

    SUBCASE("the pair in order fires even with noise in between") {
        SimulatorState sim(&app, 7);
        sim.apply_event(toggle("w_tgl"));            // toggle:w_tgl:off
        sim.apply_event(input("w_any", "ab"));       // unrelated noise
        const StepOutcome out = sim.apply_event(click("w_count"));
        CHECK(out.functional_hits == std::vector<std::string>{"fb_combo"});
    }

    SUBCASE("the pair out of order stays silent until re-completed") {
        SimulatorState sim(&app, 7);
        CHECK(sim.apply_event(click("w_count")).functional_hits.empty());
        CHECK(sim.apply_event(toggle("w_tgl")).functional_hits.empty());
        const StepOutcome out = sim.apply_event(click("w_count"));
        CHECK(out.functional_hits == std::vector<std::string>{"fb_combo"});
    }
}

TEST_CASE("anchored sequences require the very first session event to match") {
    const AppModel app = load_app_model_json(kRigJson);

    SUBCASE("menu opened first") {
        SimulatorState sim(&app, 7);
        const StepOutcome out = sim.apply_event(click("w_reveal"));
        CHECK(out.functional_hits == std::vector<std::string>{"fb_firstmove"});
    }

    SUBCASE("anything else first blocks the anchor forever") {
        SimulatorState sim(&app, 7);
        sim.apply_event(click("w_count"));
        CHECK(sim.apply_event(click("w_reveal")).functional_hits.empty());
        CHECK(sim.triggered_bugs().empty());
    }
}

TEST_CASE("bug bookkeeping matches an independent trigger oracle") {
    const AppModel app = load_app_model_json(kRigJson);

    // Local restatements of the trigger semantics.
    const InputRule any_rule{CharClass::parse("[a-z]"), 6, 3};
    const auto is_long = [&](const std::string& text) {
        if (text.size() > any_rule.max_len || text.size() < any_rule.short_len)
            return false;
        return std::all_of(text.begin(), text.end(), [&](char c) {
            return any_rule.charset.contains(c);
        });
    };
    const auto subseq = [](const std::vector<std::string>& needle,
                           const std::vector<std::string>& hay) {
        std::size_t i = 0;
        for (const auto& h : hay) {
            if (i < needle.size() && h == needle[i]) ++i;
        }
        return i == needle.size();
    };

    const std::vector<std::string> texts = {"ab", "abc", "abcdef", "77",
                                            "77a", "zzzzzzz"};
    DetRng rng(20260818);
    for (int iter = 0; iter < 200; ++iter) {
        SimulatorState sim(&app, 7);
        std::set<std::string> expected;
        for (int step = 0; step < 25 && !sim.crashed(); ++step) {
            GuiEvent ev;
            switch (rng.bounded(6)) {
                case 0: ev = toggle("w_tgl"); break;
                case 1: ev = click("w_count"); break;
                case 2: ev = click("w_reveal"); break;
                case 3: ev = click("w_clear"); break;
                case 4: ev = click("w_secret"); break;
                default:
                    ev = input(rng.bounded(2) ? "w_any" : "w_strict",
                               texts[rng.bounded(texts.size())]);
            }
            StepOutcome out;
            try {
                out = sim.apply_event(ev);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::kHiddenWidget);
                continue;
            }
            if (out.accepted && ev.action == ActionType::kInput &&
                ev.widget_id == "w_any" && is_long(ev.text)) {
                expected.insert("fb_long");
            }
            if (subseq({"toggle:w_tgl:off", "click:w_count"},
                       sim.session_events())) {
                expected.insert("fb_combo");
            }
            if (!sim.session_events().empty() &&
                sim.session_events().front() == "click:w_reveal") {
                expected.insert("fb_firstmove");
            }
            CHECK(sim.triggered_bugs() == expected);
        }
        // Unreachable by construction: rejected events never evaluate bugs.
        CHECK(sim.triggered_bugs().count("fb_badcode") == 0);
    }
}

TEST_CASE("long screens page eight widgets at a time") {
    const AppModel app = load_app_model_json(pager_json());
    SimulatorState sim(&app, 7);

    RawGuiSnapshot snap = sim.current_snapshot();
    CHECK(snap.page == 0);
    REQUIRE(snap.widgets.size() == 8);
    CHECK(snap.widgets.front().id == "b0");
    CHECK(snap.widgets.back().id == "b7");
    CHECK(snap.can_scroll_down);
    CHECK_FALSE(snap.can_scroll_up);

    StepOutcome out = sim.apply_event(scroll("down"));
    CHECK(out.accepted);
    CHECK(out.state_changed);
    CHECK(sim.session_events().back() == "scroll:long:down");
    snap = *out.new_snapshot;
    CHECK(snap.page == 1);
    REQUIRE(snap.widgets.size() == 3);
    CHECK(snap.widgets.front().id == "b8");
    CHECK(snap.widgets.back().id == "b10");
    CHECK_FALSE(snap.can_scroll_down);
    CHECK(snap.can_scroll_up);

    // Past the last page: rejected and unlogged.
    out = sim.apply_event(scroll("down"));
    CHECK_FALSE(out.accepted);
    CHECK(sim.session_events().back() == "scroll:long:down");
    CHECK(sim.session_events().size() == 1);

    out = sim.apply_event(scroll("up"));
    CHECK(out.accepted);
    CHECK(out.new_snapshot->page == 0);
    CHECK(sim.session_events().back() == "scroll:long:up");

    CHECK_FALSE(sim.apply_event(scroll("up")).accepted);
}

TEST_CASE("state signatures separate distinct states and match equal ones") {
    const AppModel app = load_app_model_json(kRigJson);
    SimulatorState a(&app, 1);
    SimulatorState b(&app, 2);  // the seed is not part of the app state
    CHECK(a.state_signature() == b.state_signature());

    a.apply_event(click("w_count"));
    CHECK(a.state_signature() != b.state_signature());
    b.apply_event(click("w_count"));
    CHECK(a.state_signature() == b.state_signature());

    const std::uint64_t before = a.state_signature();
    const StepOutcome out = a.apply_event(toggle("w_go"));  // unsupported
    CHECK_FALSE(out.accepted);
    CHECK_FALSE(out.state_changed);
    CHECK(a.state_signature() == before);
}

TEST_CASE("identical event streams replay identical outcome streams") {
    const AppModel app = load_app_model_json(kRigJson);
    const std::vector<GuiEvent> script = {
        toggle("w_tgl"),        click("w_reveal"),
        input("w_any", "abcd"), click("w_count"),
        click("w_secret"),      input("w_strict", "12"),
        click("w_clear"),       click("w_go"),
        click("w_back"),        input("w_any", "zz"),
    };

    SimulatorState a(&app, 99);
    SimulatorState b(&app, 99);
    for (const auto& ev : script) {
        const StepOutcome oa = a.apply_event(ev);
        const StepOutcome ob = b.apply_event(ev);
        CHECK(oa.accepted == ob.accepted);
        CHECK(oa.state_changed == ob.state_changed);
        CHECK(oa.input_stored == ob.input_stored);
        CHECK(oa.crash == ob.crash);
        CHECK(oa.functional_hits == ob.functional_hits);
        CHECK(a.state_signature() == b.state_signature());
    }
    CHECK(a.session_events() == b.session_events());
    CHECK(a.variables() == b.variables());
    CHECK(a.triggered_bugs() == b.triggered_bugs());
}

TEST_CASE("shipped fixtures wire their triggers the same way") {
    const AppModel alarm =
        load_app_model_file(PPROBE_SOURCE_DIR "/models/alarm_clock.json");
    SimulatorState sim(&alarm, 7);
    const StepOutcome out = sim.apply_event(click("w_filter"));
    CHECK(out.accepted);
    CHECK(out.functional_hits == std::vector<std::string>{"fb_filter"});

    const AppModel notes =
        load_app_model_file(PPROBE_SOURCE_DIR "/models/sticky_notes.json");
    SimulatorState ns(&notes, 7);
    ns.apply_event(click("w_new_note"));
    CHECK(ns.current_screen() == "compose");
    const StepOutcome body =
        ns.apply_event(input("w_body", "a long enough body"));
    CHECK(body.accepted);
    CHECK(body.functional_hits == std::vector<std::string>{"fb_overlap"});
}
