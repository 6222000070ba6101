#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "personaprobe/app_model.hpp"
#include "personaprobe/error.hpp"

// Trace analytics primitives: verb-object phrase purification, deterministic
// phrase embedding, order-sensitive path encoding, and the similarity
// aggregates (cohesion within an agent's runs, separation between agents).

namespace pprobe {

// Phrase-embedding dimension; path vectors are twice this (forward+backward).
inline constexpr std::size_t kEmbedDim = 64;

// Decay for the order-sensitive path sums; forward weights the end of the
// path, backward weights the start.
inline constexpr double kPathDecay = 0.8;

// Lowercases and keeps letters, digits, spaces, parentheses and commas
// (parentheses/commas survive so coordinate fallbacks stay intact); every
// other character becomes a space; whitespace collapsed and trimmed.
std::string normalize_label(std::string_view label);

// "button at (40,60)" — descriptor for widgets with no usable label.
std::string fallback_descriptor(WidgetKind kind, const Bounds& bounds);

// One verb-object phrase per executed event:
//   click  "Save" button        -> "click save button"
//   input  "Alarm Time" field   -> "input alarm time"
//   click  unlabeled button     -> "click button at (40,60)"
//   scroll                      -> "scroll down" / "scroll up"
// Always returns a non-empty phrase.
std::string purify_phrase(ActionType action, WidgetKind kind,
                          std::string_view raw_label, const Bounds& bounds,
                          std::string_view direction = "");

// Deterministic bag-of-tokens embedding: whitespace tokens hashed into
// kEmbedDim buckets (+1.0 each), unit-normalized.
std::vector<double> embed_phrase(std::string_view phrase);

// Order-sensitive aggregation of phrase vectors:
//   forward  f = sum_t gamma^(T-t) e_t   (end of the path dominates)
//   backward b = sum_t gamma^(t-1) e_t   (start of the path dominates)
// Result is the unit-normalized concatenation [f; b].
// Throws Error(kEmptyPath) for an empty list.
std::vector<double> encode_path(const std::vector<std::vector<double>>& phrases,
                                double gamma = kPathDecay);

// u.v / (|u||v|), clamped to [-1, 1]. Throws Error(kZeroVector) when either
// norm is zero and Error(kInvalidArgument) on dimension mismatch.
double cosine(const std::vector<double>& u, const std::vector<double>& v);

// Mean pairwise cosine over all n(n-1)/2 unordered pairs; needs n >= 2
// (Error(kInsufficientPaths) otherwise).
double cohesion(const std::vector<std::vector<double>>& paths);

// Mean cosine over the |M| x |N| cross pairs; both sides non-empty
// (Error(kInsufficientPaths) otherwise). Symmetric in its arguments.
double separation(const std::vector<std::vector<double>>& paths_m,
                  const std::vector<std::vector<double>>& paths_n);

}  // namespace pprobe
