#include "personaprobe/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "personaprobe/hashing.hpp"

namespace pprobe {

namespace {

std::string kind_word(WidgetKind kind) {
    std::string word(widget_kind_name(kind));
    std::replace(word.begin(), word.end(), '_', ' ');
    return word;
}

double norm2(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x * x;
    return std::sqrt(sum);
}

void unit_normalize(std::vector<double>& v, ErrorCode on_zero) {
    const double n = norm2(v);
    if (n == 0.0) raise(on_zero, "cannot normalize a zero vector");
    for (double& x : v) x /= n;
}

}  // namespace

std::string normalize_label(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    bool pending_space = false;
    for (char raw : label) {
        char c = raw;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                          c == '(' || c == ')' || c == ',';
        if (keep) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += c;
        } else {
            pending_space = true;  // any other character acts as whitespace
        }
    }
    return out;
}

std::string fallback_descriptor(WidgetKind kind, const Bounds& bounds) {
    return kind_word(kind) + " at (" + std::to_string(bounds.x) + "," +
           std::to_string(bounds.y) + ")";
}

std::string purify_phrase(ActionType action, WidgetKind kind,
                          std::string_view raw_label, const Bounds& bounds,
                          std::string_view direction) {
    if (action == ActionType::kScroll) {
        return direction == "up" ? "scroll up" : "scroll down";
    }
    const std::string verb(action_name(action));
    const std::string label = normalize_label(raw_label);
    if (label.empty()) {
        return verb + " " + fallback_descriptor(kind, bounds);
    }
    if (kind == WidgetKind::kButton) {
        return verb + " " + label + " button";
    }
    return verb + " " + label;
}

std::vector<double> embed_phrase(std::string_view phrase) {
    std::vector<double> v(kEmbedDim, 0.0);
    for (const auto& token : whitespace_tokens(phrase)) {
        v[fnv1a64(token) % kEmbedDim] += 1.0;
    }
    const double n = norm2(v);
    if (n == 0.0) {
        v[0] = 1.0;  // degenerate (empty) phrase: fixed unit vector
        return v;
    }
    for (double& x : v) x /= n;
    return v;
}

std::vector<double> encode_path(const std::vector<std::vector<double>>& phrases,
                                double gamma) {
    if (phrases.empty()) {
        raise(ErrorCode::kEmptyPath, "cannot encode an empty path");
    }
    const std::size_t dim = phrases.front().size();
    for (const auto& p : phrases) {
        if (p.size() != dim) {
            raise(ErrorCode::kInvalidArgument,
                  "phrase vectors must share one dimension");
        }
    }

    const std::size_t T = phrases.size();
    std::vector<double> out(2 * dim, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        const double wf = std::pow(gamma, static_cast<double>(T - 1 - t));
        const double wb = std::pow(gamma, static_cast<double>(t));
        for (std::size_t d = 0; d < dim; ++d) {
            out[d] += wf * phrases[t][d];
            out[dim + d] += wb * phrases[t][d];
        }
    }
    unit_normalize(out, ErrorCode::kZeroVector);
    return out;
}

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) {
        raise(ErrorCode::kInvalidArgument, "cosine: dimension mismatch");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        raise(ErrorCode::kZeroVector, "cosine of a zero vector is undefined");
    }
    return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double cohesion(const std::vector<std::vector<double>>& paths) {
    if (paths.size() < 2) {
        raise(ErrorCode::kInsufficientPaths,
              "cohesion needs at least two paths");
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            sum += cosine(paths[i], paths[j]);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

double separation(const std::vector<std::vector<double>>& paths_m,
                  const std::vector<std::vector<double>>& paths_n) {
    if (paths_m.empty() || paths_n.empty()) {
        raise(ErrorCode::kInsufficientPaths,
              "separation needs paths on both sides");
    }
    double sum = 0.0;
    for (const auto& m : paths_m) {
        for (const auto& n : paths_n) {
            sum += cosine(m, n);
        }
    }
    return sum / static_cast<double>(paths_m.size() * paths_n.size());
}

}  // namespace pprobe
