#pragma once

#include <string>

#include "sseq/filtered.hpp"

// Builders, the .ces text container, and deterministic report emission
// backing the command-line driver.

namespace sseq {

// The whole-plane product tower X_s = prod_{i >= |s|} Hk, with transition
// maps the identity on matching factors except for one gained factor per
// step s <= 0 and one dropped factor per step s > 0. Every H(i,j) is then
// a sum of gained coordinates in degree 0 plus dropped coordinates in
// degree 1, and every eta and del is a coefficient-1 diagonal truncated to
// the target coordinates. Extended system, symbolic tails, window [-6, 6].
CESystem example_8_1(int p = 2);

// Sectioned key-value container: [system], then [object i j],
// [eta i j -> i' j'], [del i j k] in lexicographic index order. Finite
// contiguous spaces print as `fin n` with row-major matrices; everything
// else uses coordinate descriptors and diagonal/column term lists.
// write_ces(read_ces(text)) == text for files written by write_ces.
std::string write_ces(const CESystem& sys);
CESystem read_ces(const std::string& text);
void write_ces_file(const std::string& path, const CESystem& sys);
CESystem read_ces_file(const std::string& path);

// FNV-1a hash of the container text, as 16 hex digits.
std::string system_digest(const CESystem& sys);

struct ReportOptions {
    int rmax = 0;        // max page for tables; 0 picks window width + 1
    int probe = 0;       // tower probe override for the limit computations
    bool theorems = true;  // convergence and W = ker kappa certificates
};

struct DiagnoseResult {
    std::string text;            // rendered report, byte-stable per input
    bool valid = false;
    bool hypotheses_met = true;  // false when a certificate aborted
};

DiagnoseResult diagnose(const CESystem& sys, const ReportOptions& opt = {});

// One row per (r, s, t) with a dimension or descriptor column.
std::string pages_csv(const CESystem& sys, int rmax);
// Whole-plane chart of page r: a dot per nonzero (s, t) cell labelled with
// its dimension or descriptor, an arrow per nonzero d^r component.
std::string pages_svg(const CESystem& sys, int r);
// Four-term exact sequence summary as report text.
std::string interchange_summary(const CESystem& sys, int probe = 0);

}  // namespace sseq
