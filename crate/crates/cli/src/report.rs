//! Deterministic report structures shared by the text and JSON outputs.
//! Reports with the same inputs serialize byte-identically; wall-clock
//! timings are attached only on request.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// A complete command result.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub format_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

/// The classification or query result carried by a report.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    /// A group conjugate to a diagonal subgroup of the torus.
    TypeA { p: u32, rank: usize, normalized: bool },
    /// The rank-3 family in characteristic-0 fields with a cube root of 1
    /// (realized on the diagonal cubic surface; reserved).
    TypeB { p: u32, rank: usize },
    /// The order-16 fibered family, identified by its canonical parameter set.
    TypeC1 {
        p: u32,
        rank: usize,
        canonical: Vec<String>,
        orbit: Vec<Vec<String>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        genus: Option<usize>,
    },
    /// The order-16 family on an intersection of two diagonal quadrics.
    TypeC2 {
        lambdas: Vec<String>,
        group_order: usize,
        hyperplane_fixers: usize,
        mixed_split: usize,
        quadrics_preserved: bool,
        singular_parameters: Vec<String>,
        jbar: Vec<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        fiber: Option<FiberSection>,
    },
    /// The generators do not span an elementary abelian p-group.
    NotElementary { reason: String },
    /// Conjugacy verdict for two groups or parameter sets.
    Equivalence {
        equivalent: bool,
        canonical_a: Vec<String>,
        canonical_b: Vec<String>,
    },
    /// Normalized fixed-curve data of a single involution.
    FixedCurve {
        class: String,
        genus: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        branch: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        infinity_branched: Option<bool>,
    },
    /// Weyl-group orders and genus-bound tables.
    Tables {
        weyl: Vec<WeylRow>,
        hurwitz: Vec<HurwitzRow>,
        #[serde(skip_serializing_if = "Option::is_none")]
        query: Option<QueryRow>,
    },
    /// Built-in verification run.
    Selftest {
        passed: usize,
        failed: usize,
        checks: Vec<CheckRow>,
    },
}

/// One row of the Weyl-order table.
#[derive(Debug, Clone, Serialize)]
pub struct WeylRow {
    pub ell: u32,
    pub root_system: String,
    pub order: u64,
    pub factorization: String,
}

/// One row of the genus-bound table: the largest r with (Z/p)^r acting
/// faithfully on a curve of the given genus.
#[derive(Debug, Clone, Serialize)]
pub struct HurwitzRow {
    pub genus: u64,
    pub p: u64,
    pub max_rank: u32,
}

/// Answer to a single admissibility query against the Weyl table.
#[derive(Debug, Clone, Serialize)]
pub struct QueryRow {
    pub ell: u32,
    pub p: u64,
    pub rank: u32,
    pub admissible: bool,
}

/// One named verification check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

/// Singleton-fiber statistics of the invariant map over a prime field.
#[derive(Debug, Clone, Serialize)]
pub struct FiberSection {
    pub q: u64,
    pub zeta: String,
    pub total: usize,
    pub singletons: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_singleton: Option<String>,
}

fn set_text(elems: &[String]) -> String {
    format!("{{{}}}", elems.join(", "))
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if let Some(field) = &self.field {
            let _ = writeln!(s, "field: {field}");
        }
        match &self.outcome {
            Outcome::TypeA { p, rank, normalized } => {
                let _ = writeln!(s, "outcome: type_a (p = {p}, rank = {rank})");
                let _ = writeln!(
                    s,
                    "conjugate to a diagonal subgroup of the torus{}",
                    if *normalized { " (normalizing conjugation found)" } else { " (already diagonal)" }
                );
            }
            Outcome::TypeB { p, rank } => {
                let _ = writeln!(s, "outcome: type_b (p = {p}, rank = {rank})");
            }
            Outcome::TypeC1 { p, rank, canonical, orbit, genus } => {
                let _ = writeln!(s, "outcome: type_c1 (p = {p}, rank = {rank})");
                let _ = writeln!(s, "canonical parameter set: {}", set_text(canonical));
                let orbit_text: Vec<String> = orbit.iter().map(|o| set_text(o)).collect();
                let _ = writeln!(s, "parameter-set orbit: {}", orbit_text.join(" "));
                if let Some(g) = genus {
                    let _ = writeln!(s, "fixed-curve genus: {g}");
                }
            }
            Outcome::TypeC2 {
                lambdas,
                group_order,
                hyperplane_fixers,
                mixed_split,
                quadrics_preserved,
                singular_parameters,
                jbar,
                fiber,
            } => {
                let _ = writeln!(s, "outcome: type_c2");
                let _ = writeln!(s, "lambdas: {}", set_text(lambdas));
                let _ = writeln!(
                    s,
                    "group order: {group_order} ({hyperplane_fixers} hyperplane fixers, {mixed_split} with a 3+2 split)"
                );
                let _ = writeln!(s, "quadrics preserved: {quadrics_preserved}");
                let _ = writeln!(s, "singular pencil members at: {}", set_text(singular_parameters));
                let _ = writeln!(s, "invariant: {}", set_text(jbar));
                if let Some(f) = fiber {
                    let _ = writeln!(
                        s,
                        "fiber statistics over Fp:{}: {} of {} values have a singleton fiber (zeta = {})",
                        f.q, f.singletons, f.total, f.zeta
                    );
                    if let Some(a) = &f.first_singleton {
                        let _ = writeln!(s, "first singleton at alpha = {a}");
                    }
                }
            }
            Outcome::NotElementary { reason } => {
                let _ = writeln!(s, "outcome: not_elementary");
                let _ = writeln!(s, "reason: {reason}");
            }
            Outcome::Equivalence { equivalent, canonical_a, canonical_b } => {
                let _ = writeln!(s, "outcome: equivalence");
                let _ = writeln!(s, "equivalent: {equivalent}");
                let _ = writeln!(s, "canonical form of the first input: {}", set_text(canonical_a));
                let _ = writeln!(s, "canonical form of the second input: {}", set_text(canonical_b));
            }
            Outcome::FixedCurve { class, genus, branch, infinity_branched } => {
                let _ = writeln!(s, "outcome: fixed_curve ({class})");
                let _ = writeln!(s, "genus: {genus}");
                if let Some(b) = branch {
                    let _ = writeln!(s, "branch polynomial: {b}");
                }
                if let Some(inf) = infinity_branched {
                    let _ = writeln!(s, "branched over infinity: {inf}");
                }
            }
            Outcome::Tables { weyl, hurwitz, query } => {
                let _ = writeln!(s, "outcome: tables");
                let _ = writeln!(s, "ell  system  order        factorization");
                for w in weyl {
                    let _ = writeln!(
                        s,
                        "{:<4} {:<7} {:<12} {}",
                        w.ell, w.root_system, w.order, w.factorization
                    );
                }
                let _ = writeln!(s, "genus  p   max rank");
                for h in hurwitz {
                    let _ = writeln!(s, "{:<6} {:<3} {}", h.genus, h.p, h.max_rank);
                }
                if let Some(q) = query {
                    let _ = writeln!(
                        s,
                        "query: ell = {}, p = {}, rank = {} -> {}",
                        q.ell,
                        q.p,
                        q.rank,
                        if q.admissible { "admissible" } else { "not admissible" }
                    );
                }
            }
            Outcome::Selftest { passed, failed, checks } => {
                for c in checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    match c.millis {
                        Some(ms) => {
                            let _ = writeln!(s, "{status} {:<26} [{ms:>6} ms] {}", c.name, c.detail);
                        }
                        None => {
                            let _ = writeln!(s, "{status} {:<26} {}", c.name, c.detail);
                        }
                    }
                }
                let _ = writeln!(s, "selftest: {passed} passed, {failed} failed");
            }
        }
        for d in &self.diagnostics {
            let _ = writeln!(s, "note: {d}");
        }
        if let Some(t) = &self.timings_ms {
            for (k, v) in t {
                let _ = writeln!(s, "timing {k}: {v} ms");
            }
        }
        s
    }

    /// Renders the report for the terminal or as JSON.
    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}
