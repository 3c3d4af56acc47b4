//! Subcommand implementations: argument handling, the classification
//! decision tree, and report assembly with process exit codes.

use crate::parser::{parse_constant_list, parse_map_expr, to_plane_map};
use crate::report::{
    CheckRow, FiberSection, HurwitzRow, Outcome, QueryRow, Report, WeylRow,
};
use crate::{CliError, Result};
use clap::{Parser, Subcommand};
use cremona_core::birmap::{
    closure, fixed_curve, is_diagonal_torus_shape, ElementaryGroup, NFData, PlaneMap,
};
use cremona_core::conjclass::{are_conjugate_c1, canonicalize, conj_class, recover_i, IndexSet};
use cremona_core::delpezzo::{
    fiber_statistics, gs_verify, hurwitz_max_rank, jbar, pencil_singular, weyl_table,
    weyl_table_query, QuarticDP,
};
use cremona_core::error::Error as CoreError;
use cremona_core::field::{FieldElement, FieldKind};
use cremona_core::intfactor::is_prime_u64;
use cremona_core::moebius::{conjugate_to_cp, conjugate_to_cp_base};
use cremona_core::selfcheck::run_all;
use cremona_core::semidirect::{conjugate_all, normalize_rank2_odd, normalize_rank4_two, SemidirectElt};
use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

/// Exact classifier for p-elementary groups of birational plane maps.
#[derive(Debug, Parser)]
#[command(name = "cremona", version, about)]
pub struct Cli {
    /// Emit the report as JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timings in the report
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the group generated by fibered plane maps
    Classify {
        /// Base field: QQ, Fp:<q>, or cyclo:<n>
        #[arg(long, default_value = "QQ")]
        field: String,
        /// The elementary prime p
        #[arg(long)]
        p: u32,
        /// Generator maps, e.g. "(-x, y)" "(x, (x^2 + x^-2)/y)"
        #[arg(required = true)]
        gens: Vec<String>,
    },
    /// Decide conjugacy of two groups of the order-16 fibered family
    Conjugate {
        /// Base field: QQ, Fp:<q>, or cyclo:<n>
        #[arg(long, default_value = "QQ")]
        field: String,
        /// First parameter set, comma-separated constants ("" for empty)
        #[arg(long, allow_hyphen_values = true)]
        set_a: Option<String>,
        /// Second parameter set
        #[arg(long, allow_hyphen_values = true)]
        set_b: Option<String>,
        /// First generator list, maps separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        gens_a: Option<String>,
        /// Second generator list, maps separated by ';'
        #[arg(long, allow_hyphen_values = true)]
        gens_b: Option<String>,
    },
    /// Compute the normalized fixed-curve data of a single involution
    Invariant {
        /// Base field: QQ, Fp:<q>, or cyclo:<n>
        #[arg(long, default_value = "QQ")]
        field: String,
        /// The involution, e.g. "(x, (x^2 + x^-2 - 3)/y)"
        map: String,
    },
    /// Analyze the surface cut out by two diagonal quadrics in P^4
    Delpezzo {
        /// Base field: QQ, Fp:<q>, or cyclo:<n>
        #[arg(long, default_value = "QQ")]
        field: String,
        /// Five pairwise distinct constants, comma-separated
        #[arg(long, allow_hyphen_values = true)]
        lambdas: String,
        /// Also compute singleton-fiber statistics of the invariant over Fp:<q>
        #[arg(long)]
        fiber: Option<u64>,
    },
    /// Print the Weyl-order and genus-bound tables
    Jtable {
        /// Query: degree parameter of the root system (4..=8)
        #[arg(long)]
        ell: Option<u32>,
        /// Query: the prime p
        #[arg(long)]
        p: Option<u64>,
        /// Query: the rank r
        #[arg(long)]
        rank: Option<u32>,
    },
    /// Run the built-in verification checks
    Selftest {
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 0x5eed_cafe)]
        seed: u64,
    },
}

/// Runs a parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let json = cli.json;
    match execute(cli) {
        Ok((report, code)) => {
            let out = report.render(json);
            let mut stdout = std::io::stdout().lock();
            let written = if json {
                writeln!(stdout, "{out}")
            } else {
                write!(stdout, "{out}")
            };
            match written.and_then(|_| stdout.flush()) {
                Ok(()) => code,
                // the reader hung up (e.g. piping into `head`): not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => code,
                Err(e) => {
                    eprintln!("error: cannot write the report: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Timer {
    enabled: bool,
    map: BTreeMap<String, u128>,
    last: Instant,
}

impl Timer {
    fn new(enabled: bool) -> Self {
        Timer { enabled, map: BTreeMap::new(), last: Instant::now() }
    }

    fn mark(&mut self, label: &str) {
        if self.enabled {
            self.map.insert(label.to_string(), self.last.elapsed().as_millis());
            self.last = Instant::now();
        }
    }

    fn finish(self) -> Option<BTreeMap<String, u128>> {
        if self.enabled {
            Some(self.map)
        } else {
            None
        }
    }
}

fn execute(cli: Cli) -> Result<(Report, i32)> {
    let timings = cli.timings;
    match cli.command {
        Command::Classify { field, p, gens } => cmd_classify(&field, p, &gens, timings),
        Command::Conjugate { field, set_a, set_b, gens_a, gens_b } => {
            cmd_conjugate(&field, set_a, set_b, gens_a, gens_b, timings)
        }
        Command::Invariant { field, map } => cmd_invariant(&field, &map, timings),
        Command::Delpezzo { field, lambdas, fiber } => {
            cmd_delpezzo(&field, &lambdas, fiber, timings)
        }
        Command::Jtable { ell, p, rank } => cmd_jtable(ell, p, rank, timings),
        Command::Selftest { seed } => cmd_selftest(seed, timings),
    }
}

fn report(
    command: &str,
    field: Option<&FieldKind>,
    outcome: Outcome,
    diagnostics: Vec<String>,
    timer: Timer,
) -> Report {
    Report {
        format_version: 1,
        command: command.to_string(),
        field: field.map(|k| k.to_string()),
        outcome,
        diagnostics,
        timings_ms: timer.finish(),
    }
}

fn print_elems(elems: &[FieldElement]) -> Vec<String> {
    elems.iter().map(|e| e.to_string()).collect()
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(field: &str, p: u32, gens: &[String], timings: bool) -> Result<(Report, i32)> {
    let kind: FieldKind = field.parse().map_err(CliError::Core)?;
    if p < 2 || !is_prime_u64(p as u64) {
        return Err(CliError::Input(format!("p must be a prime, got {p}")));
    }
    let mut timer = Timer::new(timings);
    let maps = gens
        .iter()
        .map(|s| to_plane_map(&parse_map_expr(s)?, &kind))
        .collect::<Result<Vec<PlaneMap>>>()?;
    timer.mark("parse");
    let group = match closure(&maps, p, 4) {
        Ok(g) => g,
        Err(
            e @ (CoreError::NonCommuting(..)
            | CoreError::WrongOrder { .. }
            | CoreError::ClosureExceeded { .. }),
        ) => {
            timer.mark("closure");
            let outcome = Outcome::NotElementary { reason: e.to_string() };
            return Ok((report("classify", Some(&kind), outcome, Vec::new(), timer), 0));
        }
        Err(e) => return Err(e.into()),
    };
    timer.mark("closure");
    let mut diagnostics = Vec::new();
    let outcome = if is_diagonal_torus_shape(&group.elements) {
        Outcome::TypeA { p, rank: group.rank, normalized: false }
    } else if p == 2 {
        if group.rank != 4 {
            return Err(CliError::Input(format!(
                "a 2-elementary group of rank {} outside the diagonal torus is not classified here; the fibered family has rank 4",
                group.rank
            )));
        }
        let (index, was_normalized) = recover_index(&group)?;
        if was_normalized {
            diagnostics
                .push("the group was conjugated to standard coordinates before reading its parameters".into());
        }
        let class = conj_class(&index);
        let k = class.canonical.len();
        Outcome::TypeC1 {
            p: 2,
            rank: 4,
            canonical: print_elems(class.canonical.elems()),
            orbit: class.orbit.iter().map(|o| print_elems(o.elems())).collect(),
            genus: if k == 0 { None } else { Some(2 * k - 1) },
        }
    } else {
        match group.rank {
            1 => classify_rank1_odd(&group, p)?,
            2 => {
                let semis: Vec<SemidirectElt> =
                    group.elements.iter().map(|g| g.to_semidirect()).collect();
                normalize_rank2_odd(&semis, p)?;
                Outcome::TypeA { p, rank: 2, normalized: true }
            }
            r => {
                return Err(CliError::Input(format!(
                    "no fibered family has p = {p} and rank {r}"
                )))
            }
        }
    };
    timer.mark("classify");
    Ok((report("classify", Some(&kind), outcome, diagnostics, timer), 0))
}

/// Reads the parameter set of a rank-4 group, conjugating it to standard
/// coordinates first when the direct read fails.
fn recover_index(group: &ElementaryGroup) -> Result<(IndexSet, bool)> {
    match recover_i(group) {
        Ok(i) => Ok((i, false)),
        Err(e @ (CoreError::FieldExtensionRequired(_) | CoreError::MissingRootOfUnity { .. })) => {
            Err(e.into())
        }
        Err(_) => {
            let semis: Vec<SemidirectElt> =
                group.elements.iter().map(|g| g.to_semidirect()).collect();
            let norm = normalize_rank4_two(&semis)?;
            let conj = conjugate_all(&semis, &norm.conjugator);
            let elements: Vec<PlaneMap> = conj.iter().map(PlaneMap::from_semidirect).collect();
            let gen_semis: Vec<SemidirectElt> =
                group.generators.iter().map(|g| g.to_semidirect()).collect();
            let generators = conjugate_all(&gen_semis, &norm.conjugator)
                .iter()
                .map(PlaneMap::from_semidirect)
                .collect();
            let regroup = ElementaryGroup { p: 2, rank: 4, generators, elements };
            Ok((recover_i(&regroup)?, true))
        }
    }
}

fn classify_rank1_odd(group: &ElementaryGroup, p: u32) -> Result<Outcome> {
    let g = group
        .elements
        .iter()
        .find(|e| !e.is_identity())
        .expect("a rank-1 group has a nonidentity element");
    if g.gamma.is_identity() {
        conjugate_to_cp(&g.m, p)?;
        Ok(Outcome::TypeA { p, rank: 1, normalized: true })
    } else if g.m.is_identity() {
        conjugate_to_cp_base(&g.gamma, p)?;
        Ok(Outcome::TypeA { p, rank: 1, normalized: true })
    } else {
        Err(CliError::Input(
            "a rank-1 generator mixing base and fiber actions is not normalized here; \
             extend it to a rank-2 group to use the rank-2 normal form"
                .into(),
        ))
    }
}

// ---------------------------------------------------------------------------
// conjugate
// ---------------------------------------------------------------------------

fn cmd_conjugate(
    field: &str,
    set_a: Option<String>,
    set_b: Option<String>,
    gens_a: Option<String>,
    gens_b: Option<String>,
    timings: bool,
) -> Result<(Report, i32)> {
    let kind: FieldKind = field.parse().map_err(CliError::Core)?;
    let mut timer = Timer::new(timings);
    let (ia, ib) = match (set_a, set_b, gens_a, gens_b) {
        (Some(a), Some(b), None, None) => {
            let ia = IndexSet::new(kind, parse_constant_list(&a, &kind)?)?;
            let ib = IndexSet::new(kind, parse_constant_list(&b, &kind)?)?;
            (ia, ib)
        }
        (None, None, Some(a), Some(b)) => {
            (index_of_generators(&a, &kind)?, index_of_generators(&b, &kind)?)
        }
        _ => {
            return Err(CliError::Input(
                "provide either --set-a and --set-b, or --gens-a and --gens-b".into(),
            ))
        }
    };
    timer.mark("parse");
    let equivalent = are_conjugate_c1(&ia, &ib);
    let outcome = Outcome::Equivalence {
        equivalent,
        canonical_a: print_elems(canonicalize(&ia).elems()),
        canonical_b: print_elems(canonicalize(&ib).elems()),
    };
    timer.mark("compare");
    Ok((report("conjugate", Some(&kind), outcome, Vec::new(), timer), 0))
}

fn index_of_generators(list: &str, kind: &FieldKind) -> Result<IndexSet> {
    let maps = list
        .split(';')
        .map(|s| to_plane_map(&parse_map_expr(s.trim())?, kind))
        .collect::<Result<Vec<PlaneMap>>>()?;
    let group = closure(&maps, 2, 4)?;
    if group.rank != 4 {
        return Err(CliError::Input(format!(
            "the generators span a group of rank {}, but the fibered family has rank 4",
            group.rank
        )));
    }
    Ok(recover_index(&group)?.0)
}

// ---------------------------------------------------------------------------
// invariant
// ---------------------------------------------------------------------------

fn cmd_invariant(field: &str, map: &str, timings: bool) -> Result<(Report, i32)> {
    let kind: FieldKind = field.parse().map_err(CliError::Core)?;
    let mut timer = Timer::new(timings);
    let pm = to_plane_map(&parse_map_expr(map)?, &kind)?;
    timer.mark("parse");
    let nf = fixed_curve(&pm)?;
    timer.mark("normal_form");
    let outcome = match nf {
        NFData::Empty => Outcome::FixedCurve {
            class: "empty".into(),
            genus: 0,
            branch: None,
            infinity_branched: None,
        },
        NFData::Hyperelliptic { branch, infinity_branched, genus } => Outcome::FixedCurve {
            class: "hyperelliptic".into(),
            genus,
            branch: Some(branch.to_string()),
            infinity_branched: Some(infinity_branched),
        },
    };
    Ok((report("invariant", Some(&kind), outcome, Vec::new(), timer), 0))
}

// ---------------------------------------------------------------------------
// delpezzo
// ---------------------------------------------------------------------------

fn cmd_delpezzo(
    field: &str,
    lambdas: &str,
    fiber: Option<u64>,
    timings: bool,
) -> Result<(Report, i32)> {
    let kind: FieldKind = field.parse().map_err(CliError::Core)?;
    let mut timer = Timer::new(timings);
    let vals = parse_constant_list(lambdas, &kind)?;
    let vals: [FieldElement; 5] = vals
        .try_into()
        .map_err(|v: Vec<FieldElement>| {
            CliError::Input(format!("exactly five lambda values are required, got {}", v.len()))
        })?;
    let dp = QuarticDP::new(vals)?;
    timer.mark("parse");
    let singular = pencil_singular(&dp)?;
    let gs = gs_verify(&dp)?;
    let invariant = jbar(&dp)?;
    timer.mark("surface");
    let fiber_section = match fiber {
        Some(q) => {
            let stats = fiber_statistics(q)?;
            timer.mark("fiber");
            Some(FiberSection {
                q,
                zeta: stats.zeta.to_string(),
                total: stats.total,
                singletons: stats.singletons,
                first_singleton: stats.first_singleton.map(|a| a.to_string()),
            })
        }
        None => None,
    };
    let outcome = Outcome::TypeC2 {
        lambdas: print_elems(dp.lambdas()),
        group_order: gs.order,
        hyperplane_fixers: gs.hyperplane_fixers,
        mixed_split: gs.mixed_split,
        quadrics_preserved: gs.quadrics_preserved,
        singular_parameters: singular.iter().map(|m| m.param.to_string()).collect(),
        jbar: print_elems(&invariant),
        fiber: fiber_section,
    };
    Ok((report("delpezzo", Some(&kind), outcome, Vec::new(), timer), 0))
}

// ---------------------------------------------------------------------------
// jtable
// ---------------------------------------------------------------------------

fn cmd_jtable(
    ell: Option<u32>,
    p: Option<u64>,
    rank: Option<u32>,
    timings: bool,
) -> Result<(Report, i32)> {
    let mut timer = Timer::new(timings);
    let weyl = weyl_table()
        .into_iter()
        .map(|w| WeylRow {
            ell: w.ell,
            root_system: w.root_system.to_string(),
            order: w.order,
            factorization: w
                .factorization
                .iter()
                .map(|(q, e)| if *e == 1 { q.to_string() } else { format!("{q}^{e}") })
                .collect::<Vec<_>>()
                .join(" * "),
        })
        .collect();
    let mut hurwitz = Vec::new();
    for g in [2u64, 3, 4, 5] {
        for q in [2u64, 3, 5, 7, 11, 13] {
            if let Ok(r) = hurwitz_max_rank(g, q) {
                hurwitz.push(HurwitzRow { genus: g, p: q, max_rank: r });
            }
        }
    }
    let query = match (ell, p, rank) {
        (Some(l), Some(q), Some(r)) => {
            Some(QueryRow { ell: l, p: q, rank: r, admissible: weyl_table_query(l, q, r)? })
        }
        (None, None, None) => None,
        _ => {
            return Err(CliError::Input(
                "a table query needs all of --ell, --p, and --rank".into(),
            ))
        }
    };
    timer.mark("tables");
    let outcome = Outcome::Tables { weyl, hurwitz, query };
    Ok((report("jtable", None, outcome, Vec::new(), timer), 0))
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

fn cmd_selftest(seed: u64, timings: bool) -> Result<(Report, i32)> {
    let timer = Timer::new(timings);
    let outcomes = run_all(seed);
    let checks: Vec<CheckRow> = outcomes
        .iter()
        .map(|o| CheckRow {
            name: o.name.to_string(),
            passed: o.passed,
            detail: o.detail.clone(),
            millis: timings.then_some(o.millis),
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    let outcome = Outcome::Selftest { passed, failed, checks };
    let code = if failed == 0 { 0 } else { 1 };
    Ok((report("selftest", None, outcome, Vec::new(), timer), code))
}
