//! Command-line surface.
//!
//! Five subcommands: `check` classifies a matching's stability, `core`
//! decides core membership, `enumerate` prints the full matching table,
//! `verify` generates a corpus and verifies the three set relations, and
//! `axioms` re-derives matroid axioms and preference responsiveness from
//! the instance file. Exit codes are a stable contract: 0 success or
//! member, 1 property refuted, 2 usage or parse error, 3 invalid matching,
//! 4 bounds exceeded.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::core::{
    core_membership, enumerate_matchings, find_blocking_coalition, BlockMode, CoreOptions,
    DEFAULT_EDGE_BOUND, DEFAULT_VERTEX_BOUND,
};
use crate::files::{self, FileError};
use crate::harness::{corpus, verify_theorems, CorpusConfig, HarnessError, MatroidKind};
use crate::market::{Instance, MarketError, ResponsiveReport, ResponsivenessViolation};
use crate::matroid::{AxiomReport, AxiomViolation, MatroidError, DEFAULT_GROUND_BOUND};
use crate::sets::ElemSet;
use crate::stability::{
    find_blocking_edges, stability_class, BlockKind, SideBlock, StabilityNotion,
};

#[derive(Parser)]
#[command(
    name = "matroid-markets",
    version,
    about = "stability and core checkers for matroid-constrained matching markets with ties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum NotionArg {
    Weak,
    Strong,
    Super,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MatroidArg {
    Uniform,
    Laminar,
    Mixed,
}

impl From<MatroidArg> for MatroidKind {
    fn from(arg: MatroidArg) -> MatroidKind {
        match arg {
            MatroidArg::Uniform => MatroidKind::Uniform,
            MatroidArg::Laminar => MatroidKind::Laminar,
            MatroidArg::Mixed => MatroidKind::Mixed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matching: stability class plus every blocking edge
    Check {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        matching: PathBuf,
    },
    /// Decide core membership of a matching
    Core {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        /// which core to test membership of
        #[arg(long, value_enum, default_value_t = NotionArg::Weak)]
        notion: NotionArg,
        /// also scan coalitions without hospitals instead of skipping them
        #[arg(long)]
        no_prune: bool,
        /// override the vertex-count bound of the coalition scan
        #[arg(long)]
        bound: Option<usize>,
    },
    /// List every matching with stability and core classification
    Enumerate {
        #[arg(long)]
        instance: PathBuf,
        /// also scan coalitions without hospitals instead of skipping them
        #[arg(long)]
        no_prune: bool,
        /// override the edge-count bound of matching enumeration
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Generate random instances and verify the three set relations
    Verify {
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        max_doctors: usize,
        #[arg(long, default_value_t = 3)]
        max_hospitals: usize,
        #[arg(long, default_value_t = 0.5)]
        edge_prob: f64,
        #[arg(long, default_value_t = 0.5)]
        tie_intensity: f64,
        #[arg(long, value_enum, default_value_t = MatroidArg::Mixed)]
        matroid: MatroidArg,
        /// also scan coalitions without hospitals instead of skipping them
        #[arg(long)]
        no_prune: bool,
    },
    /// Check matroid axioms and preference responsiveness per hospital
    Axioms {
        #[arg(long)]
        instance: PathBuf,
        /// override the exhaustive-check bound on hospital degree
        #[arg(long)]
        bound: Option<usize>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn market_failure(err: MarketError) -> Failure {
    let code = match &err {
        MarketError::NotAMatching(_) => 3,
        MarketError::BoundExceeded { .. } => 4,
        MarketError::Matroid(MatroidError::GroundTooLarge { .. }) => 4,
        _ => 2,
    };
    fail(code, err.to_string())
}

fn harness_failure(err: HarnessError) -> Failure {
    match err {
        HarnessError::Market(e) => market_failure(e),
        other => fail(2, other.to_string()),
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    files::load_instance(path).map_err(|err| match err {
        FileError::Market(e) => market_failure(e),
        other => fail(2, format!("{}: {other}", path.display())),
    })
}

fn load_matching(inst: &Instance, path: &Path) -> Result<ElemSet, Failure> {
    files::load_matching(inst, path).map_err(|err| match err {
        FileError::UnknownEdge { .. } => fail(3, format!("not a matching: {err}")),
        other => fail(2, format!("{}: {other}", path.display())),
    })
}

fn fmt_edge_set(inst: &Instance, set: ElemSet) -> String {
    let names: Vec<String> = set.iter().map(|e| inst.edge_name(e)).collect();
    format!("{{{}}}", names.join(","))
}

fn side_name(side: SideBlock) -> &'static str {
    match side {
        SideBlock::None => "none",
        SideBlock::Weak => "weak",
        SideBlock::Strong => "strong",
    }
}

fn kind_name(kind: BlockKind) -> &'static str {
    match kind {
        BlockKind::None => "none",
        BlockKind::SuperWeak => "super_weak",
        BlockKind::Weak => "weak",
        BlockKind::Strong => "strong",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(instance: &Path, matching: &Path) -> Result<i32, Failure> {
    let inst = load_instance(instance)?;
    let mu = load_matching(&inst, matching)?;
    let class = stability_class(&inst, mu).map_err(market_failure)?;

    println!("matching: {}", fmt_edge_set(&inst, mu));
    println!("weakly_stable: {}", class.weakly_stable);
    println!("strongly_stable: {}", class.strongly_stable);
    println!("super_stable: {}", class.super_stable);
    let strictest = if class.super_stable {
        "super_stable"
    } else if class.strongly_stable {
        "strongly_stable"
    } else if class.weakly_stable {
        "weakly_stable"
    } else {
        "none"
    };
    println!("strictest: {strictest}");

    let reports = find_blocking_edges(&inst, mu, StabilityNotion::Super).map_err(market_failure)?;
    if reports.is_empty() {
        println!("no blocking edges");
    } else {
        for r in &reports {
            let witness = match r.witness_f {
                Some(f) => inst.edge_name(f),
                None => "-".into(),
            };
            println!(
                "blocking edge {}: doctor={} hospital={} overall={} witness={}",
                inst.edge_name(r.edge),
                side_name(r.blocks_on_d),
                side_name(r.blocks_on_h),
                kind_name(r.overall),
                witness,
            );
        }
    }
    Ok(if class.weakly_stable { 0 } else { 1 })
}

fn cmd_core(
    instance: &Path,
    matching: &Path,
    notion: NotionArg,
    no_prune: bool,
    bound: Option<usize>,
) -> Result<i32, Failure> {
    let inst = load_instance(instance)?;
    let mu = load_matching(&inst, matching)?;
    let opts = CoreOptions {
        prune_hospital_free: !no_prune,
        vertex_bound: bound.unwrap_or(DEFAULT_VERTEX_BOUND),
        edge_bound: DEFAULT_EDGE_BOUND,
    };
    let membership = core_membership(&inst, mu, &opts).map_err(market_failure)?;

    println!("matching: {}", fmt_edge_set(&inst, mu));
    println!("in_weak_core: {}", membership.in_weak_core);
    println!("in_strong_core: {}", membership.in_strong_core);
    println!("in_super_core: {}", membership.in_super_core);

    let refuted: Vec<(&str, BlockMode, bool)> = vec![
        ("weak core", BlockMode::Strong, membership.in_weak_core),
        ("strong core", BlockMode::Weak, membership.in_strong_core),
        ("super core", BlockMode::SuperWeak, membership.in_super_core),
    ];
    for (label, mode, member) in refuted {
        if member {
            continue;
        }
        let report = find_blocking_coalition(&inst, mu, mode, &opts)
            .map_err(market_failure)?
            .expect("refuted membership must have a blocking coalition");
        println!(
            "{label} refuted by coalition {} via sigma={}",
            report.coalition.describe(&inst),
            fmt_edge_set(&inst, report.witness_sigma),
        );
    }

    let member = match notion {
        NotionArg::Weak => membership.in_weak_core,
        NotionArg::Strong => membership.in_strong_core,
        NotionArg::Super => membership.in_super_core,
    };
    Ok(if member { 0 } else { 1 })
}

fn cmd_enumerate(instance: &Path, no_prune: bool, bound: Option<usize>) -> Result<i32, Failure> {
    let inst = load_instance(instance)?;
    let opts = CoreOptions {
        prune_hospital_free: !no_prune,
        vertex_bound: DEFAULT_VERTEX_BOUND,
        edge_bound: bound.unwrap_or(DEFAULT_EDGE_BOUND),
    };
    let matchings = enumerate_matchings(&inst, opts.edge_bound).map_err(market_failure)?;
    let mut sizes = [0usize; 6];
    println!("matching S SS SSS C C_S C_SS");
    for mu in matchings {
        let class = stability_class(&inst, mu).map_err(market_failure)?;
        let core = core_membership(&inst, mu, &opts).map_err(market_failure)?;
        let flags = [
            class.weakly_stable,
            class.strongly_stable,
            class.super_stable,
            core.in_weak_core,
            core.in_strong_core,
            core.in_super_core,
        ];
        for (size, &flag) in sizes.iter_mut().zip(flags.iter()) {
            *size += flag as usize;
        }
        println!(
            "{} {} {} {} {} {} {}",
            fmt_edge_set(&inst, mu),
            yes_no(flags[0]),
            yes_no(flags[1]),
            yes_no(flags[2]),
            yes_no(flags[3]),
            yes_no(flags[4]),
            yes_no(flags[5]),
        );
    }
    println!(
        "sizes: |S|={} |SS|={} |SSS|={} |C|={} |C_S|={} |C_SS|={}",
        sizes[0], sizes[1], sizes[2], sizes[3], sizes[4], sizes[5],
    );
    Ok(0)
}

#[derive(Serialize)]
struct VerifyRecord {
    instance: usize,
    seed: u64,
    doctors: usize,
    hospitals: usize,
    edges: usize,
    skipped: usize,
    s: usize,
    ss: usize,
    sss: usize,
    c: usize,
    c_s: usize,
    c_ss: usize,
    s_subset_c: bool,
    ss_equals_cs: bool,
    sss_equals_css: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    violations: Vec<String>,
}

fn histogram_line(label: &str, hist: &std::collections::BTreeMap<usize, usize>) -> String {
    let parts: Vec<String> =
        hist.iter().map(|(size, count)| format!("{size}x{count}")).collect();
    format!("{label} size histogram: {}", parts.join(" "))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    count: usize,
    seed: u64,
    max_doctors: usize,
    max_hospitals: usize,
    edge_prob: f64,
    tie_intensity: f64,
    matroid: MatroidArg,
    no_prune: bool,
) -> Result<i32, Failure> {
    if count == 0 {
        return Err(fail(2, "count must be at least 1"));
    }
    if max_doctors == 0 || max_hospitals == 0 {
        return Err(fail(2, "max-doctors and max-hospitals must be at least 1"));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(fail(2, "edge-prob must lie in (0, 1]"));
    }
    if !(0.0..=1.0).contains(&tie_intensity) {
        return Err(fail(2, "tie-intensity must lie in [0, 1]"));
    }

    let cfg = CorpusConfig {
        count,
        seed,
        max_doctors,
        max_hospitals,
        edge_probability: edge_prob,
        tie_intensity,
        matroid_kind: matroid.into(),
    };
    let opts = CoreOptions { prune_hospital_free: !no_prune, ..CoreOptions::default() };

    let mut total_violations = 0usize;
    let mut with_weakly_stable = 0usize;
    let mut with_empty_strongly_stable = 0usize;
    let mut total_skipped = 0usize;
    let mut histograms: [std::collections::BTreeMap<usize, usize>; 6] = Default::default();

    for item in corpus(&cfg) {
        let item = item.map_err(harness_failure)?;
        let report = verify_theorems(&item.instance, &opts).map_err(market_failure)?;

        let record = VerifyRecord {
            instance: item.index,
            seed: item.config.seed,
            doctors: item.instance.n_doctors(),
            hospitals: item.instance.n_hospitals(),
            edges: item.instance.n_edges(),
            skipped: item.skipped,
            s: report.sizes.s,
            ss: report.sizes.ss,
            sss: report.sizes.sss,
            c: report.sizes.c,
            c_s: report.sizes.c_s,
            c_ss: report.sizes.c_ss,
            s_subset_c: report.s_subset_c,
            ss_equals_cs: report.ss_equals_cs,
            sss_equals_css: report.sss_equals_css,
            violations: report
                .violations
                .iter()
                .map(|v| format!("{}: {}", v.relation, v.detail))
                .collect(),
        };
        println!("{}", serde_json::to_string(&record).expect("record serialization"));

        total_violations += report.violations.len();
        with_weakly_stable += (report.sizes.s > 0) as usize;
        with_empty_strongly_stable += (report.sizes.ss == 0) as usize;
        total_skipped += item.skipped;
        let sizes = [
            report.sizes.s,
            report.sizes.ss,
            report.sizes.sss,
            report.sizes.c,
            report.sizes.c_s,
            report.sizes.c_ss,
        ];
        for (hist, size) in histograms.iter_mut().zip(sizes) {
            *hist.entry(size).or_insert(0) += 1;
        }
    }

    println!("instances: {count}");
    println!("violations: {total_violations}");
    println!("instances with a weakly stable matching: {with_weakly_stable}");
    println!("instances with empty strongly stable set: {with_empty_strongly_stable}");
    println!("oversized draws skipped: {total_skipped}");
    for (label, hist) in ["S", "SS", "SSS", "C", "C_S", "C_SS"].iter().zip(histograms.iter()) {
        println!("{}", histogram_line(label, hist));
    }

    Ok(if total_violations == 0 { 0 } else { 1 })
}

fn describe_axiom_violation(inst: &Instance, violation: &AxiomViolation) -> String {
    match violation {
        AxiomViolation::EmptyFamily => "independence family is empty".into(),
        AxiomViolation::DownwardClosure { subset, superset } => format!(
            "downward closure fails: {} independent but {} is not",
            fmt_edge_set(inst, *superset),
            fmt_edge_set(inst, *subset),
        ),
        AxiomViolation::Augmentation { smaller, larger } => format!(
            "augmentation fails between {} and {}",
            fmt_edge_set(inst, *smaller),
            fmt_edge_set(inst, *larger),
        ),
    }
}

fn describe_responsive_violation(inst: &Instance, violation: &ResponsivenessViolation) -> String {
    match violation {
        ResponsivenessViolation::Monotonicity { set, edge } => format!(
            "monotonicity fails at I={} dropping {}",
            fmt_edge_set(inst, *set),
            inst.edge_name(*edge),
        ),
        ResponsivenessViolation::WeakSwap { set, added, removed } => format!(
            "weak swap consistency fails at I={} adding {} removing {}",
            fmt_edge_set(inst, *set),
            inst.edge_name(*added),
            inst.edge_name(*removed),
        ),
        ResponsivenessViolation::StrictSwap { set, added, removed } => format!(
            "strict swap consistency fails at I={} adding {} removing {}",
            fmt_edge_set(inst, *set),
            inst.edge_name(*added),
            inst.edge_name(*removed),
        ),
        ResponsivenessViolation::IndifferentSwap { set, added, removed } => format!(
            "indifference swap consistency fails at I={} adding {} removing {}",
            fmt_edge_set(inst, *set),
            inst.edge_name(*added),
            inst.edge_name(*removed),
        ),
    }
}

fn cmd_axioms(instance: &Path, bound: Option<usize>) -> Result<i32, Failure> {
    // a file whose explicit family fails the axioms never becomes an
    // Instance; report that as the refutation it is rather than a parse
    // error
    let inst = match files::load_instance(instance) {
        Ok(inst) => inst,
        Err(FileError::Market(MarketError::BadMatroid {
            hospital,
            source: MatroidError::NotAMatroid(violation),
        })) => {
            println!("{hospital}: axioms violated: {violation}");
            return Ok(1);
        }
        Err(FileError::Market(e)) => return Err(market_failure(e)),
        Err(other) => return Err(fail(2, format!("{}: {other}", instance.display()))),
    };

    let bound = bound.unwrap_or(DEFAULT_GROUND_BOUND);
    let mut all_pass = true;
    for h in 0..inst.n_hospitals() {
        let name = inst.hospital_name(h);
        let axioms = inst.matroid(h).check_axioms(bound).map_err(|e| match e {
            MatroidError::GroundTooLarge { .. } => fail(4, e.to_string()),
            other => fail(2, other.to_string()),
        })?;
        let axioms_desc = match &axioms {
            AxiomReport::Pass => "axioms pass".to_string(),
            AxiomReport::Violated(v) => {
                all_pass = false;
                format!("axioms violated: {}", describe_axiom_violation(&inst, v))
            }
        };
        let responsive = inst.check_responsive(h, bound).map_err(market_failure)?;
        let responsive_desc = match &responsive {
            ResponsiveReport::Pass => "responsive pass".to_string(),
            ResponsiveReport::Violated(v) => {
                all_pass = false;
                format!("responsive violated: {}", describe_responsive_violation(&inst, v))
            }
        };
        println!("{name}: {axioms_desc}, {responsive_desc}");
    }
    if inst.n_hospitals() == 0 {
        println!("no hospitals");
    }
    Ok(if all_pass { 0 } else { 1 })
}

/// Parses argv and dispatches; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check { instance, matching } => cmd_check(instance, matching),
        Command::Core { instance, matching, notion, no_prune, bound } => {
            cmd_core(instance, matching, *notion, *no_prune, *bound)
        }
        Command::Enumerate { instance, no_prune, bound } => {
            cmd_enumerate(instance, *no_prune, *bound)
        }
        Command::Verify {
            count,
            seed,
            max_doctors,
            max_hospitals,
            edge_prob,
            tie_intensity,
            matroid,
            no_prune,
        } => cmd_verify(
            *count,
            *seed,
            *max_doctors,
            *max_hospitals,
            *edge_prob,
            *tie_intensity,
            *matroid,
            *no_prune,
        ),
        Command::Axioms { instance, bound } => cmd_axioms(instance, *bound),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}
