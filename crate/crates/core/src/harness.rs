//! Random-instance generation and batch verification.
//!
//! The generator turns a seeded config into a market instance: edges sampled
//! by probability, doctor tiers built by shuffle-then-group with a tunable
//! collision rate, hospital utilities drawn from a range that narrows as tie
//! intensity grows, and matroids built uniform or laminar (laminar families
//! by recursive splitting, so laminarity holds by construction). On top of
//! that sit the exact set computations: the six sets S, SS, SSS, C, C_S,
//! C_SS of a small instance, the three relations between them, and a
//! randomized search for a matching in C but not in S.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::core::{core_membership, enumerate_matchings, CoreMembership, CoreOptions};
use crate::market::{Instance, MarketError, MatroidDesc};
use crate::sets::ElemSet;
use crate::stability::{find_blocking_edges, stability_class, EdgeBlockReport, StabilityNotion};

/// Envelope the default corpus stays inside, chosen so exhaustive matching
/// and coalition scans finish in milliseconds per instance.
pub const MAX_DOCTORS: usize = 4;
pub const MAX_HOSPITALS: usize = 3;
pub const MAX_EDGES: usize = 9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("attempts must be at least 1")]
    ZeroAttempts,
    #[error(transparent)]
    Market(#[from] MarketError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatroidKind {
    Uniform,
    Laminar,
    Mixed,
}

/// Everything the generator needs; two equal configs generate equal
/// instances.
#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub n_doctors: usize,
    pub n_hospitals: usize,
    pub edge_probability: f64,
    /// In [0,1]. At 0 every doctor tier is a singleton and every hospital's
    /// utilities are distinct; larger values make adjacent edges share a
    /// tier more often and shrink the utility range toward all-equal.
    pub tie_intensity: f64,
    pub matroid_kind: MatroidKind,
    pub seed: u64,
}

impl GenConfig {
    fn validate(&self) -> Result<(), HarnessError> {
        if self.n_doctors == 0 {
            return Err(HarnessError::InvalidConfig("n_doctors must be positive".into()));
        }
        if self.n_hospitals == 0 {
            return Err(HarnessError::InvalidConfig("n_hospitals must be positive".into()));
        }
        if !(self.edge_probability > 0.0 && self.edge_probability <= 1.0) {
            return Err(HarnessError::InvalidConfig(
                "edge_probability must lie in (0, 1]".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.tie_intensity) {
            return Err(HarnessError::InvalidConfig("tie_intensity must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

fn random_laminar_sets(
    rng: &mut ChaCha8Rng,
    edges: &[usize],
    out: &mut Vec<(Vec<usize>, usize)>,
) {
    out.push((edges.to_vec(), rng.gen_range(1..=edges.len())));
    if edges.len() >= 2 && rng.gen_bool(0.5) {
        let split = rng.gen_range(1..edges.len());
        random_laminar_sets(rng, &edges[..split], out);
        random_laminar_sets(rng, &edges[split..], out);
    }
}

/// Deterministically generates an instance from the config. The draw order
/// is fixed: edges, then doctor tiers, then hospital utilities, then
/// hospital matroids.
pub fn generate(config: &GenConfig) -> Result<Instance, HarnessError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let doctors: Vec<String> = (1..=config.n_doctors).map(|i| format!("d{i}")).collect();
    let hospitals: Vec<String> = (1..=config.n_hospitals).map(|i| format!("h{i}")).collect();

    let mut edges = Vec::new();
    for d in 0..config.n_doctors {
        for h in 0..config.n_hospitals {
            if rng.gen_bool(config.edge_probability) {
                edges.push((d, h));
            }
        }
    }

    let mut tiers = Vec::with_capacity(config.n_doctors);
    for d in 0..config.n_doctors {
        let mut own: Vec<usize> =
            (0..edges.len()).filter(|&e| edges[e].0 == d).collect();
        own.shuffle(&mut rng);
        let mut doctor_tiers: Vec<Vec<usize>> = Vec::new();
        for e in own {
            let join_previous = !doctor_tiers.is_empty()
                && config.tie_intensity > 0.0
                && rng.gen_bool(config.tie_intensity);
            if join_previous {
                doctor_tiers.last_mut().unwrap().push(e);
            } else {
                doctor_tiers.push(vec![e]);
            }
        }
        tiers.push(doctor_tiers);
    }

    let mut utilities = vec![0u64; edges.len()];
    for h in 0..config.n_hospitals {
        let own: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].1 == h).collect();
        if own.is_empty() {
            continue;
        }
        if config.tie_intensity == 0.0 {
            let mut values: Vec<u64> = (1..=own.len() as u64).collect();
            values.shuffle(&mut rng);
            for (&e, &v) in own.iter().zip(values.iter()) {
                utilities[e] = v;
            }
        } else {
            let shrunk = (own.len() as f64 * (1.0 - config.tie_intensity)).ceil() as u64;
            let range = shrunk.max(1);
            for &e in &own {
                utilities[e] = rng.gen_range(1..=range);
            }
        }
    }

    let mut matroids = Vec::with_capacity(config.n_hospitals);
    for h in 0..config.n_hospitals {
        let own: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].1 == h).collect();
        if own.is_empty() {
            matroids.push(MatroidDesc::Uniform { capacity: 1 });
            continue;
        }
        let laminar = match config.matroid_kind {
            MatroidKind::Uniform => false,
            MatroidKind::Laminar => true,
            MatroidKind::Mixed => rng.gen_bool(0.5),
        };
        if laminar {
            let mut sets = Vec::new();
            random_laminar_sets(&mut rng, &own, &mut sets);
            matroids.push(MatroidDesc::Laminar { sets });
        } else {
            matroids.push(MatroidDesc::Uniform { capacity: rng.gen_range(1..=own.len()) });
        }
    }

    Ok(Instance::from_parts(doctors, hospitals, edges, tiers, utilities, matroids)?)
}

/// The six exact sets of a small instance, each a sub-list of the matching
/// enumeration (so ascending bitmask order throughout).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixSets {
    pub weakly_stable: Vec<ElemSet>,
    pub strongly_stable: Vec<ElemSet>,
    pub super_stable: Vec<ElemSet>,
    pub weak_core: Vec<ElemSet>,
    pub strong_core: Vec<ElemSet>,
    pub super_core: Vec<ElemSet>,
}

/// Filters the full matching enumeration through the stability and core
/// checkers.
pub fn compute_sets(inst: &Instance, opts: &CoreOptions) -> Result<SixSets, MarketError> {
    let mut sets = SixSets {
        weakly_stable: Vec::new(),
        strongly_stable: Vec::new(),
        super_stable: Vec::new(),
        weak_core: Vec::new(),
        strong_core: Vec::new(),
        super_core: Vec::new(),
    };
    for mu in enumerate_matchings(inst, opts.edge_bound)? {
        let class = stability_class(inst, mu)?;
        if class.weakly_stable {
            sets.weakly_stable.push(mu);
        }
        if class.strongly_stable {
            sets.strongly_stable.push(mu);
        }
        if class.super_stable {
            sets.super_stable.push(mu);
        }
        let core = core_membership(inst, mu, opts)?;
        if core.in_weak_core {
            sets.weak_core.push(mu);
        }
        if core.in_strong_core {
            sets.strong_core.push(mu);
        }
        if core.in_super_core {
            sets.super_core.push(mu);
        }
    }
    Ok(sets)
}

/// Sizes of the six sets, in the order S, SS, SSS, C, C_S, C_SS.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SetSizes {
    pub s: usize,
    pub ss: usize,
    pub sss: usize,
    pub c: usize,
    pub c_s: usize,
    pub c_ss: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremViolation {
    pub relation: &'static str,
    pub matching: ElemSet,
    pub detail: String,
}

/// Outcome of checking S ⊆ C, SS = C_S, SSS = C_SS on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub sizes: SetSizes,
    pub s_subset_c: bool,
    pub ss_equals_cs: bool,
    pub sss_equals_css: bool,
    pub violations: Vec<TheoremViolation>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.s_subset_c && self.ss_equals_cs && self.sss_equals_css
    }
}

fn contains(sorted: &[ElemSet], mu: ElemSet) -> bool {
    sorted.binary_search_by_key(&mu.bits(), |s| s.bits()).is_ok()
}

/// Computes the six sets and checks the three relations exactly. Every
/// candidate violation is re-checked with the coalition prune disabled
/// before being reported; a surviving violation means an implementation bug
/// and a disappearing one means the prune itself is wrong, so both are
/// recorded.
pub fn verify_theorems(inst: &Instance, opts: &CoreOptions) -> Result<VerificationReport, MarketError> {
    let sets = compute_sets(inst, opts)?;
    let unpruned = CoreOptions { prune_hospital_free: false, ..*opts };
    let recheck = |mu: ElemSet| -> Result<CoreMembership, MarketError> {
        core_membership(inst, mu, &unpruned)
    };

    let mut violations = Vec::new();

    for &mu in &sets.weakly_stable {
        if !contains(&sets.weak_core, mu) {
            let confirmed = !recheck(mu)?.in_weak_core;
            violations.push(TheoremViolation {
                relation: "s_subset_c",
                matching: mu,
                detail: if confirmed {
                    format!("{mu} is weakly stable but outside the weak core")
                } else {
                    format!("{mu} leaves the weak core only when pruning is on")
                },
            });
        }
    }

    let mut check_equality = |relation: &'static str,
                              stable: &[ElemSet],
                              core: &[ElemSet],
                              member: fn(&CoreMembership) -> bool|
     -> Result<(), MarketError> {
        for &mu in stable {
            if !contains(core, mu) {
                let confirmed = !member(&recheck(mu)?);
                violations.push(TheoremViolation {
                    relation,
                    matching: mu,
                    detail: if confirmed {
                        format!("{mu} is stable but not in the corresponding core")
                    } else {
                        format!("{mu} misses the core only when pruning is on")
                    },
                });
            }
        }
        for &mu in core {
            if !contains(stable, mu) {
                let still_member = member(&recheck(mu)?);
                violations.push(TheoremViolation {
                    relation,
                    matching: mu,
                    detail: if still_member {
                        format!("{mu} is in the core but not stable")
                    } else {
                        format!("{mu} is in the core only when pruning is on")
                    },
                });
            }
        }
        Ok(())
    };

    check_equality(
        "ss_equals_cs",
        &sets.strongly_stable,
        &sets.strong_core,
        |m| m.in_strong_core,
    )?;
    check_equality(
        "sss_equals_css",
        &sets.super_stable,
        &sets.super_core,
        |m| m.in_super_core,
    )?;

    let s_subset_c = !violations.iter().any(|v| v.relation == "s_subset_c");
    let ss_equals_cs = !violations.iter().any(|v| v.relation == "ss_equals_cs");
    let sss_equals_css = !violations.iter().any(|v| v.relation == "sss_equals_css");

    Ok(VerificationReport {
        sizes: SetSizes {
            s: sets.weakly_stable.len(),
            ss: sets.strongly_stable.len(),
            sss: sets.super_stable.len(),
            c: sets.weak_core.len(),
            c_s: sets.strong_core.len(),
            c_ss: sets.super_core.len(),
        },
        s_subset_c,
        ss_equals_cs,
        sss_equals_css,
        violations,
    })
}

/// A matching in the weak core that is not weakly stable, with both facts
/// certified.
#[derive(Clone, Debug)]
pub struct CoreNotStableWitness {
    pub seed: u64,
    pub instance: Instance,
    pub matching: ElemSet,
    /// Strongly blocking edges proving the matching is not weakly stable.
    pub blocking_edges: Vec<EdgeBlockReport>,
    /// Whether the full unpruned coalition scan also found no strongly
    /// blocking coalition.
    pub unpruned_confirmed: bool,
    pub attempts_used: usize,
}

/// Searches `attempts` generated instances (seeds `config.seed`,
/// `config.seed + 1`, ...) for a matching in C \ S. Exhausting the budget
/// without a find is a legitimate `None`.
pub fn find_core_not_stable(
    config: &GenConfig,
    attempts: usize,
) -> Result<Option<CoreNotStableWitness>, HarnessError> {
    if attempts == 0 {
        return Err(HarnessError::ZeroAttempts);
    }
    let opts = CoreOptions::default();
    let unpruned = CoreOptions { prune_hospital_free: false, ..opts };
    for attempt in 0..attempts {
        let seed = config.seed.wrapping_add(attempt as u64);
        let cfg = GenConfig { seed, ..config.clone() };
        let inst = generate(&cfg)?;
        if inst.n_edges() > MAX_EDGES {
            continue;
        }
        for mu in enumerate_matchings(&inst, opts.edge_bound)? {
            if stability_class(&inst, mu)?.weakly_stable {
                continue;
            }
            if !core_membership(&inst, mu, &opts)?.in_weak_core {
                continue;
            }
            let blocking_edges = find_blocking_edges(&inst, mu, StabilityNotion::Weak)?;
            let unpruned_confirmed = core_membership(&inst, mu, &unpruned)?.in_weak_core;
            return Ok(Some(CoreNotStableWitness {
                seed,
                instance: inst,
                matching: mu,
                blocking_edges,
                unpruned_confirmed,
                attempts_used: attempt + 1,
            }));
        }
    }
    Ok(None)
}

/// Config for a corpus of instances at the default envelope: sizes are
/// drawn uniformly per instance, and instances that land over the edge
/// budget are redrawn (counted as skips).
#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub count: usize,
    pub seed: u64,
    pub max_doctors: usize,
    pub max_hospitals: usize,
    pub edge_probability: f64,
    pub tie_intensity: f64,
    pub matroid_kind: MatroidKind,
}

impl Default for CorpusConfig {
    fn default() -> CorpusConfig {
        CorpusConfig {
            count: 500,
            seed: 0,
            max_doctors: MAX_DOCTORS,
            max_hospitals: MAX_HOSPITALS,
            edge_probability: 0.5,
            tie_intensity: 0.5,
            matroid_kind: MatroidKind::Mixed,
        }
    }
}

/// One accepted corpus instance plus how many oversized draws were skipped
/// to get it.
pub struct CorpusItem {
    pub index: usize,
    pub config: GenConfig,
    pub instance: Instance,
    pub skipped: usize,
}

/// Deterministic stream of corpus instances: a meta generator seeded with
/// `cfg.seed` draws per-instance sizes and seeds; draws whose instance
/// exceeds the edge envelope are skipped and redrawn.
pub fn corpus(cfg: &CorpusConfig) -> impl Iterator<Item = Result<CorpusItem, HarnessError>> + '_ {
    let mut meta = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut produced = 0usize;
    std::iter::from_fn(move || {
        if produced >= cfg.count {
            return None;
        }
        let mut skipped = 0usize;
        loop {
            let config = GenConfig {
                n_doctors: meta.gen_range(1..=cfg.max_doctors),
                n_hospitals: meta.gen_range(1..=cfg.max_hospitals),
                edge_probability: cfg.edge_probability,
                tie_intensity: cfg.tie_intensity,
                matroid_kind: cfg.matroid_kind,
                seed: meta.gen(),
            };
            let instance = match generate(&config) {
                Ok(inst) => inst,
                Err(e) => return Some(Err(e)),
            };
            if instance.n_edges() > MAX_EDGES {
                skipped += 1;
                if skipped >= 10_000 {
                    return Some(Err(HarnessError::InvalidConfig(
                        "could not draw an instance within the edge envelope".into(),
                    )));
                }
                continue;
            }
            let index = produced;
            produced += 1;
            return Some(Ok(CorpusItem { index, config, instance, skipped }));
        }
    })
}
