//! Coalition blocking and brute-force membership in the weak, strong, and
//! super cores.
//!
//! A coalition is a non-empty vertex set C. The matchings consistent with C
//! are exactly the matchings contained in E(C), the edges with both
//! endpoints inside C. A coalition blocks when some consistent matching
//! improves on the current one for its members: strictly for everyone
//! (strong), weakly for everyone with someone strict (weak), or weakly for
//! everyone with someone merely reassigned (super-weak). Core membership
//! scans every coalition; exhaustiveness is the point, so everything here is
//! bounded and refuses oversized inputs.

use crate::market::{Instance, MarketError};
use crate::sets::ElemSet;
use std::cmp::Ordering;

/// Enumeration bound on edge sets (whole-instance matchings and per-
/// coalition E(C) alike).
pub const DEFAULT_EDGE_BOUND: usize = 12;

/// Bound on |V| for the coalition scan.
pub const DEFAULT_VERTEX_BOUND: usize = 10;

/// A non-empty set of vertices, kept as separate doctor and hospital id
/// sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coalition {
    doctors: ElemSet,
    hospitals: ElemSet,
}

impl Coalition {
    pub fn new(
        inst: &Instance,
        doctors: impl IntoIterator<Item = usize>,
        hospitals: impl IntoIterator<Item = usize>,
    ) -> Result<Coalition, MarketError> {
        let mut dset = ElemSet::EMPTY;
        for d in doctors {
            if d >= inst.n_doctors() {
                return Err(MarketError::UnknownVertex(format!("doctor index {d}")));
            }
            dset = dset.with(d);
        }
        let mut hset = ElemSet::EMPTY;
        for h in hospitals {
            if h >= inst.n_hospitals() {
                return Err(MarketError::UnknownVertex(format!("hospital index {h}")));
            }
            hset = hset.with(h);
        }
        if dset.is_empty() && hset.is_empty() {
            return Err(MarketError::EmptyCoalition);
        }
        Ok(Coalition { doctors: dset, hospitals: hset })
    }

    /// The whole vertex set V.
    pub fn all_vertices(inst: &Instance) -> Result<Coalition, MarketError> {
        Coalition::new(inst, 0..inst.n_doctors(), 0..inst.n_hospitals())
    }

    /// Decodes a coalition from a combined bitmask: doctors in the low
    /// bits, hospitals shifted above them. This fixes the canonical scan
    /// order.
    fn from_vertex_mask(inst: &Instance, mask: u64) -> Coalition {
        let nd = inst.n_doctors();
        let doctors = ElemSet::from_bits(mask & ((1u64 << nd) - 1));
        let hospitals = ElemSet::from_bits(mask >> nd);
        Coalition { doctors, hospitals }
    }

    pub fn doctors(&self) -> ElemSet {
        self.doctors
    }

    pub fn hospitals(&self) -> ElemSet {
        self.hospitals
    }

    pub fn len(&self) -> usize {
        self.doctors.len() + self.hospitals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doctors.is_empty() && self.hospitals.is_empty()
    }

    /// E(C): the edges with both endpoints in the coalition.
    pub fn edges_within(&self, inst: &Instance) -> ElemSet {
        let mut edges = ElemSet::EMPTY;
        for e in 0..inst.n_edges() {
            let (d, h) = inst.endpoints(e);
            if self.doctors.contains(d) && self.hospitals.contains(h) {
                edges = edges.with(e);
            }
        }
        edges
    }

    /// Human-readable member list, e.g. `{d2,h1}`.
    pub fn describe(&self, inst: &Instance) -> String {
        let mut names: Vec<&str> = self.doctors.iter().map(|d| inst.doctor_name(d)).collect();
        names.extend(self.hospitals.iter().map(|h| inst.hospital_name(h)));
        format!("{{{}}}", names.join(","))
    }
}

/// How a coalition's alternative matching must relate to the current one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockMode {
    Strong,
    Weak,
    SuperWeak,
}

impl BlockMode {
    pub const ALL: [BlockMode; 3] = [BlockMode::Strong, BlockMode::Weak, BlockMode::SuperWeak];
}

/// A coalition that blocks, with the first consistent matching that
/// certifies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalitionBlockReport {
    pub coalition: Coalition,
    pub mode: BlockMode,
    pub witness_sigma: ElemSet,
}

/// Membership in the three cores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoreMembership {
    /// No coalition blocks strongly.
    pub in_weak_core: bool,
    /// No coalition blocks weakly.
    pub in_strong_core: bool,
    /// No coalition blocks even super-weakly.
    pub in_super_core: bool,
}

/// Knobs for the coalition scan.
#[derive(Clone, Copy, Debug)]
pub struct CoreOptions {
    /// Skip coalitions with no hospital. Sound because a blocking coalition
    /// always contains one (see the lemma test in this module); kept
    /// toggleable so tests can compare against the full scan.
    pub prune_hospital_free: bool,
    pub vertex_bound: usize,
    pub edge_bound: usize,
}

impl Default for CoreOptions {
    fn default() -> CoreOptions {
        CoreOptions {
            prune_hospital_free: true,
            vertex_bound: DEFAULT_VERTEX_BOUND,
            edge_bound: DEFAULT_EDGE_BOUND,
        }
    }
}

/// True iff every coalition member's assigned edges lie inside E(C).
pub fn is_consistent(inst: &Instance, mu: ElemSet, c: &Coalition) -> Result<bool, MarketError> {
    inst.require_matching(mu)?;
    if c.is_empty() {
        return Err(MarketError::EmptyCoalition);
    }
    let within = c.edges_within(inst);
    for d in c.doctors.iter() {
        if let Some(e) = inst.mu_doctor(mu, d) {
            if !within.contains(e) {
                return Ok(false);
            }
        }
    }
    for h in c.hospitals.iter() {
        if !inst.mu_hospital(mu, h).is_subset_of(within) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Backtracks over `allowed` edges, highest id first with skip before take,
/// so matchings come out in ascending bitmask order. Pruning by doctor
/// occupancy and matroid independence is lossless: matchings are downward
/// closed.
fn matchings_within(inst: &Instance, allowed: ElemSet) -> Vec<ElemSet> {
    let edges: Vec<usize> = allowed.iter().collect();
    let mut out = Vec::new();
    let mut current = ElemSet::EMPTY;
    rec(inst, &edges, edges.len(), &mut current, &mut out);
    return out;

    fn rec(
        inst: &Instance,
        edges: &[usize],
        idx: usize,
        current: &mut ElemSet,
        out: &mut Vec<ElemSet>,
    ) {
        if idx == 0 {
            out.push(*current);
            return;
        }
        let e = edges[idx - 1];
        rec(inst, edges, idx - 1, current, out);
        let (d, h) = inst.endpoints(e);
        if current.intersect(inst.doctor_edges(d)).is_empty()
            && inst.matroid(h).is_independent(inst.mu_hospital(*current, h).with(e))
        {
            *current = current.with(e);
            rec(inst, edges, idx - 1, current, out);
            *current = current.without(e);
        }
    }
}

/// All matchings of the instance, ascending bitmask order. Refuses
/// instances with more than `edge_bound` edges.
pub fn enumerate_matchings(inst: &Instance, edge_bound: usize) -> Result<Vec<ElemSet>, MarketError> {
    if inst.n_edges() > edge_bound {
        return Err(MarketError::BoundExceeded {
            what: "edge set",
            size: inst.n_edges(),
            bound: edge_bound,
        });
    }
    Ok(matchings_within(inst, inst.all_edges()))
}

/// 𝓜(C): all matchings contained in E(C), ascending bitmask order.
/// Refuses coalitions with more than `edge_bound` internal edges.
pub fn consistent_matchings(
    inst: &Instance,
    c: &Coalition,
    edge_bound: usize,
) -> Result<Vec<ElemSet>, MarketError> {
    if c.is_empty() {
        return Err(MarketError::EmptyCoalition);
    }
    let within = c.edges_within(inst);
    if within.len() > edge_bound {
        return Err(MarketError::BoundExceeded {
            what: "coalition edge set",
            size: within.len(),
            bound: edge_bound,
        });
    }
    Ok(matchings_within(inst, within))
}

/// How one consistent matching relates to `mu` across coalition members.
struct SigmaVerdict {
    all_weak: bool,
    all_strict: bool,
    any_strict: bool,
    any_diff: bool,
}

fn eval_sigma(inst: &Instance, mu: ElemSet, c: &Coalition, sigma: ElemSet) -> SigmaVerdict {
    let mut v =
        SigmaVerdict { all_weak: true, all_strict: true, any_strict: false, any_diff: false };
    for d in c.doctors.iter() {
        let s = inst.mu_doctor(sigma, d);
        let m = inst.mu_doctor(mu, d);
        match inst.doctor_compare_fast(s, m) {
            Ordering::Greater => v.any_strict = true,
            Ordering::Equal => v.all_strict = false,
            Ordering::Less => {
                v.all_weak = false;
                v.all_strict = false;
                return v;
            }
        }
        v.any_diff |= s != m;
    }
    for h in c.hospitals.iter() {
        let s = inst.mu_hospital(sigma, h);
        let m = inst.mu_hospital(mu, h);
        match inst.utility_sum(s).cmp(&inst.utility_sum(m)) {
            Ordering::Greater => v.any_strict = true,
            Ordering::Equal => v.all_strict = false,
            Ordering::Less => {
                v.all_weak = false;
                v.all_strict = false;
                return v;
            }
        }
        v.any_diff |= s != m;
    }
    v
}

impl SigmaVerdict {
    fn blocks(&self, mode: BlockMode) -> bool {
        match mode {
            BlockMode::Strong => self.all_strict,
            BlockMode::Weak => self.all_weak && self.any_strict,
            BlockMode::SuperWeak => self.all_weak && self.any_diff,
        }
    }
}

/// Per-coalition scan over 𝓜(C) for several modes at once; each slot gets
/// the first witness in enumeration order, or stays `None`.
fn scan_coalition(
    inst: &Instance,
    mu: ElemSet,
    c: &Coalition,
    want: [bool; 3],
    edge_bound: usize,
) -> Result<[Option<ElemSet>; 3], MarketError> {
    let mut found = [None, None, None];
    let mut missing = want.iter().filter(|&&w| w).count();
    if missing == 0 {
        return Ok(found);
    }
    for sigma in consistent_matchings(inst, c, edge_bound)? {
        let verdict = eval_sigma(inst, mu, c, sigma);
        for (i, &mode) in BlockMode::ALL.iter().enumerate() {
            if want[i] && found[i].is_none() && verdict.blocks(mode) {
                found[i] = Some(sigma);
                missing -= 1;
            }
        }
        if missing == 0 {
            break;
        }
    }
    Ok(found)
}

/// First matching in 𝓜(C) under which the coalition blocks `mu` in the
/// given mode, if any.
pub fn coalition_blocks(
    inst: &Instance,
    mu: ElemSet,
    c: &Coalition,
    mode: BlockMode,
    edge_bound: usize,
) -> Result<Option<CoalitionBlockReport>, MarketError> {
    inst.require_matching(mu)?;
    if c.is_empty() {
        return Err(MarketError::EmptyCoalition);
    }
    let slot = BlockMode::ALL.iter().position(|&m| m == mode).unwrap();
    let mut want = [false; 3];
    want[slot] = true;
    let found = scan_coalition(inst, mu, c, want, edge_bound)?;
    Ok(found[slot].map(|witness_sigma| CoalitionBlockReport {
        coalition: *c,
        mode,
        witness_sigma,
    }))
}

fn check_vertex_bound(inst: &Instance, opts: &CoreOptions) -> Result<(), MarketError> {
    if inst.n_vertices() > opts.vertex_bound {
        return Err(MarketError::BoundExceeded {
            what: "vertex set",
            size: inst.n_vertices(),
            bound: opts.vertex_bound,
        });
    }
    Ok(())
}

/// Scans all non-empty coalitions and reports membership in each core.
pub fn core_membership(
    inst: &Instance,
    mu: ElemSet,
    opts: &CoreOptions,
) -> Result<CoreMembership, MarketError> {
    inst.require_matching(mu)?;
    check_vertex_bound(inst, opts)?;
    let nd = inst.n_doctors();
    let nv = inst.n_vertices();
    let mut unblocked = [true; 3];
    for mask in 1..(1u64 << nv) {
        if opts.prune_hospital_free && (mask >> nd) == 0 {
            continue;
        }
        let c = Coalition::from_vertex_mask(inst, mask);
        let found = scan_coalition(inst, mu, &c, unblocked, opts.edge_bound)?;
        for i in 0..3 {
            if found[i].is_some() {
                unblocked[i] = false;
            }
        }
        if unblocked.iter().all(|&u| !u) {
            break;
        }
    }
    Ok(CoreMembership {
        in_weak_core: unblocked[0],
        in_strong_core: unblocked[1],
        in_super_core: unblocked[2],
    })
}

/// First blocking coalition in canonical order (ascending vertex mask,
/// doctors in the low bits) for the given mode, if any.
pub fn find_blocking_coalition(
    inst: &Instance,
    mu: ElemSet,
    mode: BlockMode,
    opts: &CoreOptions,
) -> Result<Option<CoalitionBlockReport>, MarketError> {
    inst.require_matching(mu)?;
    check_vertex_bound(inst, opts)?;
    let nd = inst.n_doctors();
    let nv = inst.n_vertices();
    for mask in 1..(1u64 << nv) {
        if opts.prune_hospital_free && (mask >> nd) == 0 {
            continue;
        }
        let c = Coalition::from_vertex_mask(inst, mask);
        if let Some(report) = coalition_blocks(inst, mu, &c, mode, opts.edge_bound)? {
            return Ok(Some(report));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::MatroidDesc;
    use crate::sets::subsets_of;
    use crate::stability::{stability_class, StabilityNotion};

    fn set(elems: &[usize]) -> ElemSet {
        elems.iter().copied().collect()
    }

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn two_one(utils: [u64; 2], cap: usize) -> Instance {
        Instance::from_parts(
            names("d", 2),
            names("h", 1),
            vec![(0, 0), (1, 0)],
            vec![vec![vec![0]], vec![vec![1]]],
            utils.to_vec(),
            vec![MatroidDesc::Uniform { capacity: cap }],
        )
        .unwrap()
    }

    fn two_two_crossed() -> Instance {
        Instance::from_parts(
            names("d", 2),
            names("h", 2),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![vec![vec![0], vec![1]], vec![vec![3], vec![2]]],
            vec![1, 2, 2, 1],
            vec![MatroidDesc::Uniform { capacity: 1 }, MatroidDesc::Uniform { capacity: 1 }],
        )
        .unwrap()
    }

    #[test]
    fn consistency_examples() {
        let inst = two_one([2, 1], 1);
        let c = Coalition::new(&inst, [0], [0]).unwrap();
        assert!(is_consistent(&inst, ElemSet::EMPTY, &c).unwrap());

        let all = Coalition::all_vertices(&inst).unwrap();
        for mu in enumerate_matchings(&inst, DEFAULT_EDGE_BOUND).unwrap() {
            assert!(is_consistent(&inst, mu, &all).unwrap());
        }

        // d1 matched to h2 while the coalition only spans {d1,h1}
        let crossed = two_two_crossed();
        let c = Coalition::new(&crossed, [0], [0]).unwrap();
        assert!(!is_consistent(&crossed, set(&[1]), &c).unwrap());
    }

    #[test]
    fn coalitions_validate_members() {
        let inst = two_one([1, 1], 1);
        assert_eq!(
            Coalition::new(&inst, [], []).unwrap_err(),
            MarketError::EmptyCoalition
        );
        assert_eq!(
            Coalition::new(&inst, [7], []).unwrap_err(),
            MarketError::UnknownVertex("doctor index 7".into())
        );
        assert_eq!(
            Coalition::new(&inst, [], [1]).unwrap_err(),
            MarketError::UnknownVertex("hospital index 1".into())
        );
    }

    #[test]
    fn consistent_matchings_examples() {
        let inst = two_one([2, 1], 1);

        // doctors only: no internal edges
        let doctors_only = Coalition::new(&inst, [0, 1], []).unwrap();
        assert_eq!(
            consistent_matchings(&inst, &doctors_only, DEFAULT_EDGE_BOUND).unwrap(),
            vec![ElemSet::EMPTY]
        );

        // one internal edge
        let c = Coalition::new(&inst, [0], [0]).unwrap();
        assert_eq!(
            consistent_matchings(&inst, &c, DEFAULT_EDGE_BOUND).unwrap(),
            vec![ElemSet::EMPTY, set(&[0])]
        );

        // bound refusal
        assert_eq!(
            consistent_matchings(&inst, &Coalition::all_vertices(&inst).unwrap(), 1).unwrap_err(),
            MarketError::BoundExceeded { what: "coalition edge set", size: 2, bound: 1 }
        );
    }

    #[test]
    fn matching_enumeration_examples() {
        let empty = Instance::from_parts(vec![], vec![], vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(enumerate_matchings(&empty, 12).unwrap(), vec![ElemSet::EMPTY]);

        let one = Instance::from_parts(
            names("d", 1),
            names("h", 1),
            vec![(0, 0)],
            vec![vec![vec![0]]],
            vec![1],
            vec![MatroidDesc::Uniform { capacity: 1 }],
        )
        .unwrap();
        assert_eq!(enumerate_matchings(&one, 12).unwrap(), vec![ElemSet::EMPTY, set(&[0])]);

        let cap2 = two_one([2, 1], 2);
        assert_eq!(
            enumerate_matchings(&cap2, 12).unwrap(),
            vec![ElemSet::EMPTY, set(&[0]), set(&[1]), set(&[0, 1])]
        );

        assert!(matches!(
            enumerate_matchings(&cap2, 1),
            Err(MarketError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn matching_enumeration_matches_subset_filter() {
        for inst in [two_one([2, 1], 1), two_two_crossed()] {
            let expected: Vec<ElemSet> = subsets_of(inst.all_edges())
                .filter(|&mu| inst.is_matching(mu).unwrap())
                .collect();
            assert_eq!(enumerate_matchings(&inst, 12).unwrap(), expected);
        }
    }

    #[test]
    fn consistent_matchings_agree_with_filtered_enumeration() {
        let inst = two_two_crossed();
        for dmask in subsets_of(set(&[0, 1])) {
            for hmask in subsets_of(set(&[0, 1])) {
                if dmask.is_empty() && hmask.is_empty() {
                    continue;
                }
                let c = Coalition::new(&inst, dmask.iter(), hmask.iter()).unwrap();
                let within = c.edges_within(&inst);
                let expected: Vec<ElemSet> = enumerate_matchings(&inst, 12)
                    .unwrap()
                    .into_iter()
                    .filter(|mu| mu.is_subset_of(within))
                    .collect();
                assert_eq!(consistent_matchings(&inst, &c, 12).unwrap(), expected);
            }
        }
    }

    #[test]
    fn coalition_blocking_examples() {
        // strict instance, best doctor matched: {d1,h1} cannot strictly
        // improve for d1
        let strict = two_one([2, 1], 1);
        let c = Coalition::new(&strict, [0], [0]).unwrap();
        assert_eq!(
            coalition_blocks(&strict, set(&[0]), &c, BlockMode::Strong, 12).unwrap(),
            None
        );

        // tie instance: {d2,h1} blocks weakly but not strongly
        let tie = two_one([1, 1], 1);
        let c = Coalition::new(&tie, [1], [0]).unwrap();
        let report = coalition_blocks(&tie, set(&[0]), &c, BlockMode::Weak, 12).unwrap().unwrap();
        assert_eq!(report.witness_sigma, set(&[1]));
        assert_eq!(report.mode, BlockMode::Weak);
        assert_eq!(
            coalition_blocks(&tie, set(&[0]), &c, BlockMode::Strong, 12).unwrap(),
            None
        );
        let sw =
            coalition_blocks(&tie, set(&[0]), &c, BlockMode::SuperWeak, 12).unwrap().unwrap();
        assert_eq!(sw.witness_sigma, set(&[1]));
    }

    #[test]
    fn block_mode_hierarchy_on_witnesses() {
        for inst in [two_one([2, 1], 1), two_one([1, 1], 1), two_two_crossed()] {
            let nv = inst.n_vertices();
            let nd = inst.n_doctors();
            for mu in enumerate_matchings(&inst, 12).unwrap() {
                for mask in 1..(1u64 << nv) {
                    let c = Coalition::from_vertex_mask(&inst, mask);
                    let strong =
                        coalition_blocks(&inst, mu, &c, BlockMode::Strong, 12).unwrap();
                    let weak = coalition_blocks(&inst, mu, &c, BlockMode::Weak, 12).unwrap();
                    let sw = coalition_blocks(&inst, mu, &c, BlockMode::SuperWeak, 12).unwrap();
                    if let Some(r) = &strong {
                        let v = eval_sigma(&inst, mu, &c, r.witness_sigma);
                        assert!(v.blocks(BlockMode::Weak), "strong witness must block weakly");
                        assert!(weak.is_some());
                    }
                    if let Some(r) = &weak {
                        let v = eval_sigma(&inst, mu, &c, r.witness_sigma);
                        assert!(v.blocks(BlockMode::SuperWeak));
                        assert!(sw.is_some());
                    }
                    // lemma: blocking coalitions contain a hospital
                    for r in [&strong, &weak, &sw].into_iter().flatten() {
                        assert!(
                            !r.coalition.hospitals().is_empty(),
                            "blocker without hospital at mask {mask}, nd {nd}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn core_membership_examples() {
        let strict = two_one([2, 1], 1);
        let opts = CoreOptions::default();

        // super-stable matching sits in the super core
        assert!(stability_class(&strict, set(&[0])).unwrap().super_stable);
        assert_eq!(
            core_membership(&strict, set(&[0]), &opts).unwrap(),
            CoreMembership { in_weak_core: true, in_strong_core: true, in_super_core: true }
        );

        // tie instance: {d2,h1} refutes the strong core but not the weak one
        let tie = two_one([1, 1], 1);
        let membership = core_membership(&tie, set(&[0]), &opts).unwrap();
        assert!(membership.in_weak_core);
        assert!(!membership.in_strong_core);
        assert!(!membership.in_super_core);

        // empty instance
        let empty = Instance::from_parts(vec![], vec![], vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(
            core_membership(&empty, ElemSet::EMPTY, &opts).unwrap(),
            CoreMembership { in_weak_core: true, in_strong_core: true, in_super_core: true }
        );
    }

    #[test]
    fn core_hierarchy_and_prune_agreement() {
        let pruned = CoreOptions::default();
        let full = CoreOptions { prune_hospital_free: false, ..CoreOptions::default() };
        for inst in [two_one([2, 1], 1), two_one([1, 1], 1), two_one([1, 1], 2), two_two_crossed()]
        {
            for mu in enumerate_matchings(&inst, 12).unwrap() {
                let a = core_membership(&inst, mu, &pruned).unwrap();
                let b = core_membership(&inst, mu, &full).unwrap();
                assert_eq!(a, b, "prune changed the verdict at mu={mu}");
                assert!(!a.in_super_core || a.in_strong_core);
                assert!(!a.in_strong_core || a.in_weak_core);
            }
        }
    }

    #[test]
    fn first_blocking_coalition_is_canonical() {
        let tie = two_one([1, 1], 1);
        let opts = CoreOptions::default();
        let report =
            find_blocking_coalition(&tie, set(&[0]), BlockMode::Weak, &opts).unwrap().unwrap();
        assert_eq!(report.coalition.doctors(), set(&[1]));
        assert_eq!(report.coalition.hospitals(), set(&[0]));
        assert_eq!(report.witness_sigma, set(&[1]));
        assert_eq!(report.coalition.describe(&tie), "{d2,h1}");

        let full = CoreOptions { prune_hospital_free: false, ..opts };
        assert_eq!(
            find_blocking_coalition(&tie, set(&[0]), BlockMode::Weak, &full).unwrap(),
            Some(report)
        );
    }

    #[test]
    fn core_scan_refuses_oversized_instances() {
        let tie = two_one([1, 1], 1);
        let opts = CoreOptions { vertex_bound: 2, ..CoreOptions::default() };
        assert_eq!(
            core_membership(&tie, ElemSet::EMPTY, &opts).unwrap_err(),
            MarketError::BoundExceeded { what: "vertex set", size: 3, bound: 2 }
        );
    }

    #[test]
    fn stability_and_core_line_up_on_small_instances() {
        // S ⊆ C, SS = C_S, SSS = C_SS, checked exhaustively here on a few
        // hand instances ahead of the generated sweep
        let opts = CoreOptions::default();
        for inst in [two_one([2, 1], 1), two_one([1, 1], 1), two_one([1, 2], 2), two_two_crossed()]
        {
            for mu in enumerate_matchings(&inst, 12).unwrap() {
                let class = stability_class(&inst, mu).unwrap();
                let core = core_membership(&inst, mu, &opts).unwrap();
                if class.satisfies(StabilityNotion::Weak) {
                    assert!(core.in_weak_core, "S ⊆ C fails at mu={mu}");
                }
                assert_eq!(
                    class.satisfies(StabilityNotion::Strong),
                    core.in_strong_core,
                    "SS = C_S fails at mu={mu}"
                );
                assert_eq!(
                    class.satisfies(StabilityNotion::Super),
                    core.in_super_core,
                    "SSS = C_SS fails at mu={mu}"
                );
            }
        }
    }
}
