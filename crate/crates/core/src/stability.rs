//! Edge-blocking classification and the three stability predicates.
//!
//! An edge outside the matching can block on its doctor side (strictly
//! better than the current assignment, or tied with it) and on its hospital
//! side (a free slot, or a swap against some member of the fundamental
//! circuit). Combining the two sides yields strong, weak, and super-weak
//! blocking, which in turn define weak, strong, and super stability.

use crate::market::{Instance, MarketError};
use crate::sets::ElemSet;
use std::cmp::Ordering;

/// One side's verdict on a candidate edge. `Weak` means a tie exactly, so
/// "weakly blocks" in the non-strict sense is `Weak` or `Strong`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SideBlock {
    None,
    Weak,
    Strong,
}

/// Overall strength of a blocking edge, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BlockKind {
    None,
    SuperWeak,
    Weak,
    Strong,
}

/// The three stability notions, each refuted by a different minimum
/// blocking strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityNotion {
    Weak,
    Strong,
    Super,
}

impl StabilityNotion {
    /// Weakest overall classification that refutes this notion.
    pub fn refuting_threshold(self) -> BlockKind {
        match self {
            StabilityNotion::Weak => BlockKind::Strong,
            StabilityNotion::Strong => BlockKind::Weak,
            StabilityNotion::Super => BlockKind::SuperWeak,
        }
    }
}

impl BlockKind {
    pub fn refutes(self, notion: StabilityNotion) -> bool {
        self >= notion.refuting_threshold()
    }
}

/// Full classification of one edge against a matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBlockReport {
    pub edge: usize,
    pub blocks_on_d: SideBlock,
    pub blocks_on_h: SideBlock,
    pub overall: BlockKind,
    /// Hospital-side certificate: a member of D(e, μ(h)) the hospital would
    /// give up for `edge`. Absent when the slot is free (or nothing blocks).
    pub witness_f: Option<usize>,
}

/// Which of the three stability predicates a matching satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityClass {
    pub weakly_stable: bool,
    pub strongly_stable: bool,
    pub super_stable: bool,
}

impl StabilityClass {
    pub fn satisfies(&self, notion: StabilityNotion) -> bool {
        match notion {
            StabilityNotion::Weak => self.weakly_stable,
            StabilityNotion::Strong => self.strongly_stable,
            StabilityNotion::Super => self.super_stable,
        }
    }
}

fn require_candidate(inst: &Instance, mu: ElemSet, e: usize) -> Result<(), MarketError> {
    inst.require_matching(mu)?;
    if e >= inst.n_edges() {
        return Err(MarketError::EdgeNotInInstance { edge: e });
    }
    if mu.contains(e) {
        return Err(MarketError::EdgeInMatching { edge: inst.edge_name(e) });
    }
    Ok(())
}

fn doctor_side(inst: &Instance, mu: ElemSet, e: usize) -> SideBlock {
    let d = inst.endpoints(e).0;
    match inst.doctor_compare_fast(Some(e), inst.mu_doctor(mu, d)) {
        Ordering::Greater => SideBlock::Strong,
        Ordering::Equal => SideBlock::Weak,
        Ordering::Less => SideBlock::None,
    }
}

fn hospital_side(
    inst: &Instance,
    mu: ElemSet,
    e: usize,
) -> Result<(SideBlock, Option<usize>), MarketError> {
    let h = inst.endpoints(e).1;
    let assigned = inst.mu_hospital(mu, h);
    let m = inst.matroid(h);
    if m.is_independent(assigned.with(e)) {
        // a free slot satisfies the strict condition outright
        return Ok((SideBlock::Strong, None));
    }
    let d_set = m.d_set(e, assigned)?;
    let mut tied = None;
    for f in m.ground().iter().filter(|&f| d_set.contains(f)) {
        match inst.hospital_compare_edges(h, e, f)? {
            Ordering::Greater => return Ok((SideBlock::Strong, Some(f))),
            Ordering::Equal => {
                if tied.is_none() {
                    tied = Some(f);
                }
            }
            Ordering::Less => {}
        }
    }
    match tied {
        Some(f) => Ok((SideBlock::Weak, Some(f))),
        None => Ok((SideBlock::None, None)),
    }
}

fn combine(on_d: SideBlock, on_h: SideBlock) -> BlockKind {
    let weakest = on_d.min(on_h);
    let strongest = on_d.max(on_h);
    match (weakest, strongest) {
        (SideBlock::Strong, _) => BlockKind::Strong,
        (SideBlock::Weak, SideBlock::Strong) => BlockKind::Weak,
        (SideBlock::Weak, _) => BlockKind::SuperWeak,
        (SideBlock::None, _) => BlockKind::None,
    }
}

/// Doctor-side verdict for `e ∈ E \ μ`: strong iff `e` beats the doctor's
/// assignment, weak iff it ties it.
pub fn blocks_on_doctor(inst: &Instance, mu: ElemSet, e: usize) -> Result<SideBlock, MarketError> {
    require_candidate(inst, mu, e)?;
    Ok(doctor_side(inst, mu, e))
}

/// Hospital-side verdict for `e ∈ E \ μ`, with the swap witness. A free
/// slot is strong with no witness; otherwise the fundamental-circuit set
/// D(e, μ(h)) is scanned and the qualifying member of highest strength,
/// ground-order-first, is returned.
pub fn blocks_on_hospital(
    inst: &Instance,
    mu: ElemSet,
    e: usize,
) -> Result<(SideBlock, Option<usize>), MarketError> {
    require_candidate(inst, mu, e)?;
    hospital_side(inst, mu, e)
}

/// Combines both sides for `e ∈ E \ μ`: strong iff both sides strong, weak
/// iff both at least weak with one strong, super-weak iff both at least
/// weak.
pub fn classify_edge(inst: &Instance, mu: ElemSet, e: usize) -> Result<EdgeBlockReport, MarketError> {
    require_candidate(inst, mu, e)?;
    classify_unchecked(inst, mu, e)
}

fn classify_unchecked(inst: &Instance, mu: ElemSet, e: usize) -> Result<EdgeBlockReport, MarketError> {
    let blocks_on_d = doctor_side(inst, mu, e);
    let (blocks_on_h, witness_f) = hospital_side(inst, mu, e)?;
    Ok(EdgeBlockReport {
        edge: e,
        blocks_on_d,
        blocks_on_h,
        overall: combine(blocks_on_d, blocks_on_h),
        witness_f,
    })
}

/// Scans every edge outside `mu` and reports which stability predicates
/// survive.
pub fn stability_class(inst: &Instance, mu: ElemSet) -> Result<StabilityClass, MarketError> {
    inst.require_matching(mu)?;
    let mut class =
        StabilityClass { weakly_stable: true, strongly_stable: true, super_stable: true };
    for e in inst.all_edges().minus(mu).iter() {
        match classify_unchecked(inst, mu, e)?.overall {
            BlockKind::Strong => {
                class.weakly_stable = false;
                class.strongly_stable = false;
                class.super_stable = false;
                break;
            }
            BlockKind::Weak => {
                class.strongly_stable = false;
                class.super_stable = false;
            }
            BlockKind::SuperWeak => {
                class.super_stable = false;
            }
            BlockKind::None => {}
        }
    }
    Ok(class)
}

/// All edges whose classification refutes `notion`, ascending by edge id.
pub fn find_blocking_edges(
    inst: &Instance,
    mu: ElemSet,
    notion: StabilityNotion,
) -> Result<Vec<EdgeBlockReport>, MarketError> {
    inst.require_matching(mu)?;
    let mut out = Vec::new();
    for e in inst.all_edges().minus(mu).iter() {
        let report = classify_unchecked(inst, mu, e)?;
        if report.overall.refutes(notion) {
            out.push(report);
        }
    }
    Ok(out)
}
