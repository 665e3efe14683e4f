//! The bipartite market model.
//!
//! Doctors rank their incident edges in tiers (ties within a tier, empty
//! strictly below everything). Hospitals carry a matroid over their incident
//! edges plus positive integer utilities; independent sets are compared by
//! utility sums, which yields a complete, transitive, responsive order with
//! ties arising from equal sums. A matching assigns each doctor at most one
//! edge and each hospital an independent set.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::matroid::{GroundSet, Matroid, MatroidError};
use crate::matroid_impls::{make_explicit, make_laminar, make_uniform};
use crate::sets::{subsets_of, ElemSet, MAX_ELEMENTS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MarketError {
    #[error("duplicate doctor name {0:?}")]
    DuplicateDoctor(String),
    #[error("duplicate hospital name {0:?}")]
    DuplicateHospital(String),
    #[error("instance has {count} edges; at most {MAX_ELEMENTS} are supported")]
    TooManyEdges { count: usize },
    #[error("edge {index} references a doctor or hospital that does not exist")]
    EdgeEndpointOutOfRange { index: usize },
    #[error("duplicate edge ({doctor},{hospital})")]
    DuplicateEdge { doctor: String, hospital: String },
    #[error("expected {expected} {what} entries, got {got}")]
    WrongArity { what: &'static str, expected: usize, got: usize },
    #[error("utility of edge {edge} must be positive")]
    ZeroUtility { edge: String },
    #[error("doctor {doctor} has an empty preference tier")]
    EmptyTier { doctor: String },
    #[error("tier of doctor {doctor} lists edge {edge}, which is not incident to them")]
    TierForeignEdge { doctor: String, edge: String },
    #[error("edge {edge} appears in more than one tier of doctor {doctor}")]
    TierDuplicateEdge { doctor: String, edge: String },
    #[error("edge {edge} is missing from the tiers of doctor {doctor}")]
    TierMissingEdge { doctor: String, edge: String },
    #[error("matroid of hospital {hospital}: {source}")]
    BadMatroid { hospital: String, source: MatroidError },
    #[error("matroid of hospital {hospital} makes single edge {edge} dependent")]
    SingletonDependent { hospital: String, edge: String },
    #[error("edge id {edge} is not part of the instance")]
    EdgeNotInInstance { edge: usize },
    #[error("edge {edge} is not incident to doctor {doctor}")]
    NotIncidentToDoctor { edge: String, doctor: String },
    #[error("edge {edge} is not incident to hospital {hospital}")]
    NotIncidentToHospital { edge: String, hospital: String },
    #[error("set {set} is dependent in the matroid of hospital {hospital}")]
    DependentHospitalSet { hospital: String, set: ElemSet },
    #[error("edge {edge} is already in the matching")]
    EdgeInMatching { edge: String },
    #[error("not a matching: {0}")]
    NotAMatching(MatchingViolation),
    #[error("{what} has size {size}, over the enumeration bound {bound}; refusing")]
    BoundExceeded { what: &'static str, size: usize, bound: usize },
    #[error("coalition is empty")]
    EmptyCoalition,
    #[error("coalition member {0} is not a vertex of the instance")]
    UnknownVertex(String),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// Why an edge set fails to be a matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    DoctorOverloaded { doctor: String, count: usize },
    DependentAssignment { hospital: String, set: ElemSet },
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::DoctorOverloaded { doctor, count } => {
                write!(f, "doctor {doctor} is assigned {count} edges (at most one allowed)")
            }
            MatchingViolation::DependentAssignment { hospital, set } => {
                write!(f, "assignment {set} of hospital {hospital} is dependent in its matroid")
            }
        }
    }
}

/// Per-hospital matroid descriptor, the serializable form a matroid is built
/// from. Laminar sets and explicit families list edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidDesc {
    Uniform { capacity: usize },
    Laminar { sets: Vec<(Vec<usize>, usize)> },
    Explicit { independent: Vec<Vec<usize>> },
}

impl MatroidDesc {
    fn build(&self, ground: GroundSet) -> Result<Matroid, MatroidError> {
        match self {
            MatroidDesc::Uniform { capacity } => make_uniform(ground, *capacity),
            MatroidDesc::Laminar { sets } => {
                let sets = sets
                    .iter()
                    .map(|(edges, cap)| (edges.iter().copied().collect(), *cap))
                    .collect();
                make_laminar(ground, sets)
            }
            MatroidDesc::Explicit { independent } => {
                let family =
                    independent.iter().map(|edges| edges.iter().copied().collect()).collect();
                make_explicit(ground, family)
            }
        }
    }

    /// Sorts member lists (and for explicit families the outer list) so that
    /// equal descriptors compare equal after a save/load round trip.
    fn canonicalize(&mut self) {
        match self {
            MatroidDesc::Uniform { .. } => {}
            MatroidDesc::Laminar { sets } => {
                for (edges, _) in sets.iter_mut() {
                    edges.sort_unstable();
                    edges.dedup();
                }
            }
            MatroidDesc::Explicit { independent } => {
                for edges in independent.iter_mut() {
                    edges.sort_unstable();
                    edges.dedup();
                }
                independent.sort();
                independent.dedup();
            }
        }
    }
}

/// An immutable market instance. Edges are identified by their index in the
/// construction order, which also fixes every ground-order tie-break.
#[derive(Clone, Debug)]
pub struct Instance {
    doctors: Vec<String>,
    hospitals: Vec<String>,
    edges: Vec<(usize, usize)>,
    doctor_edges: Vec<ElemSet>,
    hospital_edges: Vec<ElemSet>,
    tiers: Vec<Vec<Vec<usize>>>,
    tier_rank: Vec<usize>,
    utility: Vec<u64>,
    matroids: Vec<Matroid>,
    matroid_descs: Vec<MatroidDesc>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Instance) -> bool {
        // matroids are determined by their descriptors
        self.doctors == other.doctors
            && self.hospitals == other.hospitals
            && self.edges == other.edges
            && self.tiers == other.tiers
            && self.utility == other.utility
            && self.matroid_descs == other.matroid_descs
    }
}

impl Instance {
    /// Builds and fully validates an instance from index-based parts.
    ///
    /// `edges` pairs are (doctor index, hospital index); `tiers` lists edge
    /// ids per doctor, best tier first; `utilities` is indexed by edge;
    /// `matroids` gives one descriptor per hospital.
    pub fn from_parts(
        doctors: Vec<String>,
        hospitals: Vec<String>,
        edges: Vec<(usize, usize)>,
        tiers: Vec<Vec<Vec<usize>>>,
        utilities: Vec<u64>,
        matroids: Vec<MatroidDesc>,
    ) -> Result<Instance, MarketError> {
        for (i, d) in doctors.iter().enumerate() {
            if doctors[..i].contains(d) {
                return Err(MarketError::DuplicateDoctor(d.clone()));
            }
        }
        for (i, h) in hospitals.iter().enumerate() {
            if hospitals[..i].contains(h) {
                return Err(MarketError::DuplicateHospital(h.clone()));
            }
        }
        if edges.len() > MAX_ELEMENTS {
            return Err(MarketError::TooManyEdges { count: edges.len() });
        }
        let mut doctor_edges = vec![ElemSet::EMPTY; doctors.len()];
        let mut hospital_edges = vec![ElemSet::EMPTY; hospitals.len()];
        for (i, &(d, h)) in edges.iter().enumerate() {
            if d >= doctors.len() || h >= hospitals.len() {
                return Err(MarketError::EdgeEndpointOutOfRange { index: i });
            }
            if edges[..i].contains(&(d, h)) {
                return Err(MarketError::DuplicateEdge {
                    doctor: doctors[d].clone(),
                    hospital: hospitals[h].clone(),
                });
            }
            doctor_edges[d] = doctor_edges[d].with(i);
            hospital_edges[h] = hospital_edges[h].with(i);
        }

        if utilities.len() != edges.len() {
            return Err(MarketError::WrongArity {
                what: "utility",
                expected: edges.len(),
                got: utilities.len(),
            });
        }
        if tiers.len() != doctors.len() {
            return Err(MarketError::WrongArity {
                what: "doctor preference",
                expected: doctors.len(),
                got: tiers.len(),
            });
        }
        if matroids.len() != hospitals.len() {
            return Err(MarketError::WrongArity {
                what: "matroid",
                expected: hospitals.len(),
                got: matroids.len(),
            });
        }

        let edge_name = |e: usize| format!("({},{})", doctors[edges[e].0], hospitals[edges[e].1]);

        for (e, &u) in utilities.iter().enumerate() {
            if u == 0 {
                return Err(MarketError::ZeroUtility { edge: edge_name(e) });
            }
        }

        // tier order within a tier is meaningless; canonicalize so equal
        // instances compare equal after serialization round trips
        let mut tiers = tiers;
        for doctor_tiers in tiers.iter_mut() {
            for tier in doctor_tiers.iter_mut() {
                tier.sort_unstable();
            }
        }

        let mut tier_rank = vec![usize::MAX; edges.len()];
        for (d, doctor_tiers) in tiers.iter().enumerate() {
            let mut seen = ElemSet::EMPTY;
            for (rank, tier) in doctor_tiers.iter().enumerate() {
                if tier.is_empty() {
                    return Err(MarketError::EmptyTier { doctor: doctors[d].clone() });
                }
                for &e in tier {
                    if e >= edges.len() || !doctor_edges[d].contains(e) {
                        return Err(MarketError::TierForeignEdge {
                            doctor: doctors[d].clone(),
                            edge: if e < edges.len() {
                                edge_name(e)
                            } else {
                                format!("#{e}")
                            },
                        });
                    }
                    if seen.contains(e) {
                        return Err(MarketError::TierDuplicateEdge {
                            doctor: doctors[d].clone(),
                            edge: edge_name(e),
                        });
                    }
                    seen = seen.with(e);
                    tier_rank[e] = rank;
                }
            }
            if let Some(missing) = doctor_edges[d].minus(seen).first() {
                return Err(MarketError::TierMissingEdge {
                    doctor: doctors[d].clone(),
                    edge: edge_name(missing),
                });
            }
        }

        let mut built = Vec::with_capacity(hospitals.len());
        let mut descs = matroids;
        for (h, desc) in descs.iter_mut().enumerate() {
            desc.canonicalize();
            let ground = GroundSet::new(hospital_edges[h].iter())
                .map_err(|source| MarketError::BadMatroid { hospital: hospitals[h].clone(), source })?;
            let m = desc
                .build(ground)
                .map_err(|source| MarketError::BadMatroid { hospital: hospitals[h].clone(), source })?;
            for e in hospital_edges[h].iter() {
                if !m.is_independent(ElemSet::singleton(e)) {
                    return Err(MarketError::SingletonDependent {
                        hospital: hospitals[h].clone(),
                        edge: edge_name(e),
                    });
                }
            }
            built.push(m);
        }

        Ok(Instance {
            doctors,
            hospitals,
            edges,
            doctor_edges,
            hospital_edges,
            tiers,
            tier_rank,
            utility: utilities,
            matroids: built,
            matroid_descs: descs,
        })
    }

    pub fn n_doctors(&self) -> usize {
        self.doctors.len()
    }

    pub fn n_hospitals(&self) -> usize {
        self.hospitals.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.doctors.len() + self.hospitals.len()
    }

    pub fn doctor_name(&self, d: usize) -> &str {
        &self.doctors[d]
    }

    pub fn hospital_name(&self, h: usize) -> &str {
        &self.hospitals[h]
    }

    /// (doctor index, hospital index) of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_name(&self, e: usize) -> String {
        let (d, h) = self.edges[e];
        format!("({},{})", self.doctors[d], self.hospitals[h])
    }

    /// All edge ids as a set.
    pub fn all_edges(&self) -> ElemSet {
        (0..self.edges.len()).collect()
    }

    pub fn doctor_edges(&self, d: usize) -> ElemSet {
        self.doctor_edges[d]
    }

    pub fn hospital_edges(&self, h: usize) -> ElemSet {
        self.hospital_edges[h]
    }

    pub fn matroid(&self, h: usize) -> &Matroid {
        &self.matroids[h]
    }

    pub fn matroid_desc(&self, h: usize) -> &MatroidDesc {
        &self.matroid_descs[h]
    }

    pub fn tiers(&self, d: usize) -> &[Vec<usize>] {
        &self.tiers[d]
    }

    /// Tier index of edge `e` within its doctor's ranking (0 = best).
    pub fn tier_rank(&self, e: usize) -> usize {
        self.tier_rank[e]
    }

    pub fn utility(&self, e: usize) -> u64 {
        self.utility[e]
    }

    pub fn utility_sum(&self, set: ElemSet) -> u64 {
        set.iter().map(|e| self.utility[e]).sum()
    }

    /// The edge assigned to doctor `d`, assuming `mu` is a matching.
    pub fn mu_doctor(&self, mu: ElemSet, d: usize) -> Option<usize> {
        mu.intersect(self.doctor_edges[d]).first()
    }

    /// The edge set assigned to hospital `h`.
    pub fn mu_hospital(&self, mu: ElemSet, h: usize) -> ElemSet {
        mu.intersect(self.hospital_edges[h])
    }

    fn require_edges(&self, set: ElemSet) -> Result<(), MarketError> {
        match set.minus(self.all_edges()).first() {
            Some(e) => Err(MarketError::EdgeNotInInstance { edge: e }),
            None => Ok(()),
        }
    }

    /// First matching condition violated by `mu`, if any.
    pub fn matching_violation(&self, mu: ElemSet) -> Result<Option<MatchingViolation>, MarketError> {
        self.require_edges(mu)?;
        for d in 0..self.doctors.len() {
            let assigned = mu.intersect(self.doctor_edges[d]);
            if assigned.len() > 1 {
                return Ok(Some(MatchingViolation::DoctorOverloaded {
                    doctor: self.doctors[d].clone(),
                    count: assigned.len(),
                }));
            }
        }
        for h in 0..self.hospitals.len() {
            let assigned = mu.intersect(self.hospital_edges[h]);
            if !self.matroids[h].is_independent(assigned) {
                return Ok(Some(MatchingViolation::DependentAssignment {
                    hospital: self.hospitals[h].clone(),
                    set: assigned,
                }));
            }
        }
        Ok(None)
    }

    pub fn is_matching(&self, mu: ElemSet) -> Result<bool, MarketError> {
        Ok(self.matching_violation(mu)?.is_none())
    }

    /// Errors unless `mu` is a matching.
    pub fn require_matching(&self, mu: ElemSet) -> Result<(), MarketError> {
        match self.matching_violation(mu)? {
            Some(v) => Err(MarketError::NotAMatching(v)),
            None => Ok(()),
        }
    }

    fn require_incident_to_doctor(&self, d: usize, x: Option<usize>) -> Result<(), MarketError> {
        if let Some(e) = x {
            if e >= self.edges.len() {
                return Err(MarketError::EdgeNotInInstance { edge: e });
            }
            if self.edges[e].0 != d {
                return Err(MarketError::NotIncidentToDoctor {
                    edge: self.edge_name(e),
                    doctor: self.doctors[d].clone(),
                });
            }
        }
        Ok(())
    }

    /// Compares two incident-edge-or-empty options for doctor `d`:
    /// `Greater` means `x` is preferred. Lower tier index wins; the empty
    /// option sits strictly below every tier.
    pub fn doctor_compare(
        &self,
        d: usize,
        x: Option<usize>,
        y: Option<usize>,
    ) -> Result<Ordering, MarketError> {
        self.require_incident_to_doctor(d, x)?;
        self.require_incident_to_doctor(d, y)?;
        Ok(self.doctor_compare_fast(x, y))
    }

    /// Same comparison without incidence validation; callers guarantee
    /// x, y ∈ E(d) ∪ {∅}.
    pub fn doctor_compare_fast(&self, x: Option<usize>, y: Option<usize>) -> Ordering {
        let rank = |o: Option<usize>| o.map_or(usize::MAX, |e| self.tier_rank[e]);
        rank(y).cmp(&rank(x))
    }

    fn require_independent_at(&self, h: usize, set: ElemSet) -> Result<(), MarketError> {
        if let Some(e) = set.minus(self.hospital_edges[h]).first() {
            let edge = if e < self.edges.len() {
                self.edge_name(e)
            } else {
                format!("#{e}")
            };
            return Err(MarketError::NotIncidentToHospital {
                edge,
                hospital: self.hospitals[h].clone(),
            });
        }
        if !self.matroids[h].is_independent(set) {
            return Err(MarketError::DependentHospitalSet {
                hospital: self.hospitals[h].clone(),
                set,
            });
        }
        Ok(())
    }

    /// Compares two independent sets of hospital `h` by utility sum:
    /// `Greater` means `i` is preferred. The empty set loses to every
    /// non-empty independent set because utilities are positive.
    pub fn hospital_compare_sets(
        &self,
        h: usize,
        i: ElemSet,
        j: ElemSet,
    ) -> Result<Ordering, MarketError> {
        self.require_independent_at(h, i)?;
        self.require_independent_at(h, j)?;
        Ok(self.utility_sum(i).cmp(&self.utility_sum(j)))
    }

    /// Compares two incident edges of `h` as singletons.
    pub fn hospital_compare_edges(
        &self,
        h: usize,
        e: usize,
        f: usize,
    ) -> Result<Ordering, MarketError> {
        self.hospital_compare_sets(h, ElemSet::singleton(e), ElemSet::singleton(f))
    }

    /// Exhaustively verifies that hospital `h`'s set order is responsive:
    /// swap consistency (weak, strict, and indifferent forms) plus
    /// monotonicity. The additive order always passes; this re-derives that
    /// fact instance by instance.
    pub fn check_responsive(&self, h: usize, bound: usize) -> Result<ResponsiveReport, MarketError> {
        let report = check_responsive_order(&self.matroids[h], bound, |i, j| {
            self.utility_sum(i).cmp(&self.utility_sum(j))
        })?;
        Ok(report)
    }
}

/// Outcome of the exhaustive responsiveness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResponsiveReport {
    Pass,
    Violated(ResponsivenessViolation),
}

impl ResponsiveReport {
    pub fn passed(&self) -> bool {
        matches!(self, ResponsiveReport::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResponsivenessViolation {
    /// I ≻ I − e fails for `set` = I and `edge` = e.
    Monotonicity { set: ElemSet, edge: usize },
    /// (I + e − f ≿ I) iff (e ≿ f) fails.
    WeakSwap { set: ElemSet, added: usize, removed: usize },
    /// (I + e − f ≻ I) iff (e ≻ f) fails.
    StrictSwap { set: ElemSet, added: usize, removed: usize },
    /// (I + e − f ∼ I) iff (e ∼ f) fails.
    IndifferentSwap { set: ElemSet, added: usize, removed: usize },
}

impl fmt::Display for ResponsivenessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponsivenessViolation::Monotonicity { set, edge } => {
                write!(f, "monotonicity fails: {set} does not beat {set} minus {edge}")
            }
            ResponsivenessViolation::WeakSwap { set, added, removed } => {
                write!(f, "weak swap consistency fails at I={set}, e={added}, f={removed}")
            }
            ResponsivenessViolation::StrictSwap { set, added, removed } => {
                write!(f, "strict swap consistency fails at I={set}, e={added}, f={removed}")
            }
            ResponsivenessViolation::IndifferentSwap { set, added, removed } => {
                write!(f, "indifference swap consistency fails at I={set}, e={added}, f={removed}")
            }
        }
    }
}

/// Responsiveness check against an arbitrary complete set order, supplied as
/// a comparison function (`Greater` = first argument preferred). Edge
/// comparisons are singleton comparisons of the same order. Exhaustive over
/// the independent sets of `matroid`; refuses grounds larger than `bound`.
pub fn check_responsive_order<F>(
    matroid: &Matroid,
    bound: usize,
    set_cmp: F,
) -> Result<ResponsiveReport, MatroidError>
where
    F: Fn(ElemSet, ElemSet) -> Ordering,
{
    let ground = matroid.ground();
    if ground.len() > bound {
        return Err(MatroidError::GroundTooLarge { size: ground.len(), bound });
    }
    for i in subsets_of(ground.mask()) {
        if !matroid.is_independent(i) {
            continue;
        }
        for e in i.iter() {
            if set_cmp(i, i.without(e)) != Ordering::Greater {
                return Ok(ResponsiveReport::Violated(ResponsivenessViolation::Monotonicity {
                    set: i,
                    edge: e,
                }));
            }
        }
        for e in ground.mask().minus(i).iter() {
            for f in i.iter() {
                let swapped = i.with(e).without(f);
                if !matroid.is_independent(swapped) {
                    continue;
                }
                let lhs = set_cmp(swapped, i);
                let rhs = set_cmp(ElemSet::singleton(e), ElemSet::singleton(f));
                if (lhs != Ordering::Less) != (rhs != Ordering::Less) {
                    return Ok(ResponsiveReport::Violated(ResponsivenessViolation::WeakSwap {
                        set: i,
                        added: e,
                        removed: f,
                    }));
                }
                if (lhs == Ordering::Greater) != (rhs == Ordering::Greater) {
                    return Ok(ResponsiveReport::Violated(ResponsivenessViolation::StrictSwap {
                        set: i,
                        added: e,
                        removed: f,
                    }));
                }
                if (lhs == Ordering::Equal) != (rhs == Ordering::Equal) {
                    return Ok(ResponsiveReport::Violated(
                        ResponsivenessViolation::IndifferentSwap { set: i, added: e, removed: f },
                    ));
                }
            }
        }
    }
    Ok(ResponsiveReport::Pass)
}
