//! Matroids over small ground sets, driven by an independence predicate.
//!
//! A matroid is a pair (ground set, independence family) where the family is
//! non-empty, downward closed, and satisfies the augmentation axiom: for
//! independent I, J with |I| < |J| some u in J \ I keeps I + u independent.
//! Everything here treats independence as a black-box predicate; exhaustive
//! operations (axiom checking, circuit enumeration) refuse ground sets larger
//! than a caller-supplied bound instead of sampling.
//!
//! Tie-breaking is "first in ground order" throughout: greedy completion,
//! Brualdi candidate choice, and exchange-ordering element selection all scan
//! the ground set in its fixed construction order, so results are
//! reproducible across runs.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::sets::{subsets_of, ElemSet, MAX_ELEMENTS};

/// Default cap on ground-set size for exhaustive operations.
pub const DEFAULT_GROUND_BOUND: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatroidError {
    #[error("element id {0} is out of range (ids must be below {MAX_ELEMENTS})")]
    ElementOutOfRange(usize),
    #[error("duplicate element {0} in ground set")]
    DuplicateElement(usize),
    #[error("ground set has {size} elements, over the exhaustive-check bound {bound}; refusing")]
    GroundTooLarge { size: usize, bound: usize },
    #[error("set {0} is not contained in the ground set")]
    NotInGround(ElemSet),
    #[error("element {0} is not in the ground set")]
    ElementNotInGround(usize),
    #[error("element {0} is already in the given set")]
    ElementInSet(usize),
    #[error("set {0} is dependent; expected an independent set")]
    DependentSet(ElemSet),
    #[error("{set} + {element} is independent, so it contains no circuit")]
    NoFundamentalCircuit { set: ElemSet, element: usize },
    #[error("set {0} is not a base")]
    NotABase(ElemSet),
    #[error("bases are not distinct")]
    BasesNotDistinct,
    #[error("element {element} is not in the first base minus the second")]
    NotInBaseDifference { element: usize },
    #[error("capacity must be at least 1")]
    ZeroCapacity,
    #[error("zero capacity on non-empty set {0}")]
    ZeroCapacityOnSet(ElemSet),
    #[error("sets {0} and {1} overlap without nesting; family is not laminar")]
    NotLaminar(ElemSet, ElemSet),
    #[error("set {0} is not a subset of the ground set")]
    FamilySetNotInGround(ElemSet),
    #[error("explicit family is not a matroid: {0}")]
    NotAMatroid(AxiomViolation),
    #[error("no exchange partner for element {element}: the independence predicate violates the matroid axioms")]
    ExchangeFailure { element: usize },
}

/// Ground set with a fixed element order.
///
/// The order is the construction order and never changes; restriction keeps
/// the relative order of surviving elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    order: Vec<usize>,
    mask: ElemSet,
}

impl GroundSet {
    pub fn new(elements: impl IntoIterator<Item = usize>) -> Result<GroundSet, MatroidError> {
        let order: Vec<usize> = elements.into_iter().collect();
        let mut mask = ElemSet::EMPTY;
        for &e in &order {
            if e >= MAX_ELEMENTS {
                return Err(MatroidError::ElementOutOfRange(e));
            }
            if mask.contains(e) {
                return Err(MatroidError::DuplicateElement(e));
            }
            mask = mask.with(e);
        }
        Ok(GroundSet { order, mask })
    }

    /// Ground set 0..n in ascending order.
    pub fn range(n: usize) -> GroundSet {
        GroundSet::new(0..n).expect("range ground set is always valid")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn mask(&self) -> ElemSet {
        self.mask
    }

    pub fn contains(&self, e: usize) -> bool {
        self.mask.contains(e)
    }

    /// Elements in ground order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().copied()
    }

    /// First element of `set` in ground order.
    pub fn first_of(&self, set: ElemSet) -> Option<usize> {
        self.order.iter().copied().find(|&e| set.contains(e))
    }

    /// Set whose dense index is `dense` relative to ground order
    /// (bit i = order[i]).
    fn decompress(&self, dense: usize) -> ElemSet {
        let mut set = ElemSet::EMPTY;
        for (i, &e) in self.order.iter().enumerate() {
            if dense & (1 << i) != 0 {
                set = set.with(e);
            }
        }
        set
    }
}

/// Black-box independence predicate, total on subsets of the ground set.
pub trait IndependenceOracle: Send + Sync {
    fn is_independent(&self, set: ElemSet) -> bool;
}

impl<F: Fn(ElemSet) -> bool + Send + Sync> IndependenceOracle for F {
    fn is_independent(&self, set: ElemSet) -> bool {
        self(set)
    }
}

/// Outcome of the exhaustive axiom check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomReport {
    Pass,
    Violated(AxiomViolation),
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomReport::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    /// No subset is independent.
    EmptyFamily,
    /// `superset` is independent but `subset` (one element smaller) is not.
    DownwardClosure { subset: ElemSet, superset: ElemSet },
    /// |smaller| < |larger|, both independent, but no element of
    /// larger \ smaller augments smaller.
    Augmentation { smaller: ElemSet, larger: ElemSet },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::EmptyFamily => write!(f, "no subset is independent"),
            AxiomViolation::DownwardClosure { subset, superset } => write!(
                f,
                "downward closure fails: {superset} is independent but its subset {subset} is not"
            ),
            AxiomViolation::Augmentation { smaller, larger } => write!(
                f,
                "augmentation fails: nothing in {larger} minus {smaller} extends {smaller}"
            ),
        }
    }
}

/// A circuit: a minimal dependent set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit(pub ElemSet);

impl Circuit {
    pub fn members(self) -> ElemSet {
        self.0
    }
}

/// Paired orderings turning one base into another one swap at a time.
///
/// `removed` lists b \ b2 as (e_1..e_k), `inserted` lists b2 \ b as
/// (f_1..f_k), with e_i in the fundamental circuit of f_i w.r.t. b and every
/// intermediate (b2 \ {f_1..f_i}) + {e_1..e_i} a base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeOrdering {
    pub removed: Vec<usize>,
    pub inserted: Vec<usize>,
}

/// Immutable matroid: a ground set plus a shared independence oracle.
#[derive(Clone)]
pub struct Matroid {
    ground: GroundSet,
    oracle: Arc<dyn IndependenceOracle>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid").field("ground", &self.ground).finish_non_exhaustive()
    }
}

impl Matroid {
    /// Wraps a predicate without validating the axioms; `check_axioms` is the
    /// way to validate when the predicate is untrusted.
    pub fn from_oracle(ground: GroundSet, oracle: impl IndependenceOracle + 'static) -> Matroid {
        Matroid { ground, oracle: Arc::new(oracle) }
    }

    /// Free matroid: every subset independent.
    pub fn free(ground: GroundSet) -> Matroid {
        Matroid::from_oracle(ground, |_: ElemSet| true)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn is_independent(&self, set: ElemSet) -> bool {
        debug_assert!(set.is_subset_of(self.ground.mask()));
        self.oracle.is_independent(set)
    }

    /// Exhaustively verifies non-emptiness, downward closure, and
    /// augmentation. Refuses ground sets larger than `bound`.
    pub fn check_axioms(&self, bound: usize) -> Result<AxiomReport, MatroidError> {
        let table = self.independence_table(bound)?;
        let k = self.ground.len();

        if !table.iter().any(|&b| b) {
            return Ok(AxiomReport::Violated(AxiomViolation::EmptyFamily));
        }

        // downward closure via single removals; witness scan removes the
        // latest ground position first
        for dense in 0..1usize << k {
            if !table[dense] {
                continue;
            }
            for i in (0..k).rev() {
                let bit = 1usize << i;
                if dense & bit != 0 && !table[dense ^ bit] {
                    return Ok(AxiomReport::Violated(AxiomViolation::DownwardClosure {
                        subset: self.ground.decompress(dense ^ bit),
                        superset: self.ground.decompress(dense),
                    }));
                }
            }
        }

        // augmentation over every independent pair with |I| < |J|
        for small in 0..1usize << k {
            if !table[small] {
                continue;
            }
            let small_size = (small as u64).count_ones();
            for large in 0..1usize << k {
                if !table[large] || (large as u64).count_ones() <= small_size {
                    continue;
                }
                let extra = large & !small;
                let mut augments = false;
                let mut bits = extra;
                while bits != 0 {
                    let bit = bits & bits.wrapping_neg();
                    if table[small | bit] {
                        augments = true;
                        break;
                    }
                    bits ^= bit;
                }
                if !augments {
                    return Ok(AxiomReport::Violated(AxiomViolation::Augmentation {
                        smaller: self.ground.decompress(small),
                        larger: self.ground.decompress(large),
                    }));
                }
            }
        }

        Ok(AxiomReport::Pass)
    }

    /// True iff `set` is independent and maximally so.
    pub fn is_base(&self, set: ElemSet) -> bool {
        assert!(set.is_subset_of(self.ground.mask()), "set {set} not within the ground set");
        if !self.is_independent(set) {
            return false;
        }
        self.ground.iter().all(|e| set.contains(e) || !self.is_independent(set.with(e)))
    }

    /// All circuits (minimal dependent sets), ascending in the ground's
    /// dense subset order. Exhaustive; refuses large grounds.
    pub fn circuits(&self, bound: usize) -> Result<Vec<Circuit>, MatroidError> {
        let table = self.independence_table(bound)?;
        let k = self.ground.len();
        let mut out = Vec::new();
        for dense in 0..1usize << k {
            if table[dense] {
                continue;
            }
            let mut minimal = true;
            for i in 0..k {
                let bit = 1usize << i;
                if dense & bit != 0 && !table[dense ^ bit] {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(Circuit(self.ground.decompress(dense)));
            }
        }
        Ok(out)
    }

    /// The unique circuit inside `set + element`, for independent `set`.
    ///
    /// Computed by the removal characterization: v belongs to the circuit iff
    /// set + element - v is independent. Costs |set| + 1 oracle queries.
    pub fn fundamental_circuit(&self, element: usize, set: ElemSet) -> Result<Circuit, MatroidError> {
        if !set.is_subset_of(self.ground.mask()) {
            return Err(MatroidError::NotInGround(set));
        }
        if !self.is_independent(set) {
            return Err(MatroidError::DependentSet(set));
        }
        if !self.ground.contains(element) {
            return Err(MatroidError::ElementNotInGround(element));
        }
        if set.contains(element) {
            return Err(MatroidError::ElementInSet(element));
        }
        let extended = set.with(element);
        if self.is_independent(extended) {
            return Err(MatroidError::NoFundamentalCircuit { set, element });
        }
        let mut circuit = ElemSet::EMPTY;
        for v in extended.iter() {
            if self.is_independent(extended.without(v)) {
                circuit = circuit.with(v);
            }
        }
        Ok(Circuit(circuit))
    }

    /// Fundamental circuit minus the added element itself: the members of
    /// `set` that can be dropped to make room for `element`.
    pub fn d_set(&self, element: usize, set: ElemSet) -> Result<ElemSet, MatroidError> {
        Ok(self.fundamental_circuit(element, set)?.members().without(element))
    }

    /// Restriction to `subset`: same independence, smaller ground set.
    /// Element order is inherited.
    pub fn restrict(&self, subset: ElemSet) -> Matroid {
        assert!(
            subset.is_subset_of(self.ground.mask()),
            "restriction {subset} is not within the ground set"
        );
        let order: Vec<usize> = self.ground.iter().filter(|&e| subset.contains(e)).collect();
        Matroid {
            ground: GroundSet { order, mask: subset },
            oracle: Arc::clone(&self.oracle),
        }
    }

    /// Greedy completion of an independent set to a base, scanning the
    /// ground set in order and keeping every element that preserves
    /// independence.
    pub fn extend_to_base(&self, set: ElemSet) -> Result<ElemSet, MatroidError> {
        if !set.is_subset_of(self.ground.mask()) {
            return Err(MatroidError::NotInGround(set));
        }
        if !self.is_independent(set) {
            return Err(MatroidError::DependentSet(set));
        }
        let mut base = set;
        for e in self.ground.iter() {
            if !base.contains(e) && self.is_independent(base.with(e)) {
                base = base.with(e);
            }
        }
        Ok(base)
    }

    /// Rank: size of any base.
    pub fn rank(&self) -> usize {
        let mut base = ElemSet::EMPTY;
        for e in self.ground.iter() {
            if self.is_independent(base.with(e)) {
                base = base.with(e);
            }
        }
        base.len()
    }

    /// For distinct bases `b`, `b2` and `e` in b \ b2, the ground-order-first
    /// f in b2 \ b with e in the fundamental circuit of f w.r.t. b and f in
    /// the fundamental circuit of e w.r.t. b2. Such an f always exists in a
    /// genuine matroid.
    pub fn brualdi_exchange(&self, b: ElemSet, b2: ElemSet, e: usize) -> Result<usize, MatroidError> {
        if !self.is_base_checked(b)? {
            return Err(MatroidError::NotABase(b));
        }
        if !self.is_base_checked(b2)? {
            return Err(MatroidError::NotABase(b2));
        }
        if b == b2 {
            return Err(MatroidError::BasesNotDistinct);
        }
        if !b.minus(b2).contains(e) {
            return Err(MatroidError::NotInBaseDifference { element: e });
        }
        self.brualdi_partner(b, b2, e)
    }

    fn is_base_checked(&self, set: ElemSet) -> Result<bool, MatroidError> {
        if !set.is_subset_of(self.ground.mask()) {
            return Err(MatroidError::NotInGround(set));
        }
        Ok(self.is_base(set))
    }

    fn brualdi_partner(&self, b: ElemSet, b2: ElemSet, e: usize) -> Result<usize, MatroidError> {
        let candidates = b2.minus(b);
        for f in self.ground.iter() {
            if !candidates.contains(f) {
                continue;
            }
            // e in C(f, b) iff b + f - e is independent; f in C(e, b2)
            // iff b2 + e - f is independent
            if self.is_independent(b.with(f).without(e)) && self.is_independent(b2.with(e).without(f))
            {
                return Ok(f);
            }
        }
        Err(MatroidError::ExchangeFailure { element: e })
    }

    /// Paired exchange orderings from `b2` to `b`, built inductively: at each
    /// step take the ground-order-first x still missing from the working base
    /// and swap in its Brualdi partner.
    pub fn exchange_ordering(&self, b: ElemSet, b2: ElemSet) -> Result<ExchangeOrdering, MatroidError> {
        if !self.is_base_checked(b)? {
            return Err(MatroidError::NotABase(b));
        }
        if !self.is_base_checked(b2)? {
            return Err(MatroidError::NotABase(b2));
        }
        if b == b2 {
            return Err(MatroidError::BasesNotDistinct);
        }
        let mut removed = Vec::new();
        let mut inserted = Vec::new();
        let mut current = b2;
        while let Some(x) = self.ground.first_of(b.minus(current)) {
            let y = self.brualdi_partner(b, current, x)?;
            removed.push(x);
            inserted.push(y);
            current = current.without(y).with(x);
        }
        debug_assert_eq!(current, b);
        Ok(ExchangeOrdering { removed, inserted })
    }

    /// Dense truth table of the predicate over all subsets; the exhaustive
    /// backbone for `check_axioms` and `circuits`.
    fn independence_table(&self, bound: usize) -> Result<Vec<bool>, MatroidError> {
        let k = self.ground.len();
        if k > bound {
            return Err(MatroidError::GroundTooLarge { size: k, bound });
        }
        Ok((0..1usize << k)
            .map(|dense| self.oracle.is_independent(self.ground.decompress(dense)))
            .collect())
    }

    /// All bases, ascending in dense subset order. Exhaustive.
    pub fn bases(&self, bound: usize) -> Result<Vec<ElemSet>, MatroidError> {
        let k = self.ground.len();
        if k > bound {
            return Err(MatroidError::GroundTooLarge { size: k, bound });
        }
        Ok(subsets_of(self.ground.mask()).filter(|&s| self.is_base(s)).collect())
    }
}
