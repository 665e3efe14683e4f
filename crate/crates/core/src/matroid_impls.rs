//! Concrete matroid realizations: uniform, laminar, explicit-family, free.
//!
//! Uniform and laminar matroids are the two forms hospitals carry in
//! instance files. The explicit form exists so tests can exercise matroids
//! that are neither; it is axiom-checked at construction, always.

use std::collections::HashSet;

use crate::matroid::{
    AxiomReport, GroundSet, IndependenceOracle, Matroid, MatroidError, DEFAULT_GROUND_BOUND,
};
use crate::sets::ElemSet;

/// Independence iff the subset has at most `capacity` members.
#[derive(Clone, Debug)]
pub struct UniformMatroid {
    pub capacity: usize,
}

impl IndependenceOracle for UniformMatroid {
    fn is_independent(&self, set: ElemSet) -> bool {
        set.len() <= self.capacity
    }
}

/// Independence iff every capped set P satisfies |F ∩ P| ≤ cap(P).
#[derive(Clone, Debug)]
pub struct LaminarMatroid {
    pub sets: Vec<(ElemSet, usize)>,
}

impl IndependenceOracle for LaminarMatroid {
    fn is_independent(&self, set: ElemSet) -> bool {
        self.sets.iter().all(|&(p, cap)| set.intersect(p).len() <= cap)
    }
}

/// Independence by membership in a listed family.
#[derive(Clone, Debug)]
pub struct ExplicitMatroid {
    pub independent: HashSet<ElemSet>,
}

impl IndependenceOracle for ExplicitMatroid {
    fn is_independent(&self, set: ElemSet) -> bool {
        self.independent.contains(&set)
    }
}

/// Every subset independent.
#[derive(Clone, Copy, Debug)]
pub struct FreeMatroid;

impl IndependenceOracle for FreeMatroid {
    fn is_independent(&self, _set: ElemSet) -> bool {
        true
    }
}

pub fn make_uniform(ground: GroundSet, capacity: usize) -> Result<Matroid, MatroidError> {
    if capacity < 1 {
        return Err(MatroidError::ZeroCapacity);
    }
    Ok(Matroid::from_oracle(ground, UniformMatroid { capacity }))
}

pub fn make_laminar(
    ground: GroundSet,
    sets: Vec<(ElemSet, usize)>,
) -> Result<Matroid, MatroidError> {
    for &(p, cap) in &sets {
        if !p.is_subset_of(ground.mask()) {
            return Err(MatroidError::FamilySetNotInGround(p));
        }
        if cap == 0 && !p.is_empty() {
            return Err(MatroidError::ZeroCapacityOnSet(p));
        }
    }
    for (i, &(x, _)) in sets.iter().enumerate() {
        for &(y, _) in &sets[i + 1..] {
            let both = x.intersect(y);
            if !both.is_empty() && both != x && both != y {
                return Err(MatroidError::NotLaminar(x, y));
            }
        }
    }
    Ok(Matroid::from_oracle(ground, LaminarMatroid { sets }))
}

pub fn make_free(ground: GroundSet) -> Matroid {
    Matroid::from_oracle(ground, FreeMatroid)
}

/// Builds a matroid from a fully listed independence family and verifies the
/// axioms exhaustively; families that are not matroids are rejected with the
/// violation report.
pub fn make_explicit(ground: GroundSet, family: Vec<ElemSet>) -> Result<Matroid, MatroidError> {
    for &s in &family {
        if !s.is_subset_of(ground.mask()) {
            return Err(MatroidError::FamilySetNotInGround(s));
        }
    }
    let independent: HashSet<ElemSet> = family.into_iter().collect();
    let m = Matroid::from_oracle(ground, ExplicitMatroid { independent });
    match m.check_axioms(DEFAULT_GROUND_BOUND)? {
        AxiomReport::Pass => Ok(m),
        AxiomReport::Violated(v) => Err(MatroidError::NotAMatroid(v)),
    }
}
