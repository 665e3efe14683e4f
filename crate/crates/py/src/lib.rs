//! Python extension module. Mirrors the CLI's vocabulary: instances load
//! from the same JSON format, matchings are lists of (doctor, hospital)
//! name pairs, and the matroid type exposes the exchange machinery over
//! integer elements.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use matroid_markets::core::{core_membership, enumerate_matchings, CoreOptions};
use matroid_markets::files;
use matroid_markets::harness::{self, GenConfig, MatroidKind};
use matroid_markets::market::{self, ResponsiveReport};
use matroid_markets::matroid::{self, AxiomReport, GroundSet};
use matroid_markets::matroid_impls::{make_explicit, make_free, make_laminar, make_uniform};
use matroid_markets::sets::ElemSet;
use matroid_markets::stability::{
    find_blocking_edges, stability_class, BlockKind, SideBlock, StabilityNotion,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn vec_from_set(set: ElemSet) -> Vec<usize> {
    set.iter().collect()
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

/// (edge, doctor side, hospital side, overall kind, witness edge).
type BlockRow = ((String, String), String, String, String, Option<(String, String)>);

/// A matroid over integer elements, with exhaustive operations bounded at
/// twelve ground elements.
#[pyclass(frozen, name = "Matroid")]
struct PyMatroid {
    inner: matroid::Matroid,
}

impl PyMatroid {
    fn set_from(&self, elems: Vec<usize>) -> PyResult<ElemSet> {
        let ground = self.inner.ground().mask();
        let mut out = ElemSet::EMPTY;
        for e in elems {
            if e >= matroid_markets::sets::MAX_ELEMENTS || !ground.contains(e) {
                return Err(value_err(format!("element {e} is not in the ground set")));
            }
            out = out.with(e);
        }
        Ok(out)
    }
}

fn ground_range(n: usize) -> PyResult<GroundSet> {
    if n == 0 || n > matroid_markets::sets::MAX_ELEMENTS {
        return Err(value_err(format!(
            "ground size {n} out of range 1..={}",
            matroid_markets::sets::MAX_ELEMENTS
        )));
    }
    Ok(GroundSet::range(n))
}

const EXHAUSTIVE_BOUND: usize = 12;

#[pymethods]
impl PyMatroid {
    /// Uniform matroid on elements 0..n: independence is |S| <= capacity.
    #[staticmethod]
    fn uniform(n: usize, capacity: usize) -> PyResult<Self> {
        Ok(PyMatroid { inner: make_uniform(ground_range(n)?, capacity).map_err(value_err)? })
    }

    /// Laminar matroid on 0..n from (members, cap) pairs; the sets must be
    /// pairwise nested or disjoint.
    #[staticmethod]
    fn laminar(n: usize, sets: Vec<(Vec<usize>, usize)>) -> PyResult<Self> {
        let ground = ground_range(n)?;
        let mask = ground.mask();
        let mut converted = Vec::with_capacity(sets.len());
        for (members, cap) in sets {
            let mut s = ElemSet::EMPTY;
            for e in members {
                if e >= matroid_markets::sets::MAX_ELEMENTS || !mask.contains(e) {
                    return Err(value_err(format!("element {e} is not in the ground set")));
                }
                s = s.with(e);
            }
            converted.push((s, cap));
        }
        Ok(PyMatroid { inner: make_laminar(ground, converted).map_err(value_err)? })
    }

    /// Matroid from a fully listed independence family; the axioms are
    /// checked and violations rejected.
    #[staticmethod]
    fn explicit(n: usize, independent: Vec<Vec<usize>>) -> PyResult<Self> {
        let ground = ground_range(n)?;
        let mask = ground.mask();
        let mut family = Vec::with_capacity(independent.len());
        for members in independent {
            let mut s = ElemSet::EMPTY;
            for e in members {
                if e >= matroid_markets::sets::MAX_ELEMENTS || !mask.contains(e) {
                    return Err(value_err(format!("element {e} is not in the ground set")));
                }
                s = s.with(e);
            }
            family.push(s);
        }
        Ok(PyMatroid { inner: make_explicit(ground, family).map_err(value_err)? })
    }

    /// Free matroid on 0..n: every subset independent.
    #[staticmethod]
    fn free(n: usize) -> PyResult<Self> {
        Ok(PyMatroid { inner: make_free(ground_range(n)?) })
    }

    #[getter]
    fn ground(&self) -> Vec<usize> {
        self.inner.ground().iter().collect()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn is_independent(&self, set: Vec<usize>) -> PyResult<bool> {
        Ok(self.inner.is_independent(self.set_from(set)?))
    }

    fn is_base(&self, set: Vec<usize>) -> PyResult<bool> {
        Ok(self.inner.is_base(self.set_from(set)?))
    }

    fn bases(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(self
            .inner
            .bases(EXHAUSTIVE_BOUND)
            .map_err(value_err)?
            .into_iter()
            .map(vec_from_set)
            .collect())
    }

    fn circuits(&self) -> PyResult<Vec<Vec<usize>>> {
        Ok(self
            .inner
            .circuits(EXHAUSTIVE_BOUND)
            .map_err(value_err)?
            .into_iter()
            .map(|c| vec_from_set(c.members()))
            .collect())
    }

    /// The unique circuit inside set + element, for independent set.
    fn fundamental_circuit(&self, element: usize, set: Vec<usize>) -> PyResult<Vec<usize>> {
        let set = self.set_from(set)?;
        Ok(vec_from_set(self.inner.fundamental_circuit(element, set).map_err(value_err)?.members()))
    }

    /// Members of set droppable to make room for element.
    fn d_set(&self, element: usize, set: Vec<usize>) -> PyResult<Vec<usize>> {
        let set = self.set_from(set)?;
        Ok(vec_from_set(self.inner.d_set(element, set).map_err(value_err)?))
    }

    /// For bases b != b2 and e in b - b2, the exchange partner f in b2 - b
    /// with both single swaps independent.
    fn brualdi_exchange(&self, b: Vec<usize>, b2: Vec<usize>, e: usize) -> PyResult<usize> {
        self.inner
            .brualdi_exchange(self.set_from(b)?, self.set_from(b2)?, e)
            .map_err(value_err)
    }

    /// Paired orderings (removed, inserted) of the base differences whose
    /// stepwise swaps walk from b2 to b through bases.
    fn exchange_ordering(
        &self,
        b: Vec<usize>,
        b2: Vec<usize>,
    ) -> PyResult<(Vec<usize>, Vec<usize>)> {
        let ord =
            self.inner.exchange_ordering(self.set_from(b)?, self.set_from(b2)?).map_err(value_err)?;
        Ok((ord.removed, ord.inserted))
    }

    /// None when the axioms hold, otherwise a description of the violation.
    fn check_axioms(&self) -> PyResult<Option<String>> {
        match self.inner.check_axioms(EXHAUSTIVE_BOUND).map_err(value_err)? {
            AxiomReport::Pass => Ok(None),
            AxiomReport::Violated(v) => Ok(Some(v.to_string())),
        }
    }

    fn restrict(&self, subset: Vec<usize>) -> PyResult<Self> {
        Ok(PyMatroid { inner: self.inner.restrict(self.set_from(subset)?) })
    }

    fn __repr__(&self) -> String {
        format!("Matroid(ground={}, rank={})", self.inner.ground().len(), self.inner.rank())
    }
}

/// A market instance: doctors with tiered preferences, hospitals with
/// matroids and utilities. Matchings are lists of (doctor, hospital) name
/// pairs.
#[pyclass(frozen, name = "Instance")]
struct PyInstance {
    inner: market::Instance,
}

impl PyInstance {
    fn matching_from(&self, pairs: Vec<(String, String)>) -> PyResult<ElemSet> {
        let text = serde_json::to_string(&pairs).expect("pairs serialize");
        let mu = files::matching_from_str(&self.inner, &text).map_err(value_err)?;
        self.inner.require_matching(mu).map_err(value_err)?;
        Ok(mu)
    }

    fn edge_pair(&self, e: usize) -> (String, String) {
        let (d, h) = self.inner.endpoints(e);
        (self.inner.doctor_name(d).to_string(), self.inner.hospital_name(h).to_string())
    }

    fn matching_to(&self, mu: ElemSet) -> Vec<(String, String)> {
        mu.iter().map(|e| self.edge_pair(e)).collect()
    }

    fn hospital_id(&self, name: &str) -> PyResult<usize> {
        (0..self.inner.n_hospitals())
            .find(|&h| self.inner.hospital_name(h) == name)
            .ok_or_else(|| value_err(format!("unknown hospital {name:?}")))
    }
}

#[pymethods]
impl PyInstance {
    /// Parses the instance JSON format (same schema the CLI reads).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyInstance { inner: files::instance_from_str(text).map_err(value_err)? })
    }

    /// Deterministically generates a random instance.
    #[staticmethod]
    #[pyo3(signature = (n_doctors, n_hospitals, edge_probability=0.5, tie_intensity=0.5, matroid_kind="mixed", seed=0))]
    fn generate(
        n_doctors: usize,
        n_hospitals: usize,
        edge_probability: f64,
        tie_intensity: f64,
        matroid_kind: &str,
        seed: u64,
    ) -> PyResult<Self> {
        let kind = match matroid_kind {
            "uniform" => MatroidKind::Uniform,
            "laminar" => MatroidKind::Laminar,
            "mixed" => MatroidKind::Mixed,
            other => return Err(value_err(format!("unknown matroid kind {other:?}"))),
        };
        let config = GenConfig {
            n_doctors,
            n_hospitals,
            edge_probability,
            tie_intensity,
            matroid_kind: kind,
            seed,
        };
        Ok(PyInstance { inner: harness::generate(&config).map_err(value_err)? })
    }

    fn to_json(&self) -> String {
        files::instance_to_string(&self.inner)
    }

    #[getter]
    fn doctors(&self) -> Vec<String> {
        (0..self.inner.n_doctors()).map(|d| self.inner.doctor_name(d).to_string()).collect()
    }

    #[getter]
    fn hospitals(&self) -> Vec<String> {
        (0..self.inner.n_hospitals()).map(|h| self.inner.hospital_name(h).to_string()).collect()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String)> {
        (0..self.inner.n_edges()).map(|e| self.edge_pair(e)).collect()
    }

    /// (weakly_stable, strongly_stable, super_stable) of a matching.
    fn stability(&self, matching: Vec<(String, String)>) -> PyResult<(bool, bool, bool)> {
        let mu = self.matching_from(matching)?;
        let class = stability_class(&self.inner, mu).map_err(value_err)?;
        Ok((class.weakly_stable, class.strongly_stable, class.super_stable))
    }

    /// Every blocking edge of a matching as (edge, doctor_side,
    /// hospital_side, overall, witness) with sides in
    /// none/weak/strong and overall in none/super_weak/weak/strong.
    fn blocking_edges(&self, matching: Vec<(String, String)>) -> PyResult<Vec<BlockRow>> {
        let mu = self.matching_from(matching)?;
        let reports =
            find_blocking_edges(&self.inner, mu, StabilityNotion::Super).map_err(value_err)?;
        Ok(reports
            .into_iter()
            .map(|r| {
                (
                    self.edge_pair(r.edge),
                    side_name(r.blocks_on_d).to_string(),
                    side_name(r.blocks_on_h).to_string(),
                    kind_name(r.overall).to_string(),
                    r.witness_f.map(|f| self.edge_pair(f)),
                )
            })
            .collect())
    }

    /// (in_weak_core, in_strong_core, in_super_core) of a matching.
    fn core_membership(&self, matching: Vec<(String, String)>) -> PyResult<(bool, bool, bool)> {
        let mu = self.matching_from(matching)?;
        let m = core_membership(&self.inner, mu, &CoreOptions::default()).map_err(value_err)?;
        Ok((m.in_weak_core, m.in_strong_core, m.in_super_core))
    }

    /// Every matching of the instance.
    fn matchings(&self) -> PyResult<Vec<Vec<(String, String)>>> {
        let all = enumerate_matchings(&self.inner, CoreOptions::default().edge_bound)
            .map_err(value_err)?;
        Ok(all.into_iter().map(|mu| self.matching_to(mu)).collect())
    }

    /// Sizes (|S|, |SS|, |SSS|, |C|, |C_S|, |C_SS|) from the exhaustive scan.
    fn six_set_sizes(&self) -> PyResult<(usize, usize, usize, usize, usize, usize)> {
        let report =
            harness::verify_theorems(&self.inner, &CoreOptions::default()).map_err(value_err)?;
        let s = report.sizes;
        Ok((s.s, s.ss, s.sss, s.c, s.c_s, s.c_ss))
    }

    /// Checks S subset of C, SS = C_S, SSS = C_SS exhaustively; returns
    /// (all_pass, violation descriptions).
    fn verify(&self) -> PyResult<(bool, Vec<String>)> {
        let report =
            harness::verify_theorems(&self.inner, &CoreOptions::default()).map_err(value_err)?;
        let details = report
            .violations
            .iter()
            .map(|v| format!("{}: {}", v.relation, v.detail))
            .collect();
        Ok((report.all_pass(), details))
    }

    /// None when the hospital's set order is responsive, otherwise a
    /// description of the violation.
    fn check_responsive(&self, hospital: &str) -> PyResult<Option<String>> {
        let h = self.hospital_id(hospital)?;
        match self.inner.check_responsive(h, EXHAUSTIVE_BOUND).map_err(value_err)? {
            ResponsiveReport::Pass => Ok(None),
            ResponsiveReport::Violated(v) => Ok(Some(v.to_string())),
        }
    }

    /// The hospital's matroid over global edge ids.
    fn matroid(&self, hospital: &str) -> PyResult<PyMatroid> {
        let h = self.hospital_id(hospital)?;
        Ok(PyMatroid { inner: self.inner.matroid(h).clone() })
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(doctors={}, hospitals={}, edges={})",
            self.inner.n_doctors(),
            self.inner.n_hospitals(),
            self.inner.n_edges(),
        )
    }
}

#[pymodule(name = "matroid_markets")]
fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyMatroid>()?;
    Ok(())
}
