//! Finite measurable partitions, joins of translated partitions, Shannon
//! and conditional entropy, and finite-scale measure-theoretic sequence
//! entropy profiles.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::group::{FiniteGroupSet, FolnerSequence, GroupElement, SubsetGenerator};
use crate::profile::{compute_rows, EntropyProfile, NRange, ProfileRow};
use crate::scalar::Scalar;
use crate::systems::DynamicalSystem;

/// Symbolic partition: a finite window of coordinates and a label for each
/// configuration on the window. A function of the window is automatically a
/// partition: cells are disjoint and cover everything.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPartition {
    alphabet: usize,
    window: Vec<GroupElement>,
    labels: Vec<u32>,
}

impl SymbolicPartition {
    pub fn new(alphabet: usize, mut window: Vec<GroupElement>, labels: Vec<u32>) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::invalid("partition window is empty"));
        }
        window.sort();
        window.dedup();
        let expected = (alphabet as u64).checked_pow(window.len() as u32);
        match expected {
            Some(e) if e == labels.len() as u64 => {}
            _ => {
                return Err(Error::invalid(format!(
                    "labeling has {} entries, window of {} coordinates over alphabet {alphabet} \
                     needs alphabet^|window|",
                    labels.len(),
                    window.len()
                )))
            }
        }
        Ok(SymbolicPartition {
            alphabet,
            window,
            labels,
        })
    }

    /// The generating partition: window `{0}`, labeling the identity.
    pub fn generating(alphabet: usize, dimension: usize) -> Self {
        SymbolicPartition {
            alphabet,
            window: vec![GroupElement::zero(dimension)],
            labels: (0..alphabet as u32).collect(),
        }
    }

    /// The trivial partition `{X}`.
    pub fn trivial(alphabet: usize, dimension: usize) -> Self {
        SymbolicPartition {
            alphabet,
            window: vec![GroupElement::zero(dimension)],
            labels: vec![0; alphabet],
        }
    }

    pub fn window(&self) -> &[GroupElement] {
        &self.window
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn cell_count(&self) -> usize {
        let mut distinct: Vec<u32> = self.labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }

    pub(crate) fn check_alphabet(&self, alphabet: usize) -> Result<()> {
        if self.alphabet != alphabet {
            return Err(Error::invalid(format!(
                "partition was built for alphabet {}, system has {alphabet}",
                self.alphabet
            )));
        }
        Ok(())
    }
}

/// Circle partition: sorted breakpoints, one label per arc. Arc `i` runs
/// from `breakpoints[i]` to the next breakpoint (wrapping at the end).
#[derive(Clone, Debug, PartialEq)]
pub struct CirclePartition<T> {
    breakpoints: Vec<T>,
    labels: Vec<u32>,
}

impl<T: Scalar> CirclePartition<T> {
    pub fn new(breakpoints: Vec<T>, labels: Vec<u32>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::invalid("circle partition needs a breakpoint"));
        }
        if breakpoints.len() != labels.len() {
            return Err(Error::invalid(format!(
                "{} breakpoints but {} labels",
                breakpoints.len(),
                labels.len()
            )));
        }
        let breakpoints: Vec<T> = breakpoints.into_iter().map(|b| b.mod_one()).collect();
        for w in breakpoints.windows(2) {
            if w[0].total_cmp(&w[1]) != std::cmp::Ordering::Less || w[0].coincides(&w[1]) {
                return Err(Error::invalid(
                    "circle breakpoints must be strictly increasing in [0, 1)",
                ));
            }
        }
        Ok(CirclePartition {
            breakpoints,
            labels,
        })
    }

    /// The two-arc partition `{[0, 1/2), [1/2, 1)}`.
    pub fn halves() -> Self {
        CirclePartition {
            breakpoints: vec![T::zero(), T::from_ratio(1, 2)],
            labels: vec![0, 1],
        }
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn label_at(&self, x: &T) -> u32 {
        let x = x.mod_one();
        // Last breakpoint <= x; points below the first breakpoint wrap into
        // the final arc.
        let mut idx = None;
        for (i, bp) in self.breakpoints.iter().enumerate() {
            if bp.total_cmp(&x) != std::cmp::Ordering::Greater {
                idx = Some(i);
            } else {
                break;
            }
        }
        match idx {
            Some(i) => self.labels[i],
            None => *self.labels.last().unwrap(),
        }
    }

    pub fn cell_count(&self) -> usize {
        let mut distinct: Vec<u32> = self.labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    }
}

/// Atoms of a join `⋁ g^{-1}α` with their exact masses: one label vector
/// per atom, masses positive and summing to one.
#[derive(Clone, Debug)]
pub struct CellDistribution<T> {
    cells: Vec<(Vec<u32>, T)>,
}

impl<T: Scalar> CellDistribution<T> {
    pub(crate) fn from_accumulated(
        map: BTreeMap<Vec<u32>, T::Acc>,
    ) -> Result<CellDistribution<T>> {
        let zero = T::zero();
        let mut cells = Vec::with_capacity(map.len());
        let mut total = T::Acc::default();
        for (vec, acc) in map {
            let mass = T::acc_total(&acc);
            if mass.is_negative() {
                return Err(Error::invalid(format!("negative cell mass {mass}")));
            }
            if mass.coincides(&zero) {
                continue;
            }
            T::acc_add(&mut total, &mass);
            cells.push((vec, mass));
        }
        let total = T::acc_total(&total).to_f64();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "cell masses sum to {total}, expected 1 within 1e-9"
            )));
        }
        Ok(CellDistribution { cells })
    }

    pub fn cells(&self) -> &[(Vec<u32>, T)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Shannon entropy of the cell masses, in nats.
    pub fn entropy(&self) -> f64 {
        let mut acc = crate::scalar::Kahan::default();
        for (_, mass) in &self.cells {
            let p = mass.to_f64();
            if p > 0.0 {
                acc.add(-p * p.ln());
            }
        }
        acc.total()
    }
}

/// Shannon entropy `Σ -w log w` in nats, with `0 log 0 = 0`.
pub fn shannon_entropy<T: Scalar>(weights: &[T]) -> Result<f64> {
    let mut total = T::Acc::default();
    for w in weights {
        if w.is_negative() {
            return Err(Error::invalid(format!("negative weight {w}")));
        }
        T::acc_add(&mut total, w);
    }
    let total = T::acc_total(&total).to_f64();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "weights sum to {total}, expected 1 within 1e-9"
        )));
    }
    let mut acc = crate::scalar::Kahan::default();
    for w in weights {
        let p = w.to_f64();
        if p > 0.0 {
            acc.add(-p * p.ln());
        }
    }
    Ok(acc.total())
}

/// The atoms of `⋁_{g ∈ gens} g^{-1}α` with exact masses.
pub fn join_cells<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    partition: &S::Partition,
    gens: &FiniteGroupSet,
    budget: u64,
) -> Result<CellDistribution<T>> {
    if gens.is_empty() {
        return Err(Error::invalid("join over an empty set of group elements"));
    }
    let items: Vec<(GroupElement, &S::Partition)> =
        gens.iter().map(|g| (g.clone(), partition)).collect();
    sys.join_distribution(&items, budget)
}

/// Entropy of a single partition, `H(α)`.
pub fn partition_entropy<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    partition: &S::Partition,
    budget: u64,
) -> Result<f64> {
    let zero = GroupElement::zero(sys.dimension());
    Ok(sys
        .join_distribution(&[(zero, partition)], budget)?
        .entropy())
}

/// Conditional entropy `H(α | β) = H(α ∨ β) - H(β)`.
pub fn conditional_entropy<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    alpha: &S::Partition,
    beta: &S::Partition,
    budget: u64,
) -> Result<f64> {
    let zero = GroupElement::zero(sys.dimension());
    let joint = sys
        .join_distribution(&[(zero.clone(), alpha), (zero.clone(), beta)], budget)?
        .entropy();
    let base = sys.join_distribution(&[(zero, beta)], budget)?.entropy();
    Ok((joint - base).max(0.0))
}

/// Finite-scale measure-theoretic sequence entropy profile: for each `n`,
/// the entropy of `⋁_{g ∈ S ∩ F_n} g^{-1}α` and its normalization by
/// `|S ∩ F_n|`. Rows with `S ∩ F_n = ∅` are skipped; a capacity failure
/// truncates the profile and flags it.
pub fn seq_entropy_profile<T: Scalar, S: DynamicalSystem<T>>(
    sys: &S,
    partition: &S::Partition,
    subset: &SubsetGenerator,
    folner: &FolnerSequence,
    range: &NRange,
    budget: u64,
) -> Result<EntropyProfile> {
    range.validate()?;
    subset.validate()?;
    compute_rows(range, |n| {
        let gens = subset.intersect_folner(folner, n)?;
        if gens.is_empty() {
            return Ok(None);
        }
        let dist = join_cells(sys, partition, &gens, budget)?;
        let joint = dist.entropy();
        let count = gens.len() as u64;
        Ok(Some(ProfileRow {
            n,
            count,
            joint,
            normalized: joint / count as f64,
            cover_count: None,
        }))
    })
}
